//! The `labs` command-line tool.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or input error,
//! 3 internal error.

pub mod record;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use labs_core::records::{bundled, parse_dataset, verify_all};
use labs_core::{
    decode, encode, exhaustive, is_skew_symmetric, run_parallel, spectrum_modulus, Execution, FlipMode, MeritReport,
    SearchConfig, Sequence,
};
use thiserror::Error;

use crate::record::ResultRecord;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0} record(s) failed verification")]
    Mismatch(usize),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<labs_core::Error> for CliError {
    fn from(e: labs_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Skew,
}

impl From<Mode> for FlipMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => FlipMode::Full,
            Mode::Skew => FlipMode::Skew,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "labs",
    version,
    about = "Low-autocorrelation binary sequences: evaluate, verify, search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print energy, merit factor, PSL and skew-symmetry of a hex sequence.
    Eval {
        hex: String,
        #[arg(long)]
        length: usize,
    },
    /// Print a hex sequence as a string of + and -.
    Decode {
        hex: String,
        #[arg(long)]
        length: usize,
    },
    /// Encode a sequence given as + and - (or 0 and 1 bits, 0 = +1).
    Encode { sequence: String },
    /// Check every record of a dataset (the bundled one by default).
    Verify {
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Run the parallel local search and emit a result record.
    Search(SearchArgs),
    /// Re-evaluate every record of a results file.
    Recheck { results: PathBuf },
    /// Write `t,modulus` CSV of |p(e^{2πit})| on a uniform grid of [0, 1).
    Spectrum {
        hex: String,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive optimum for small lengths.
    Oracle {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
    },
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub length: usize,
    #[arg(long, value_enum, default_value_t = Mode::Skew)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub target_energy: Option<i64>,
    #[arg(long, env = "LABS_MAX_FLIPS", default_value_t = 100_000_000)]
    pub max_flips: u64,
    #[arg(long, env = "LABS_MAX_RESTARTS", default_value_t = 1_000)]
    pub max_restarts: u64,
    /// Seconds.
    #[arg(long, env = "LABS_WALL_TIME")]
    pub wall_time: Option<f64>,
    #[arg(long, env = "LABS_MEMORY", default_value_t = 1 << 20)]
    pub memory: usize,
    /// Results file; the record is appended as one JSON line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            length: self.length,
            mode: self.mode.into(),
            seed: self.seed,
            target_energy: self.target_energy,
            max_flips: self.max_flips,
            max_restarts: self.max_restarts,
            wall_time_limit: self.wall_time,
            workers: self.workers,
            memory_capacity: self.memory,
            // a fixed seed should mean a fixed answer
            share_bound: false,
        }
    }
}

fn fmt_merit(f: Option<f64>) -> (String, String) {
    match f {
        Some(f) => (format!("{f:.4}"), format!("{f:?}")),
        None => ("inf".into(), "inf".into()),
    }
}

pub fn cmd_eval(hex: &str, length: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let s = decode(hex, length)?;
    let report = MeritReport::of(&s);
    let (f4, f) = fmt_merit(report.merit_factor);
    writeln!(out, "length: {}", report.length)?;
    writeln!(out, "energy: {}", report.energy)?;
    writeln!(out, "merit_factor: {f4}")?;
    writeln!(out, "merit_factor_full: {f}")?;
    writeln!(out, "psl: {}", report.psl)?;
    writeln!(out, "skew_symmetric: {}", is_skew_symmetric(&s))?;
    Ok(())
}

pub fn cmd_decode(hex: &str, length: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let s = decode(hex, length)?;
    writeln!(out, "{}", signs(&s))?;
    Ok(())
}

fn signs(s: &Sequence) -> String {
    s.values().iter().map(|&v| if v > 0 { '+' } else { '-' }).collect()
}

pub fn parse_signs(text: &str) -> Result<Sequence, CliError> {
    let values = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '+' | '0' => Ok(1),
            '-' | '1' => Ok(-1),
            other => Err(CliError::Usage(format!("unexpected character {other:?} in sequence"))),
        })
        .collect::<Result<Vec<i8>, _>>()?;
    Ok(Sequence::new(values)?)
}

pub fn cmd_encode(sequence: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let rec = encode(&parse_signs(sequence)?);
    writeln!(out, "{} {}", rec.length, rec.hex)?;
    Ok(())
}

pub fn cmd_verify(dataset: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let entries = match dataset {
        Some(path) => parse_dataset(&std::fs::read_to_string(path)?)?,
        None => bundled(),
    };
    let results = verify_all(&entries, Execution::default());
    let mut failed = 0;
    for v in &results {
        let status = if v.passed() { "ok" } else { "FAIL" };
        if !v.passed() {
            failed += 1;
        }
        match (&v.error, v.energy, v.merit_factor) {
            (Some(err), _, _) => writeln!(out, "{status} L={} published={} error: {err}", v.length, v.published_f)?,
            (None, Some(e), f) => writeln!(
                out,
                "{status} L={} published={} E={e} F={} skew={} parity={}",
                v.length,
                v.published_f,
                fmt_merit(f).1,
                v.skew_symmetric,
                v.parity_ok
            )?,
            _ => unreachable!("decoded records always carry an energy"),
        }
    }
    writeln!(out, "{} of {} records verified", results.len() - failed, results.len())?;
    if failed > 0 {
        return Err(CliError::Mismatch(failed));
    }
    Ok(())
}

pub fn cmd_search(args: &SearchArgs, out: &mut dyn Write) -> Result<ResultRecord, CliError> {
    let cfg = args.config();
    let result = run_parallel(&cfg)?;
    let rec = ResultRecord::new(&cfg, &result);
    if let Some(path) = &args.out {
        record::append(path, &rec)?;
    }
    let line = serde_json::to_string(&rec).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(rec)
}

pub fn cmd_recheck(path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let records = record::read_all(path)?;
    let failed = records.iter().filter(|r| !r.reverify()).count();
    writeln!(
        out,
        "{} of {} records reproduce their energy",
        records.len() - failed,
        records.len()
    )?;
    if failed > 0 {
        return Err(CliError::Mismatch(failed));
    }
    Ok(())
}

/// Plain decimal with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.8}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn cmd_spectrum(hex: &str, length: usize, samples: usize, out: &mut dyn Write) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let s = decode(hex, length)?;
    writeln!(out, "t,modulus")?;
    for (m, value) in spectrum_modulus(&s, samples).into_iter().enumerate() {
        writeln!(out, "{},{}", sig9(m as f64 / samples as f64), sig9(value))?;
    }
    Ok(())
}

pub fn cmd_oracle(length: usize, mode: Mode, out: &mut dyn Write) -> Result<(), CliError> {
    let r = exhaustive(length, mode.into())?;
    let (f4, f) = fmt_merit(labs_core::merit_factor_from_energy(length, r.optimal_energy));
    writeln!(out, "length: {length}")?;
    writeln!(out, "mode: {}", if mode == Mode::Full { "full" } else { "skew" })?;
    writeln!(out, "optimal_energy: {}", r.optimal_energy)?;
    writeln!(out, "merit_factor: {f4}")?;
    writeln!(out, "merit_factor_full: {f}")?;
    writeln!(out, "optimal_classes: {}", r.optimal_classes)?;
    writeln!(out, "witness: {}", encode(&r.witness).hex)?;
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval { hex, length } => cmd_eval(hex, *length, out),
        Command::Decode { hex, length } => cmd_decode(hex, *length, out),
        Command::Encode { sequence } => cmd_encode(sequence, out),
        Command::Verify { dataset } => cmd_verify(dataset.as_deref(), out),
        Command::Search(args) => cmd_search(args, out).map(|_| ()),
        Command::Recheck { results } => cmd_recheck(results, out),
        Command::Spectrum {
            hex,
            length,
            samples,
            out: path,
        } => match path {
            Some(path) => {
                let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                cmd_spectrum(hex, *length, *samples, &mut file)?;
                file.flush()?;
                Ok(())
            }
            None => cmd_spectrum(hex, *length, *samples, out),
        },
        Command::Oracle { length, mode } => cmd_oracle(*length, *mode, out),
    }
}
