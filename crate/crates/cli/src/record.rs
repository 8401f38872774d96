//! Persisted search results: one JSON object per line, append-only.

use std::fs::OpenOptions;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use labs_core::{decode, encode, energy, FlipMode, SearchConfig, SearchResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: String,
    pub config: SearchConfig,
    pub length: usize,
    pub mode: FlipMode,
    pub seed: u64,
    pub energy: i64,
    pub merit_factor: Option<f64>,
    pub flips: u64,
    pub restarts: u64,
    pub wall_time_secs: f64,
    pub target_reached: bool,
    pub workers: usize,
    pub best_worker: usize,
    pub rng: String,
    pub hex: String,
}

impl ResultRecord {
    pub fn new(config: &SearchConfig, result: &SearchResult) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        ResultRecord {
            timestamp,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            length: result.length,
            mode: result.mode,
            seed: result.seed,
            energy: result.energy,
            merit_factor: result.merit_factor,
            flips: result.flips,
            restarts: result.restarts,
            wall_time_secs: result.wall_time_secs,
            target_reached: result.target_reached,
            workers: result.workers,
            best_worker: result.best_worker,
            rng: result.rng.clone(),
            hex: encode(&result.best).hex,
        }
    }

    /// Decodes the stored sequence and checks it reproduces the stored
    /// energy.
    pub fn reverify(&self) -> bool {
        decode(&self.hex, self.length).is_ok_and(|s| energy(&s) == self.energy)
    }

    /// Copy with the run-dependent timing fields zeroed.
    pub fn without_timing(&self) -> Self {
        ResultRecord {
            timestamp: 0,
            wall_time_secs: 0.0,
            ..self.clone()
        }
    }
}

pub fn append(path: &Path, record: &ResultRecord) -> io::Result<()> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    // one write per record keeps lines whole
    file.write_all(line.as_bytes())
}

pub fn read_all(path: &Path) -> io::Result<Vec<ResultRecord>> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in io::BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
