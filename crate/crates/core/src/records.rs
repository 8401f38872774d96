//! Published record sequences and their verification.
//!
//! The dataset format is one record per line with three whitespace
//! separated columns: length, merit factor as printed (four decimals), and
//! the hex encoding. Blank lines and lines starting with `#` are ignored.

use serde::Serialize;

use crate::codec::decode;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sequence::{autocorrelations, merit_factor_from_energy, round_half_up_4, Sequence};
use crate::skew::is_skew_symmetric;

/// Skew-symmetric records of odd length 301 to 401, all with `F > 7`.
pub const BUNDLED_DATASET: &str = include_str!("../data/records_301_401.txt");

/// Largest accepted `|F_computed − F_published|`: half a unit in the fourth
/// decimal.
pub const MERIT_TOLERANCE: f64 = 5e-5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordEntry {
    pub length: usize,
    /// As printed, e.g. `"7.7173"`.
    pub published_f: String,
    pub hex: String,
}

impl RecordEntry {
    pub fn published_value(&self) -> f64 {
        self.published_f.parse().unwrap_or(f64::NAN)
    }

    pub fn decode(&self) -> Result<Sequence> {
        decode(&self.hex, self.length)
    }

    /// Integer energy implied by the published merit factor.
    pub fn implied_energy(&self) -> i64 {
        let l = self.length as f64;
        (l * l / (2.0 * self.published_value())).round() as i64
    }

    pub fn verify(&self) -> Verification {
        let decoded = self.decode();
        let Ok(seq) = decoded else {
            return Verification {
                length: self.length,
                published_f: self.published_f.clone(),
                error: decoded.err().map(|e| e.to_string()),
                energy: None,
                merit_factor: None,
                skew_symmetric: false,
                within_tolerance: false,
                rounds_to_published: false,
                energy_matches: false,
                parity_ok: false,
            };
        };
        let energy = autocorrelations(&seq).energy();
        let f = merit_factor_from_energy(self.length, energy);
        let published = self.published_value();
        let within_tolerance = f.is_some_and(|f| (f - published).abs() <= MERIT_TOLERANCE);
        let rounds_to_published = f.is_some_and(|f| format!("{:.4}", round_half_up_4(f)) == self.published_f);
        let skew_symmetric = is_skew_symmetric(&seq);
        let parity_ok = skew_symmetric && energy % 2 == ((self.length as i64 - 1) / 2) % 2;
        Verification {
            length: self.length,
            published_f: self.published_f.clone(),
            error: None,
            energy: Some(energy),
            merit_factor: f,
            skew_symmetric,
            within_tolerance,
            rounds_to_published,
            energy_matches: energy == self.implied_energy(),
            parity_ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub length: usize,
    pub published_f: String,
    /// Decoding failure, if any.
    pub error: Option<String>,
    pub energy: Option<i64>,
    pub merit_factor: Option<f64>,
    pub skew_symmetric: bool,
    pub within_tolerance: bool,
    pub rounds_to_published: bool,
    pub energy_matches: bool,
    pub parity_ok: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.skew_symmetric
            && self.within_tolerance
            && self.rounds_to_published
            && self.energy_matches
            && self.parity_ok
    }
}

pub fn parse_dataset(text: &str) -> Result<Vec<RecordEntry>> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Dataset { line: idx + 1, msg };
        let mut cols = line.split_whitespace();
        let (Some(len), Some(f)) = (cols.next(), cols.next()) else {
            return Err(err("expected: length merit_factor hex".into()));
        };
        let length = len.parse().map_err(|_| err(format!("bad length {len:?}")))?;
        if f.parse::<f64>().is_err() {
            return Err(err(format!("bad merit factor {f:?}")));
        }
        // tolerate hex split across columns
        let hex: String = cols.collect();
        if hex.is_empty() {
            return Err(err("missing hex column".into()));
        }
        entries.push(RecordEntry {
            length,
            published_f: f.to_string(),
            hex,
        });
    }
    Ok(entries)
}

pub fn bundled() -> Vec<RecordEntry> {
    parse_dataset(BUNDLED_DATASET).expect("bundled dataset parses")
}

pub fn verify_all(entries: &[RecordEntry], exec: Execution) -> Vec<Verification> {
    exec.map(entries.len(), |i| entries[i].verify())
}
