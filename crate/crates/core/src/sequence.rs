//! The ±1 sequence type and exact evaluation of its aperiodic
//! autocorrelations, energy, merit factor, peak sidelobe level and the
//! modulus of its generating polynomial on the unit circle.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary sequence `s_1 … s_L` with every entry `+1` or `-1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Sequence(Vec<i8>);

impl Sequence {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::NotBinary {
                index,
                value: value.into(),
            });
        }
        Ok(Sequence(values))
    }

    /// Builds a sequence from bits, `false ↦ +1` and `true ↦ -1`.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        Sequence::new(bits.into_iter().map(|b| if b { -1 } else { 1 }).collect())
    }

    pub fn all_ones(len: usize) -> Result<Self> {
        Sequence::new(vec![1; len])
    }

    /// Callers guarantee the values are non-empty and ±1.
    pub(crate) fn from_trusted(values: Vec<i8>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|&v| v == 1 || v == -1));
        Sequence(values)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    /// `+1 ↦ false`, `-1 ↦ true`.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().map(|&v| v < 0)
    }

    pub fn negated(&self) -> Sequence {
        Sequence(self.0.iter().map(|&v| -v).collect())
    }

    pub fn reversed(&self) -> Sequence {
        Sequence(self.0.iter().rev().copied().collect())
    }

    /// `s'_i = (-1)^i s_i`, counting from 1.
    pub fn alternated(&self) -> Sequence {
        Sequence(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &v)| if i % 2 == 0 { -v } else { v })
                .collect(),
        )
    }
}

impl TryFrom<Vec<i8>> for Sequence {
    type Error = Error;

    fn try_from(values: Vec<i8>) -> Result<Self> {
        Sequence::new(values)
    }
}

impl From<Sequence> for Vec<i8> {
    fn from(s: Sequence) -> Self {
        s.0
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Sequence(")?;
        for &v in &self.0 {
            f.write_str(if v > 0 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

/// Off-peak autocorrelations `C_1 … C_{L-1}` and their energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrelationProfile {
    c: Vec<i64>,
    energy: i64,
}

impl AutocorrelationProfile {
    pub(crate) fn from_correlations(c: Vec<i64>) -> Self {
        let energy = c.iter().map(|&x| x * x).sum();
        AutocorrelationProfile { c, energy }
    }

    /// Sequence length `L`.
    pub fn length(&self) -> usize {
        self.c.len() + 1
    }

    /// `C_k` lives at index `k - 1`.
    pub fn correlations(&self) -> &[i64] {
        &self.c
    }

    /// `C_k` for `1 ≤ k < L`.
    pub fn lag(&self, k: usize) -> i64 {
        self.c[k - 1]
    }

    pub fn energy(&self) -> i64 {
        self.energy
    }

    /// Peak sidelobe level, 0 for `L = 1`.
    pub fn peak_sidelobe(&self) -> i64 {
        self.c.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

pub(crate) fn correlations_of(values: &[i8]) -> Vec<i64> {
    let len = values.len();
    (1..len)
        .map(|k| {
            values[..len - k]
                .iter()
                .zip(&values[k..])
                .map(|(&a, &b)| i64::from(a * b))
                .sum()
        })
        .collect()
}

pub fn autocorrelations(s: &Sequence) -> AutocorrelationProfile {
    AutocorrelationProfile::from_correlations(correlations_of(&s.0))
}

pub fn energy(s: &Sequence) -> i64 {
    autocorrelations(s).energy
}

/// `L² / (2E)`, or `None` when `E = 0` (only `L = 1`): the merit factor is
/// unbounded there.
pub fn merit_factor_from_energy(length: usize, energy: i64) -> Option<f64> {
    if energy == 0 {
        return None;
    }
    let l = length as f64;
    Some(l * l / (2.0 * energy as f64))
}

/// Merit factor of `s`. The energy is exact; only the final division is
/// floating point.
pub fn merit_factor(s: &Sequence) -> Option<f64> {
    merit_factor_from_energy(s.len(), energy(s))
}

pub fn psl(s: &Sequence) -> Result<i64> {
    if s.len() < 2 {
        return Err(Error::TooShort(s.len()));
    }
    Ok(autocorrelations(s).peak_sidelobe())
}

/// Rounds half up at the fourth decimal, the precision of published values.
pub fn round_half_up_4(x: f64) -> f64 {
    (x * 1e4 + 0.5).floor() / 1e4
}

/// The quantities usually quoted for a sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeritReport {
    pub length: usize,
    pub energy: i64,
    /// `None` encodes an unbounded merit factor (`E = 0`).
    pub merit_factor: Option<f64>,
    pub psl: i64,
}

impl MeritReport {
    pub fn of(s: &Sequence) -> MeritReport {
        let profile = autocorrelations(s);
        MeritReport {
            length: s.len(),
            energy: profile.energy,
            merit_factor: merit_factor_from_energy(s.len(), profile.energy),
            psl: profile.peak_sidelobe(),
        }
    }
}

/// `|p(e^{2πi m/M})|` for `m = 0 … M-1`, where `p(z) = Σ s_j z^{j-1}`.
///
/// Twiddles are taken from an exact `M`-point table indexed by `(j·m) mod M`
/// so rounding does not grow with the exponent.
pub fn spectrum_modulus(s: &Sequence, samples: usize) -> Vec<f64> {
    let m_total = samples;
    let table: Vec<(f64, f64)> = (0..m_total)
        .map(|r| {
            let angle = TAU * r as f64 / m_total as f64;
            (angle.cos(), angle.sin())
        })
        .collect();
    (0..m_total)
        .map(|m| {
            let (mut re, mut im) = (0.0, 0.0);
            let mut idx = 0usize;
            for &v in &s.0 {
                let (c, sn) = table[idx];
                re += f64::from(v) * c;
                im += f64::from(v) * sn;
                idx += m;
                if idx >= m_total {
                    idx -= m_total;
                }
            }
            re.hypot(im)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i8]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    fn barker13() -> Sequence {
        seq(&[1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1])
    }

    #[test]
    fn rejects_empty_and_non_binary() {
        assert_eq!(Sequence::new(vec![]), Err(Error::Empty));
        assert_eq!(
            Sequence::new(vec![1, 0, -1]),
            Err(Error::NotBinary { index: 1, value: 0 })
        );
    }

    #[test]
    fn barker4_profile() {
        let p = autocorrelations(&seq(&[1, 1, 1, -1]));
        assert_eq!(p.correlations(), &[1, 0, -1]);
        assert_eq!(p.energy(), 2);
        assert_eq!(merit_factor(&seq(&[1, 1, 1, -1])), Some(4.0));
        assert_eq!(psl(&seq(&[1, 1, 1, -1])), Ok(1));
    }

    #[test]
    fn single_entry_has_no_lags() {
        let s = seq(&[1]);
        let p = autocorrelations(&s);
        assert!(p.correlations().is_empty());
        assert_eq!(p.energy(), 0);
        assert_eq!(merit_factor(&s), None);
        assert_eq!(psl(&s), Err(Error::TooShort(1)));
    }

    #[test]
    fn all_ones_closed_form() {
        for len in 1..40usize {
            let p = autocorrelations(&Sequence::all_ones(len).unwrap());
            for k in 1..len {
                assert_eq!(p.lag(k), (len - k) as i64);
            }
            let l = len as i64;
            assert_eq!(p.energy(), (l - 1) * l * (2 * l - 1) / 6);
        }
        assert_eq!(psl(&Sequence::all_ones(5).unwrap()), Ok(4));
    }

    #[test]
    fn barker13_landmark() {
        let b = barker13();
        assert_eq!(energy(&b), 6);
        assert_eq!(psl(&b), Ok(1));
        let f = merit_factor(&b).unwrap();
        assert!((f - 169.0 / 12.0).abs() < 1e-12);
        assert_eq!(round_half_up_4(f), 14.0833);
        assert_eq!(energy(&seq(&[1, 1])), 1);
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(round_half_up_4(7.717291), 7.7173);
        assert_eq!(round_half_up_4(7.00115), 7.0012);
        assert_eq!(round_half_up_4(4.0), 4.0);
    }

    #[test]
    fn spectrum_of_constant_polynomial() {
        assert!(spectrum_modulus(&seq(&[1]), 5).iter().all(|&v| v == 1.0));
        // p(1) = Σ s_j
        let b = barker13();
        assert!((spectrum_modulus(&b, 8)[0] - 5.0).abs() < 1e-12);
    }
}
