//! Skew-symmetric sequences: odd length `L = 2n − 1` with
//! `s_{n+i} = (−1)^i s_{n−i}` for `i = 1 … n−1`.
//!
//! Such a sequence is fixed by its first `n` entries, and every odd-lag
//! autocorrelation vanishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::Sequence;

/// The first `n` entries of a skew-symmetric sequence of length `2n − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfSequence(Sequence);

impl HalfSequence {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        Sequence::new(values).map(HalfSequence)
    }

    pub fn from_sequence(s: Sequence) -> Self {
        HalfSequence(s)
    }

    /// `n`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// `2n − 1`.
    pub fn full_length(&self) -> usize {
        2 * self.0.len() - 1
    }

    pub fn values(&self) -> &[i8] {
        self.0.values()
    }

    pub fn as_sequence(&self) -> &Sequence {
        &self.0
    }
}

/// Sign relating full position `n + i` to `n − i` (both 1-based).
#[inline]
pub(crate) fn mirror_sign(i: usize) -> i8 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn expand_values(half: &[i8]) -> Vec<i8> {
    let n = half.len();
    let mut full = Vec::with_capacity(2 * n - 1);
    full.extend_from_slice(half);
    // 0-based: full[n-1+i] = (-1)^i full[n-1-i]
    full.extend((1..n).map(|i| mirror_sign(i) * half[n - 1 - i]));
    full
}

pub fn expand(h: &HalfSequence) -> Sequence {
    Sequence::from_trusted(expand_values(h.values()))
}

pub fn is_skew_symmetric(s: &Sequence) -> bool {
    let len = s.len();
    if len.is_multiple_of(2) {
        return false;
    }
    let n = len.div_ceil(2);
    let v = s.values();
    (1..n).all(|i| v[n - 1 + i] == mirror_sign(i) * v[n - 1 - i])
}

pub fn contract(s: &Sequence) -> Result<HalfSequence> {
    if !is_skew_symmetric(s) {
        return Err(Error::NotSkewSymmetric);
    }
    let n = s.len().div_ceil(2);
    Ok(HalfSequence(Sequence::from_trusted(s.values()[..n].to_vec())))
}
