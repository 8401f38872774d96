//! Exhaustive ground truth for small lengths.
//!
//! The space is quotiented by negation (the first flip position is fixed
//! to `+1`), split into prefix-keyed chunks, and each chunk is walked in
//! Gray-code order so every step is a single flip on a [`FlipEvaluator`].
//! Chunks are merged in prefix order, which makes the witness independent
//! of the execution strategy.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::incremental::{FlipEvaluator, FlipMode};
use crate::sequence::Sequence;

pub const FULL_LENGTH_CAP: usize = 28;
pub const SKEW_LENGTH_CAP: usize = 41;

const PREFIX_BITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub length: usize,
    pub mode: FlipMode,
    pub optimal_energy: i64,
    /// Number of optimal sequences counted up to negation.
    pub optimal_classes: u64,
    /// The first optimum in enumeration order.
    pub witness: Sequence,
}

pub fn validate_length(length: usize, mode: FlipMode) -> Result<()> {
    if length == 0 {
        return Err(Error::Empty);
    }
    let (cap, name) = match mode {
        FlipMode::Full => (FULL_LENGTH_CAP, "full"),
        FlipMode::Skew => (SKEW_LENGTH_CAP, "skew"),
    };
    if mode == FlipMode::Skew && length.is_multiple_of(2) {
        return Err(Error::EvenSkewLength(length));
    }
    if length > cap {
        return Err(Error::OracleCap {
            length,
            cap,
            mode: name,
        });
    }
    Ok(())
}

pub fn exhaustive(length: usize, mode: FlipMode) -> Result<OracleResult> {
    exhaustive_with(length, mode, Execution::default())
}

struct Chunk {
    best: i64,
    count: u64,
    witness: Vec<i8>,
}

pub fn exhaustive_with(length: usize, mode: FlipMode, exec: Execution) -> Result<OracleResult> {
    validate_length(length, mode)?;
    let positions = match mode {
        FlipMode::Full => length,
        FlipMode::Skew => length.div_ceil(2),
    };
    let free = positions - 1;
    let prefix = free.min(PREFIX_BITS);
    let suffix = free - prefix;

    let chunks = exec.map(1 << prefix, |chunk| {
        let start: Vec<i8> = (0..positions)
            .map(|p| {
                let bit = p >= 1 && p <= prefix && (chunk >> (p - 1)) & 1 == 1;
                if bit {
                    -1
                } else {
                    1
                }
            })
            .collect();
        let mut ev = FlipEvaluator::from_values(mode, &start).expect("non-empty ±1 start");
        let mut out = Chunk {
            best: ev.energy(),
            count: 1,
            witness: start,
        };
        for step in 1u64..(1u64 << suffix) {
            let pos = 1 + prefix + step.trailing_zeros() as usize;
            let e = ev.apply_unchecked(pos);
            if e < out.best {
                out.best = e;
                out.count = 1;
                out.witness = ev.flip_values().collect();
            } else if e == out.best {
                out.count += 1;
            }
        }
        out
    });

    let mut merged = chunks.into_iter();
    let mut best = merged.next().expect("at least one chunk");
    for c in merged {
        if c.best < best.best {
            best = c;
        } else if c.best == best.best {
            best.count += c.count;
        }
    }
    let witness = FlipEvaluator::from_values(mode, &best.witness)?.sequence();
    Ok(OracleResult {
        length,
        mode,
        optimal_energy: best.best,
        optimal_classes: best.count,
        witness,
    })
}
