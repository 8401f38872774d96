//! Low-autocorrelation binary sequences (LABS).
//!
//! Exact integer evaluation of aperiodic autocorrelations, energy, merit
//! factor and peak sidelobe level; the skew-symmetric half representation;
//! an incremental single-flip evaluator; a restart-based self-avoiding
//! local search; and an exhaustive oracle for small lengths.
//!
//! The `parallel` feature (on by default) runs the data-parallel loops
//! (search workers, oracle partitions, batch verification) on rayon. With
//! the feature disabled every entry point falls back to a sequential loop
//! and produces the same results.

pub mod codec;
mod error;
pub mod exec;
pub mod incremental;
pub mod oracle;
pub mod records;
pub mod search;
pub mod sequence;
pub mod skew;

pub use codec::{decode, encode, HexRecord};
pub use error::{Error, Result};
pub use exec::Execution;
pub use incremental::{FlipEvaluator, FlipMode};
pub use oracle::{exhaustive, OracleResult};
pub use records::RecordEntry;
pub use search::{run_parallel, run_parallel_with, run_search, SearchConfig, SearchResult};
pub use sequence::{
    autocorrelations, energy, merit_factor, merit_factor_from_energy, psl, round_half_up_4, spectrum_modulus,
    AutocorrelationProfile, MeritReport, Sequence,
};
pub use skew::{contract, expand, is_skew_symmetric, HalfSequence};
