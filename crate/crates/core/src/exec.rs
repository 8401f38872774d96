//! Sequential or rayon-backed execution of independent index-keyed jobs.
//!
//! Every parallel entry point in the crate goes through [`Execution::map`],
//! which always returns results in index order, so the choice of strategy
//! never changes an outcome.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon global pool. Without the `parallel` feature this
    /// is the same as `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluates `job(0..n)` and collects the results in index order.
    pub fn map<T, F>(self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return (0..n).into_par_iter().map(job).collect();
        }
        (0..n).map(job).collect()
    }
}
