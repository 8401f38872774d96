//! Restart-based self-avoiding walk over the single-flip neighborhood.
//!
//! Each step moves to the lowest-energy neighbor whose state has not been
//! visited in the current walk, uphill if necessary. Visited states are
//! remembered by Zobrist fingerprint in a bounded FIFO. A walk restarts from
//! a uniformly random state once it has gone `max_flips / max_restarts`
//! flips without improving its own best, or when every neighbor is
//! visited. A run stops on the target energy, the parity lower bound
//! `⌊L/2⌋`, the flip budget, the restart budget, or the wall-time limit.
//!
//! Randomness comes from ChaCha8, seeded per worker with
//! `SplitMix64(seed + worker_index)`.

use std::collections::{HashSet, VecDeque};
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::atomic::{AtomicI64, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::incremental::{splitmix64, FlipEvaluator, FlipMode};
use crate::sequence::{merit_factor_from_energy, Sequence};

pub const RNG_NAME: &str = "ChaCha8Rng, worker seed SplitMix64(seed + worker)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub length: usize,
    pub mode: FlipMode,
    pub seed: u64,
    /// Stop as soon as a state at or below this energy is found.
    pub target_energy: Option<i64>,
    /// Flip budget of one worker.
    pub max_flips: u64,
    pub max_restarts: u64,
    pub wall_time_limit: Option<f64>,
    pub workers: usize,
    /// Fingerprints retained per walk.
    pub memory_capacity: usize,
    /// Let workers stop once any worker reaches the target. Makes the
    /// multi-worker outcome timing dependent.
    pub share_bound: bool,
}

impl SearchConfig {
    pub fn new(length: usize, mode: FlipMode) -> Self {
        SearchConfig {
            length,
            mode,
            seed: 0,
            target_energy: None,
            max_flips: 100_000_000,
            max_restarts: 1_000,
            wall_time_limit: None,
            workers: 1,
            memory_capacity: 1 << 20,
            share_bound: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.length == 0 {
            return bad("length must be at least 1");
        }
        if self.mode == FlipMode::Skew && self.length.is_multiple_of(2) {
            return Err(Error::EvenSkewLength(self.length));
        }
        if self.max_flips == 0 || self.max_restarts == 0 {
            return bad("flip and restart budgets must be positive");
        }
        if self.workers == 0 {
            return bad("workers must be positive");
        }
        if self.memory_capacity == 0 {
            return bad("memory capacity must be positive");
        }
        if let Some(t) = self.wall_time_limit {
            if t.is_nan() || t <= 0.0 {
                return bad("wall time limit must be positive");
            }
        }
        Ok(())
    }

    fn positions(&self) -> usize {
        match self.mode {
            FlipMode::Full => self.length,
            FlipMode::Skew => self.length.div_ceil(2),
        }
    }

    fn stall_window(&self) -> u64 {
        (self.max_flips / self.max_restarts).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub length: usize,
    pub mode: FlipMode,
    pub seed: u64,
    pub best: Sequence,
    pub energy: i64,
    /// `None` when the energy is zero.
    pub merit_factor: Option<f64>,
    pub flips: u64,
    pub restarts: u64,
    pub wall_time_secs: f64,
    pub target_reached: bool,
    pub workers: usize,
    pub best_worker: usize,
    pub rng: String,
}

/// Smallest energy allowed by parity: `C_k ≡ L − k (mod 2)`, so every lag
/// with `L − k` odd contributes at least 1.
pub fn energy_lower_bound(length: usize) -> i64 {
    (length / 2) as i64
}

#[derive(Default)]
struct PassThroughHasher(u64);

impl Hasher for PassThroughHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | u64::from(b);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = x;
    }
}

/// Bounded visited-state memory with FIFO eviction.
struct Visited {
    set: HashSet<u64, BuildHasherDefault<PassThroughHasher>>,
    order: VecDeque<u64>,
    capacity: usize,
}

impl Visited {
    fn new(capacity: usize) -> Self {
        Visited {
            set: HashSet::default(),
            order: VecDeque::new(),
            capacity,
        }
    }

    fn clear(&mut self) {
        self.set.clear();
        self.order.clear();
    }

    fn contains(&self, fp: u64) -> bool {
        self.set.contains(&fp)
    }

    fn insert(&mut self, fp: u64) {
        if !self.set.insert(fp) {
            return;
        }
        self.order.push_back(fp);
        if self.order.len() > self.capacity {
            if let Some(old) = self.order.pop_front() {
                self.set.remove(&old);
            }
        }
    }
}

struct WorkerOutcome {
    best: Sequence,
    energy: i64,
    flips: u64,
    restarts: u64,
}

/// Events reported to an observer; used to audit walks in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Start { walk: u64, fingerprint: u64 },
    Move { walk: u64, fingerprint: u64, energy: i64 },
}

struct Stop<'a> {
    deadline: Option<Instant>,
    target: i64,
    shared: Option<&'a AtomicI64>,
}

impl Stop<'_> {
    fn reached(&self, energy: i64) -> bool {
        energy <= self.target
    }

    fn should_stop(&self, best: i64, flips: u64) -> bool {
        if self.reached(best) {
            return true;
        }
        if let Some(shared) = self.shared {
            if shared.load(Ordering::Relaxed) <= self.target {
                return true;
            }
        }
        // Instant::now is cheap next to a neighborhood scan but not free.
        flips.is_multiple_of(64) && self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

fn random_state(rng: &mut ChaCha8Rng, positions: usize) -> Vec<i8> {
    (0..positions)
        .map(|_| if rng.random::<bool>() { -1 } else { 1 })
        .collect()
}

fn run_worker(cfg: &SearchConfig, worker: usize, stop: &Stop<'_>, observe: &mut dyn FnMut(Step)) -> WorkerOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed.wrapping_add(worker as u64)));
    let positions = cfg.positions();
    let window = cfg.stall_window();
    let mut visited = Visited::new(cfg.memory_capacity);

    let mut best: Option<(Sequence, i64)> = None;
    let mut flips = 0u64;
    let mut restarts = 0u64;
    let mut walk = 0u64;

    loop {
        let start = random_state(&mut rng, positions);
        let mut ev = FlipEvaluator::from_values(cfg.mode, &start).expect("non-empty ±1 state");
        visited.clear();
        visited.insert(ev.fingerprint());
        observe(Step::Start {
            walk,
            fingerprint: ev.fingerprint(),
        });
        if best.as_ref().is_none_or(|(_, e)| ev.energy() < *e) {
            best = Some((ev.sequence(), ev.energy()));
            publish(stop, ev.energy());
        }
        let mut walk_best = ev.energy();
        let mut stalled = 0u64;

        loop {
            let best_energy = best.as_ref().map_or(i64::MAX, |(_, e)| *e);
            if flips >= cfg.max_flips || stop.should_stop(best_energy, flips) {
                let (best, energy) = best.expect("initial state recorded");
                return WorkerOutcome {
                    best,
                    energy,
                    flips,
                    restarts,
                };
            }
            let Some((pos, _)) = ev.best_neighbor(|p| visited.contains(ev.neighbor_fingerprint(p))) else {
                break;
            };
            let energy = ev.apply_unchecked(pos);
            flips += 1;
            visited.insert(ev.fingerprint());
            observe(Step::Move {
                walk,
                fingerprint: ev.fingerprint(),
                energy,
            });
            if energy < best_energy {
                best = Some((ev.sequence(), energy));
                publish(stop, energy);
            }
            if energy < walk_best {
                walk_best = energy;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= window {
                    break;
                }
            }
        }

        if restarts >= cfg.max_restarts {
            let (best, energy) = best.expect("initial state recorded");
            return WorkerOutcome {
                best,
                energy,
                flips,
                restarts,
            };
        }
        restarts += 1;
        walk += 1;
    }
}

fn publish(stop: &Stop<'_>, energy: i64) {
    if let Some(shared) = stop.shared {
        shared.fetch_min(energy, Ordering::Relaxed);
    }
}

fn effective_target(cfg: &SearchConfig) -> i64 {
    let bound = energy_lower_bound(cfg.length);
    cfg.target_energy.map_or(bound, |t| t.max(bound))
}

fn finish(cfg: &SearchConfig, outcomes: Vec<WorkerOutcome>, started: Instant) -> SearchResult {
    let flips = outcomes.iter().map(|o| o.flips).sum();
    let restarts = outcomes.iter().map(|o| o.restarts).sum();
    let workers = outcomes.len();
    let (best_worker, best) = outcomes
        .into_iter()
        .enumerate()
        .min_by_key(|(w, o)| (o.energy, *w))
        .expect("at least one worker");
    SearchResult {
        length: cfg.length,
        mode: cfg.mode,
        seed: cfg.seed,
        merit_factor: merit_factor_from_energy(cfg.length, best.energy),
        target_reached: cfg.target_energy.is_some_and(|t| best.energy <= t),
        energy: best.energy,
        best: best.best,
        flips,
        restarts,
        wall_time_secs: started.elapsed().as_secs_f64(),
        workers,
        best_worker,
        rng: RNG_NAME.to_string(),
    }
}

fn deadline(cfg: &SearchConfig, started: Instant) -> Option<Instant> {
    cfg.wall_time_limit.map(|t| started + Duration::from_secs_f64(t))
}

/// Single-worker search; deterministic in `cfg.seed` unless a wall-time
/// limit cuts it short. `cfg.workers` is ignored.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    run_observed(cfg, &mut |_| {})
}

pub(crate) fn run_observed(cfg: &SearchConfig, observe: &mut dyn FnMut(Step)) -> Result<SearchResult> {
    cfg.validate()?;
    let started = Instant::now();
    let stop = Stop {
        deadline: deadline(cfg, started),
        target: effective_target(cfg),
        shared: None,
    };
    let outcome = run_worker(cfg, 0, &stop, observe);
    Ok(finish(cfg, vec![outcome], started))
}

/// Runs `cfg.workers` independent walks and keeps the lowest energy, ties
/// going to the lowest worker index.
pub fn run_parallel(cfg: &SearchConfig) -> Result<SearchResult> {
    run_parallel_with(cfg, Execution::default())
}

pub fn run_parallel_with(cfg: &SearchConfig, exec: Execution) -> Result<SearchResult> {
    cfg.validate()?;
    let started = Instant::now();
    let shared = AtomicI64::new(i64::MAX);
    let stop = Stop {
        deadline: deadline(cfg, started),
        target: effective_target(cfg),
        shared: (cfg.share_bound && cfg.workers > 1).then_some(&shared),
    };
    let outcomes = exec.map(cfg.workers, |w| run_worker(cfg, w, &stop, &mut |_| {}));
    Ok(finish(cfg, outcomes, started))
}
