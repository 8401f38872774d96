//! Single-flip maintenance of the autocorrelation vector.
//!
//! Flipping `s_p` changes each lag by
//! `ΔC_k = −2·s_p·(s_{p−k} + s_{p+k})` (out-of-range terms omitted), so a
//! flip or a flip delta costs `O(L)` instead of the `O(L²)` from-scratch
//! evaluation. In skew mode a flip position is a half index `j`, which
//! flips full positions `j` and `L−1−j` (one position when `j = n−1`);
//! odd lags stay zero and are skipped.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{correlations_of, AutocorrelationProfile, Sequence};
use crate::skew::{expand_values, HalfSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlipMode {
    /// Positions `0 … L−1`, one entry per flip.
    Full,
    /// Half indices `0 … n−1` of a skew-symmetric sequence.
    Skew,
}

/// Zobrist key of flip position `pos`: SplitMix64 of `pos + 1`.
///
/// A state's fingerprint is the XOR of the keys of every flip position
/// holding `−1` (the half sequence in skew mode).
pub fn position_key(pos: usize) -> u64 {
    splitmix64(pos as u64 + 1)
}

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn padded(full: &[i8]) -> Vec<i64> {
    let len = full.len();
    let mut pad = vec![0; 3 * len];
    for (dst, &v) in pad[len..2 * len].iter_mut().zip(full) {
        *dst = i64::from(v);
    }
    pad
}

/// Mutable single-owner evaluation state. Invariant: `c` and `energy`
/// always equal a from-scratch evaluation of `s`.
#[derive(Debug, Clone)]
pub struct FlipEvaluator {
    mode: FlipMode,
    len: usize,
    // pad[len + i] = s_i, with `len` zeros on each side so lags that fall
    // off either end read as 0.
    pad: Vec<i64>,
    // c[k] = C_k for 1 ≤ k < L; c[0] is unused.
    c: Vec<i64>,
    energy: i64,
    keys: Vec<u64>,
    fingerprint: u64,
    work: Cell<u64>,
}

impl FlipEvaluator {
    pub fn full(s: &Sequence) -> Self {
        Self::build(FlipMode::Full, s.values().to_vec())
    }

    pub fn skew(h: &HalfSequence) -> Self {
        Self::build(FlipMode::Skew, expand_values(h.values()))
    }

    pub fn from_values(mode: FlipMode, values: &[i8]) -> Result<Self> {
        let s = Sequence::new(values.to_vec())?;
        Ok(match mode {
            FlipMode::Full => Self::full(&s),
            FlipMode::Skew => Self::skew(&HalfSequence::from_sequence(s)),
        })
    }

    fn build(mode: FlipMode, full: Vec<i8>) -> Self {
        let positions = match mode {
            FlipMode::Full => full.len(),
            FlipMode::Skew => full.len().div_ceil(2),
        };
        let keys: Vec<u64> = (0..positions).map(position_key).collect();
        let fingerprint = full[..positions]
            .iter()
            .zip(&keys)
            .filter(|(&v, _)| v < 0)
            .fold(0, |acc, (_, &k)| acc ^ k);
        let mut c = vec![0];
        c.extend(correlations_of(&full));
        let energy = c.iter().map(|&x| x * x).sum();
        FlipEvaluator {
            mode,
            len: full.len(),
            pad: padded(&full),
            c,
            energy,
            keys,
            fingerprint,
            work: Cell::new(0),
        }
    }

    fn current(&self) -> &[i64] {
        &self.pad[self.len..2 * self.len]
    }

    pub fn mode(&self) -> FlipMode {
        self.mode
    }

    /// Full sequence length `L`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Number of flip positions: `L` in full mode, `n` in skew mode.
    pub fn positions(&self) -> usize {
        self.keys.len()
    }

    pub fn energy(&self) -> i64 {
        self.energy
    }

    /// `C_1 … C_{L−1}`.
    pub fn correlations(&self) -> &[i64] {
        &self.c[1..]
    }

    pub fn profile(&self) -> AutocorrelationProfile {
        AutocorrelationProfile::from_correlations(self.c[1..].to_vec())
    }

    /// The current full sequence.
    pub fn sequence(&self) -> Sequence {
        Sequence::from_trusted(self.current().iter().map(|&v| v as i8).collect())
    }

    /// Signs at the flip positions (the half sequence in skew mode).
    pub fn flip_values(&self) -> impl Iterator<Item = i8> + '_ {
        self.current()[..self.positions()].iter().map(|&v| v as i8)
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Fingerprint of the state reached by flipping `pos`.
    pub fn neighbor_fingerprint(&self, pos: usize) -> u64 {
        self.fingerprint ^ self.keys[pos]
    }

    /// Count of lag updates performed so far, for cost measurements.
    pub fn work(&self) -> u64 {
        self.work.get()
    }

    fn check(&self, pos: usize) -> Result<()> {
        if pos < self.positions() {
            Ok(())
        } else {
            Err(Error::PositionOutOfRange {
                pos,
                size: self.positions(),
            })
        }
    }

    /// Energy change caused by flipping `pos`, leaving the state untouched.
    pub fn delta_energy(&self, pos: usize) -> Result<i64> {
        self.check(pos)?;
        Ok(self.delta_unchecked(pos))
    }

    fn delta_unchecked(&self, pos: usize) -> i64 {
        let len = self.len;
        match self.mode {
            FlipMode::Full => {
                self.work.set(self.work.get() + (len as u64 - 1));
                let sp = self.sign(pos);
                let base = len + pos;
                (1..len)
                    .map(|k| {
                        let d = -2 * sp * (self.pad[base - k] + self.pad[base + k]);
                        d * (2 * self.c[k] + d)
                    })
                    .sum()
            }
            FlipMode::Skew => {
                self.work.set(self.work.get() + (len as u64 - 1) / 2);
                let a = pos;
                let b = len - 1 - pos;
                let (sa, sb) = (self.sign(a), self.sign(b));
                let pad = &self.pad;
                let (ba, bb) = (len + a, len + b);
                let mut delta = 0;
                // even lags only: odd lags are identically zero
                if a == b {
                    for k in (2..len).step_by(2) {
                        let d = -2 * sa * (pad[ba - k] + pad[ba + k]);
                        delta += d * (2 * self.c[k] + d);
                    }
                    return delta;
                }
                let joint = b - a;
                for k in (2..len).step_by(2) {
                    let mut d = -2 * (sa * (pad[ba - k] + pad[ba + k]) + sb * (pad[bb - k] + pad[bb + k]));
                    // the s_a·s_b product flips twice and is unchanged
                    if k == joint {
                        d += 4 * sa * sb;
                    }
                    delta += d * (2 * self.c[k] + d);
                }
                delta
            }
        }
    }

    /// `delta_energy` for every flip position at once.
    ///
    /// Lag-outer order keeps the inner loop on contiguous memory. In skew
    /// mode the mirrored position contributes exactly what the primary one
    /// does at every even lag (`s_b·(s_{b−k} + s_{b+k}) = s_a·(s_{a−k} + s_{a+k})`),
    /// so each lag costs one term per position, with a fix-up at the lag
    /// `b − a` where the pair interacts. The centre position flips alone.
    pub fn all_deltas(&self) -> Vec<i64> {
        let len = self.len;
        let n = self.positions();
        let mut out = vec![0i64; n];
        let pad = &self.pad;
        let signs = &pad[len..len + n];
        let (first, step, scale, paired): (usize, usize, i64, usize) = match self.mode {
            FlipMode::Full => (1, 1, -2, n),
            FlipMode::Skew => (2, 2, -4, n - 1),
        };
        let lags = (first..len).step_by(step).len();
        self.work.set(self.work.get() + (n * lags) as u64);
        for k in (first..len).step_by(step) {
            let ck = self.c[k];
            let lo = &pad[len - k..len - k + paired];
            let hi = &pad[len + k..len + k + paired];
            for (((o, &s), &l), &h) in out[..paired].iter_mut().zip(signs).zip(lo).zip(hi) {
                let d = scale * s * (l + h);
                *o += d * (2 * ck + d);
            }
        }
        if self.mode == FlipMode::Skew {
            for (a, o) in out[..paired].iter_mut().enumerate() {
                let joint = len - 1 - 2 * a;
                let (sa, sb) = (pad[len + a], pad[2 * len - 1 - a]);
                let ck = self.c[joint];
                let naive = scale * sa * (pad[len + a - joint] + pad[len + a + joint]);
                let exact = naive + 4 * sa * sb;
                *o += exact * (2 * ck + exact) - naive * (2 * ck + naive);
            }
            out[n - 1] = self.delta_unchecked(n - 1);
        }
        out
    }

    #[inline]
    fn sign(&self, i: usize) -> i64 {
        self.pad[self.len + i]
    }

    fn flip_single(&mut self, p: usize) {
        let len = self.len;
        self.work.set(self.work.get() + (len as u64 - 1));
        let sp = self.sign(p);
        let base = len + p;
        let mut energy = self.energy;
        for k in 1..len {
            let d = -2 * sp * (self.pad[base - k] + self.pad[base + k]);
            if d != 0 {
                let old = self.c[k];
                let new = old + d;
                energy += new * new - old * old;
                self.c[k] = new;
            }
        }
        self.pad[base] = -sp;
        self.energy = energy;
    }

    /// Flips `pos` and returns the new energy.
    pub fn apply_flip(&mut self, pos: usize) -> Result<i64> {
        self.check(pos)?;
        Ok(self.apply_unchecked(pos))
    }

    pub(crate) fn apply_unchecked(&mut self, pos: usize) -> i64 {
        match self.mode {
            FlipMode::Full => self.flip_single(pos),
            FlipMode::Skew => {
                let mirror = self.len - 1 - pos;
                self.flip_single(pos);
                if mirror != pos {
                    self.flip_single(mirror);
                }
            }
        }
        self.fingerprint ^= self.keys[pos];
        self.energy
    }

    /// Lowest-delta flip among positions for which `excluded` is false,
    /// ties going to the lowest position. `None` when every position is
    /// excluded.
    pub fn best_neighbor(&self, excluded: impl Fn(usize) -> bool) -> Option<(usize, i64)> {
        let mut best: Option<(usize, i64)> = None;
        for (pos, d) in self.all_deltas().into_iter().enumerate() {
            if excluded(pos) {
                continue;
            }
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((pos, d));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{autocorrelations, energy};
    use crate::skew::{expand, is_skew_symmetric};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const BARKER13: [i8; 13] = [1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1];

    fn random_values(rng: &mut ChaCha8Rng, len: usize) -> Vec<i8> {
        (0..len).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
    }

    // Flip `pos` of the mode's variable on a plain copy and re-evaluate.
    fn brute_flip(mode: FlipMode, flip: &[i8], pos: usize) -> Sequence {
        let mut v = flip.to_vec();
        v[pos] = -v[pos];
        match mode {
            FlipMode::Full => Sequence::new(v).unwrap(),
            FlipMode::Skew => expand(&HalfSequence::new(v).unwrap()),
        }
    }

    #[test]
    fn initial_energies() {
        let b = FlipEvaluator::full(&Sequence::new(BARKER13.to_vec()).unwrap());
        assert_eq!(b.energy(), 6);
        let ones = FlipEvaluator::full(&Sequence::all_ones(5).unwrap());
        assert_eq!(ones.energy(), 30);
        let h = FlipEvaluator::skew(&HalfSequence::new(BARKER13[..7].to_vec()).unwrap());
        assert_eq!(h.energy(), 6);
        assert_eq!(h.positions(), 7);
        assert_eq!(h.len(), 13);
    }

    #[test]
    fn barker4_last_flip() {
        let ev = FlipEvaluator::full(&Sequence::new(vec![1, 1, 1, -1]).unwrap());
        assert_eq!(ev.delta_energy(3), Ok(12));
        assert_eq!(ev.delta_energy(3), Ok(12));
        assert_eq!(ev.energy(), 2);
    }

    #[test]
    fn out_of_range_positions() {
        let mut ev = FlipEvaluator::skew(&HalfSequence::new(vec![1, 1, -1]).unwrap());
        assert_eq!(ev.delta_energy(3), Err(Error::PositionOutOfRange { pos: 3, size: 3 }));
        assert_eq!(ev.apply_flip(5), Err(Error::PositionOutOfRange { pos: 5, size: 3 }));
    }

    #[test]
    fn skew_flip_of_barker13_matches_recompute() {
        let mut ev = FlipEvaluator::skew(&HalfSequence::new(BARKER13[..7].to_vec()).unwrap());
        let expected = energy(&brute_flip(FlipMode::Skew, &BARKER13[..7], 0));
        let delta = ev.delta_energy(0).unwrap();
        assert_eq!(ev.apply_flip(0).unwrap(), expected);
        assert_eq!(6 + delta, expected);
        assert!(is_skew_symmetric(&ev.sequence()));
    }

    #[test]
    fn single_position_space() {
        let ev = FlipEvaluator::skew(&HalfSequence::new(vec![1]).unwrap());
        assert_eq!(ev.best_neighbor(|_| false), Some((0, 0)));
        assert_eq!(ev.best_neighbor(|_| true), None);
        let ev = FlipEvaluator::full(&Sequence::new(vec![-1]).unwrap());
        assert_eq!(ev.best_neighbor(|_| false), Some((0, 0)));
    }

    #[test]
    fn delta_and_flip_match_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for mode in [FlipMode::Full, FlipMode::Skew] {
            for _ in 0..2000 {
                let len = rng.random_range(1..=40);
                let flip = random_values(&mut rng, len);
                let mut ev = FlipEvaluator::from_values(mode, &flip).unwrap();
                let pos = rng.random_range(0..len);
                let after = brute_flip(mode, &flip, pos);
                let before = ev.energy();
                let delta = ev.delta_energy(pos).unwrap();
                assert_eq!(delta, energy(&after) - before);
                ev.apply_flip(pos).unwrap();
                assert_eq!(ev.sequence(), after);
                assert_eq!(ev.profile(), autocorrelations(&after));
                ev.apply_flip(pos).unwrap();
                assert_eq!(ev.energy(), before);
                assert_eq!(ev.flip_values().collect::<Vec<_>>(), flip);
            }
        }
    }

    #[test]
    fn flip_chains_stay_exact_and_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for mode in [FlipMode::Full, FlipMode::Skew] {
            let flip = random_values(&mut rng, 61);
            let mut ev = FlipEvaluator::from_values(mode, &flip).unwrap();
            let start = ev.fingerprint();
            let mut flips = Vec::new();
            for _ in 0..1000 {
                let pos = rng.random_range(0..ev.positions());
                flips.push(pos);
                ev.apply_flip(pos).unwrap();
                if mode == FlipMode::Skew {
                    assert!(is_skew_symmetric(&ev.sequence()));
                }
            }
            let seq = ev.sequence();
            assert_eq!(ev.profile(), autocorrelations(&seq));
            if mode == FlipMode::Skew {
                assert!(ev.correlations().iter().step_by(2).all(|&c| c == 0));
            }
            for &pos in flips.iter().rev() {
                ev.apply_flip(pos).unwrap();
            }
            assert_eq!(ev.fingerprint(), start);
            assert_eq!(ev.flip_values().collect::<Vec<_>>(), flip);
        }
    }

    #[test]
    fn best_neighbor_matches_brute_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for mode in [FlipMode::Full, FlipMode::Skew] {
            for _ in 0..100 {
                let len = rng.random_range(2..=30);
                let flip = random_values(&mut rng, len);
                let ev = FlipEvaluator::from_values(mode, &flip).unwrap();
                let base = ev.energy();
                let deltas: Vec<i64> = (0..len).map(|p| energy(&brute_flip(mode, &flip, p)) - base).collect();
                let min = *deltas.iter().min().unwrap();
                let first = deltas.iter().position(|&d| d == min).unwrap();
                assert_eq!(ev.best_neighbor(|_| false), Some((first, min)));

                let (second_pos, second) = deltas
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != first)
                    .min_by_key(|&(p, &d)| (d, p))
                    .map(|(p, &d)| (p, d))
                    .unwrap();
                assert_eq!(ev.best_neighbor(|p| p == first), Some((second_pos, second)));
            }
        }
    }

    #[test]
    fn batch_deltas_match_single_deltas() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for mode in [FlipMode::Full, FlipMode::Skew] {
            for _ in 0..500 {
                let positions = rng.random_range(1..=50);
                let ev = FlipEvaluator::from_values(mode, &random_values(&mut rng, positions)).unwrap();
                let single: Vec<i64> = (0..positions).map(|p| ev.delta_energy(p).unwrap()).collect();
                assert_eq!(ev.all_deltas(), single, "{mode:?} n={positions}");
            }
        }
    }

    #[test]
    fn fingerprint_tracks_flip_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let flip = random_values(&mut rng, 20);
        let mut ev = FlipEvaluator::from_values(FlipMode::Skew, &flip).unwrap();
        for _ in 0..200 {
            let pos = rng.random_range(0..ev.positions());
            let predicted = ev.neighbor_fingerprint(pos);
            ev.apply_flip(pos).unwrap();
            assert_eq!(ev.fingerprint(), predicted);
            let fresh = FlipEvaluator::from_values(FlipMode::Skew, &ev.flip_values().collect::<Vec<_>>()).unwrap();
            assert_eq!(fresh.fingerprint(), ev.fingerprint());
        }
    }

    #[test]
    fn per_flip_work_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for mode in [FlipMode::Full, FlipMode::Skew] {
            let mut work = Vec::new();
            for len in [200usize, 400] {
                let positions = if mode == FlipMode::Full { len } else { len / 2 };
                let flip = random_values(&mut rng, positions);
                let mut ev = FlipEvaluator::from_values(mode, &flip).unwrap();
                let before = ev.work();
                for _ in 0..1000 {
                    let pos = rng.random_range(0..positions);
                    ev.delta_energy(pos).unwrap();
                    ev.apply_flip(pos).unwrap();
                }
                work.push(ev.work() - before);
            }
            let ratio = work[1] as f64 / work[0] as f64;
            assert!(ratio < 3.0, "{mode:?}: ratio {ratio}");
        }
    }
}
