//! Cut norm by vertex enumeration.
//!
//! For a step kernel the objective `∫_{S×T} U` is bilinear in the fractions
//! of each block included in `S` and `T`, so some optimum takes whole
//! blocks. We enumerate all subsets of the smaller side; for a fixed subset
//! the best partner set takes exactly the blocks with positive (or negative)
//! column sums. The enumeration runs in `f64` with a Gray code; in exact
//! mode every subset whose float score is within a safety margin of the best
//! is rescored exactly, so the reported value is the true maximum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::StepKernel;
use crate::exec;
use crate::scalar::Scalar;

/// Largest enumerated side for exact results.
pub const CUT_NORM_CAP: usize = 24;

const PREFIX_BITS: usize = 6;
const RESTARTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// `+1` if the integral over the rectangle is the positive maximum,
    /// `-1` if it is the negative one.
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct CutNorm<S> {
    pub value: S,
    /// False when the enumeration cap was exceeded and `value` is only a
    /// lower bound from local search.
    pub exact: bool,
    pub witness: CutWitness,
}

#[derive(Clone, Copy)]
enum Goal {
    Positive,
    Negative,
}

impl<S: Scalar> StepKernel<S> {
    /// `sup_{S,T} |∫_{S×T} U|`.
    pub fn cut_norm(&self) -> CutNorm<S> {
        self.cut_norm_capped(CUT_NORM_CAP, 0)
    }

    pub fn cut_norm_capped(&self, cap: usize, seed: u64) -> CutNorm<S> {
        let pos = self.rectangle_max(Goal::Positive, cap, seed);
        let neg = self.rectangle_max(Goal::Negative, cap, seed);
        if neg.value > pos.value {
            neg
        } else {
            pos
        }
    }

    /// `sup_{S,T} ∫_{S×T} U` (one-sided; nonnegative since `S` may be empty).
    pub fn bilinear_max(&self) -> CutNorm<S> {
        self.rectangle_max(Goal::Positive, CUT_NORM_CAP, 0)
    }

    pub fn bilinear_max_capped(&self, cap: usize, seed: u64) -> CutNorm<S> {
        self.rectangle_max(Goal::Positive, cap, seed)
    }

    fn rectangle_max(&self, goal: Goal, cap: usize, seed: u64) -> CutNorm<S> {
        let transposed = self.col_count() < self.row_count();
        let k = if transposed { self.transpose() } else { self.clone() };
        let sign = match goal {
            Goal::Positive => 1.0,
            Goal::Negative => -1.0,
        };
        let r = k.row_count();
        let c = k.col_count();
        let weighted: Vec<f64> = (0..r)
            .flat_map(|i| {
                let k = &k;
                (0..c).map(move |j| {
                    sign * k.row_measures()[i].to_f64() * k.col_measures()[j].to_f64() * k.value(i, j).to_f64()
                })
            })
            .collect();
        let (mask, exact) = if r <= cap && r < 64 {
            (enumerate_best(&k, &weighted, r, c, goal), true)
        } else {
            (hill_climb(&weighted, r, c, seed), false)
        };
        let (value, cols) = score_exact(&k, &mask, goal);
        let rows: Vec<usize> = (0..r).filter(|&i| mask[i]).collect();
        let witness = if transposed {
            CutWitness { rows: cols, cols: rows, sign: sign as i8 }
        } else {
            CutWitness { rows, cols, sign: sign as i8 }
        };
        CutNorm { value, exact, witness }
    }
}

/// Best partner set for a fixed row subset, scored in the kernel's own
/// arithmetic. Returns the value and the chosen columns.
fn score_exact<S: Scalar>(k: &StepKernel<S>, mask: &[bool], goal: Goal) -> (S, Vec<usize>) {
    let mut total = S::zero();
    let mut cols = Vec::new();
    for j in 0..k.col_count() {
        let mut s = S::zero();
        for i in 0..k.row_count() {
            if mask[i] {
                s = s + k.row_measures()[i].clone() * k.value(i, j).clone();
            }
        }
        if let Goal::Negative = goal {
            s = -s;
        }
        if s > S::zero() {
            total = total + k.col_measures()[j].clone() * s;
            cols.push(j);
        }
    }
    (total, cols)
}

fn float_score(sums: &[f64]) -> f64 {
    sums.iter().filter(|&&s| s > 0.0).sum()
}

struct ChunkResult {
    best: f64,
    /// `(score, mask)` pairs within the margin of the chunk best.
    candidates: Vec<(f64, u64)>,
}

fn enumerate_best<S: Scalar>(k: &StepKernel<S>, weighted: &[f64], r: usize, c: usize, goal: Goal) -> Vec<bool> {
    let scale: f64 = weighted.iter().map(|w| w.abs()).sum::<f64>() + f64::MIN_POSITIVE;
    let margin = 1e-9 * scale;
    let prefix = r.min(PREFIX_BITS);
    let low = r - prefix;
    let chunks = exec::map_range(1usize << prefix, |p| scan_chunk(weighted, r, c, low, p as u64, margin));
    let best = chunks.iter().map(|ch| ch.best).fold(f64::NEG_INFINITY, f64::max);
    let mut candidates: Vec<u64> = chunks
        .iter()
        .flat_map(|ch| ch.candidates.iter())
        .filter(|(s, _)| *s >= best - margin)
        .map(|&(_, m)| m)
        .collect();
    candidates.sort_unstable();
    let to_mask = |m: u64| (0..r).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>();
    if !S::EXACT {
        // float mode: the best float score, smallest mask on ties
        let mut pick = (f64::NEG_INFINITY, 0u64);
        for &m in &candidates {
            let s = float_score(&column_sums(weighted, r, c, m));
            if s > pick.0 {
                pick = (s, m);
            }
        }
        return to_mask(pick.1);
    }
    let mut best_exact: Option<(S, u64)> = None;
    for m in candidates {
        let (v, _) = score_exact(k, &to_mask(m), goal);
        if best_exact.as_ref().is_none_or(|(b, _)| v > *b) {
            best_exact = Some((v, m));
        }
    }
    to_mask(best_exact.map_or(0, |(_, m)| m))
}

fn column_sums(weighted: &[f64], r: usize, c: usize, mask: u64) -> Vec<f64> {
    let mut sums = vec![0.0; c];
    for i in 0..r {
        if mask >> i & 1 == 1 {
            for j in 0..c {
                sums[j] += weighted[i * c + j];
            }
        }
    }
    sums
}

/// Gray-code scan over the low `low` bits with the high bits fixed to
/// `prefix`.
fn scan_chunk(weighted: &[f64], r: usize, c: usize, low: usize, prefix: u64, margin: f64) -> ChunkResult {
    let base = prefix << low;
    let mut sums = column_sums(weighted, r, c, base);
    let mut mask = base;
    let mut best = float_score(&sums);
    let mut candidates = vec![(best, mask)];
    for step in 1u64..(1u64 << low) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let add = mask >> bit & 1 == 1;
        let row = &weighted[bit * c..(bit + 1) * c];
        for j in 0..c {
            if add {
                sums[j] += row[j];
            } else {
                sums[j] -= row[j];
            }
        }
        let s = float_score(&sums);
        if s > best {
            best = s;
            candidates.retain(|(v, _)| *v >= best - margin);
        }
        if s >= best - margin {
            candidates.push((s, mask));
        }
    }
    ChunkResult { best, candidates }
}

/// Alternating best responses from seeded random starts.
fn hill_climb(weighted: &[f64], r: usize, c: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::NEG_INFINITY, vec![false; r]);
    for _ in 0..RESTARTS {
        let mut rows: Vec<bool> = (0..r).map(|_| rng.gen_bool(0.5)).collect();
        let mut value = f64::NEG_INFINITY;
        loop {
            let mut colsum = vec![0.0; c];
            for i in (0..r).filter(|&i| rows[i]) {
                for j in 0..c {
                    colsum[j] += weighted[i * c + j];
                }
            }
            let cols: Vec<bool> = colsum.iter().map(|&s| s > 0.0).collect();
            let mut rowsum = vec![0.0; r];
            for i in 0..r {
                for j in (0..c).filter(|&j| cols[j]) {
                    rowsum[i] += weighted[i * c + j];
                }
            }
            let next: Vec<bool> = rowsum.iter().map(|&s| s > 0.0).collect();
            let v: f64 = rowsum.iter().filter(|&&s| s > 0.0).sum();
            if v <= value + 1e-15 {
                break;
            }
            value = v;
            rows = next;
        }
        if value > best.0 {
            best = (value, rows);
        }
    }
    best.1
}
