//! Direct summation over all block assignments. Kept as a reference for
//! tests and for re-validating reported violations.

use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};
use crate::kernel::StepKernel;
use crate::scalar::Scalar;

/// Maximum number of assignments the naive sum will visit.
pub const NAIVE_CAP: u128 = 1 << 24;

pub fn density_naive<S: Scalar>(f: &Bigraph, k: &StepKernel<S>) -> Result<S> {
    sum_assignments(f, k, &[])
}

pub fn rooted_density_naive<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, anchors: &[usize]) -> Result<S> {
    if anchors.len() < f.label_count() {
        return Err(Error::MissingAnchor(anchors.len() + 1));
    }
    let pinned: Vec<(usize, usize)> = f.labels().iter().copied().zip(anchors.iter().copied()).collect();
    sum_assignments(f, k, &pinned)
}

fn sum_assignments<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, pinned: &[(usize, usize)]) -> Result<S> {
    let n = f.node_count();
    let measures = |v: usize| match f.side(v) {
        Side::First => k.row_measures(),
        Side::Second => k.col_measures(),
    };
    let free: Vec<usize> = (0..n).filter(|v| !pinned.iter().any(|(p, _)| p == v)).collect();
    let total = free
        .iter()
        .fold(1u128, |acc, &v| acc.saturating_mul(measures(v).len() as u128));
    if total > NAIVE_CAP {
        return Err(Error::CapExceeded { what: "naive assignment count", required: total, limit: NAIVE_CAP });
    }
    let mut assign = vec![0usize; n];
    for &(v, b) in pinned {
        assign[v] = b;
    }
    let mut sum = S::zero();
    for _ in 0..total {
        let mut term = free
            .iter()
            .fold(S::one(), |acc, &v| acc * measures(v)[assign[v]].clone());
        for &(a, b) in f.edges() {
            term = term * k.value(assign[a], assign[b]).clone();
        }
        sum = sum + term;
        for &v in free.iter().rev() {
            assign[v] += 1;
            if assign[v] < measures(v).len() {
                break;
            }
            assign[v] = 0;
        }
    }
    Ok(sum)
}
