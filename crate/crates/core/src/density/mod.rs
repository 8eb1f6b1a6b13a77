//! Homomorphism densities `t(F, W)` of bigraphs in step kernels.
//!
//! First-class nodes of `F` range over the row blocks of the kernel,
//! second-class nodes over its column blocks. Parallel edges multiply
//! pointwise, so a doubled edge contributes `W(x, y)^2`.

pub mod edge_factor;
pub mod expansion;
mod factor;
mod naive;
mod plan;

use num_bigint::BigInt;

use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernel::StepKernel;
use crate::scalar::{Rational, Scalar};

pub use edge_factor::EdgeFactorModel;
pub use expansion::{expansion, Expansion, ExpansionEntry, TermKey};
pub use factor::DEFAULT_TABLE_CAP;
pub use naive::{density_naive, rooted_density_naive, NAIVE_CAP};
pub use plan::{plan_contraction, ContractionPlan, PlanStep};

use factor::{Factor, FactorGraph};

/// Builds the factor graph of `f` in `k`. Nodes listed in `pinned` with a
/// block get a one-point domain of weight 1.
fn factor_graph<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, pinned: &[(usize, usize)]) -> FactorGraph<S> {
    let n = f.node_count();
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut weights: Vec<Vec<S>> = Vec::with_capacity(n);
    for v in 0..n {
        if let Some(&(_, b)) = pinned.iter().find(|(p, _)| *p == v) {
            blocks.push(vec![b]);
            weights.push(vec![S::one()]);
            continue;
        }
        let m = match f.side(v) {
            Side::First => k.row_measures(),
            Side::Second => k.col_measures(),
        };
        blocks.push((0..m.len()).collect());
        weights.push(m.to_vec());
    }
    let factors = f
        .edge_multiplicities()
        .into_iter()
        .map(|((a, b), mult)| {
            let (lo, hi) = (a.min(b), a.max(b));
            let mut table = Vec::with_capacity(blocks[lo].len() * blocks[hi].len());
            for &x in &blocks[lo] {
                for &y in &blocks[hi] {
                    // a is always the first-class endpoint
                    let (i, j) = if lo == a { (x, y) } else { (y, x) };
                    table.push(k.value(i, j).pow_u32(mult as u32));
                }
            }
            Factor { scope: vec![lo, hi], table }
        })
        .collect();
    FactorGraph { weights, factors }
}

/// `t(F, W)`; labels of `f` are ignored.
pub fn density<S: Scalar>(f: &Bigraph, k: &StepKernel<S>) -> Result<S> {
    density_capped(f, k, DEFAULT_TABLE_CAP)
}

pub fn density_capped<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, cap: usize) -> Result<S> {
    let mut out = factor_graph(f, k, &[]).contract(&[], cap)?;
    Ok(out.pop().expect("scalar result"))
}

/// `t(F, W)` eliminating nodes in the given order (a permutation of all
/// nodes).
pub fn density_with_order<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, order: &[usize]) -> Result<S> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..f.node_count()).collect::<Vec<_>>() {
        return Err(Error::InvalidGraph("elimination order is not a permutation".into()));
    }
    let mut out = factor_graph(f, k, &[]).contract_with(order, &[], DEFAULT_TABLE_CAP)?;
    Ok(out.pop().expect("scalar result"))
}

fn check_anchors<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, anchors: &[usize]) -> Result<Vec<(usize, usize)>> {
    if anchors.len() < f.label_count() {
        return Err(Error::MissingAnchor(anchors.len() + 1));
    }
    f.labels()
        .iter()
        .zip(anchors)
        .enumerate()
        .map(|(l, (&v, &b))| {
            let limit = match f.side(v) {
                Side::First => k.row_count(),
                Side::Second => k.col_count(),
            };
            if b >= limit {
                Err(Error::AnchorOutOfRange { label: l + 1, block: b })
            } else {
                Ok((v, b))
            }
        })
        .collect()
}

/// `t_x(F, W)`: labeled node `l + 1` fixed in block `anchors[l]`, the rest
/// integrated out.
pub fn rooted_density<S: Scalar>(f: &Bigraph, k: &StepKernel<S>, anchors: &[usize]) -> Result<S> {
    let pinned = check_anchors(f, k, anchors)?;
    let mut out = factor_graph(f, k, &pinned).contract(&[], DEFAULT_TABLE_CAP)?;
    Ok(out.pop().expect("scalar result"))
}

/// Rooted densities for every anchor combination at once.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedTable<S> {
    /// Block count for each label.
    pub dims: Vec<usize>,
    /// Row-major over labels, last label fastest.
    pub values: Vec<S>,
    /// Block measures for each label.
    pub measures: Vec<Vec<S>>,
}

impl<S: Scalar> RootedTable<S> {
    pub fn get(&self, anchors: &[usize]) -> &S {
        let idx = anchors.iter().zip(&self.dims).fold(0, |acc, (&a, &d)| acc * d + a);
        &self.values[idx]
    }

    /// Iterates `(anchors, measure, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, S, &S)> + '_ {
        self.values.iter().enumerate().map(move |(mut idx, v)| {
            let mut anchors = vec![0; self.dims.len()];
            for p in (0..self.dims.len()).rev() {
                anchors[p] = idx % self.dims[p];
                idx /= self.dims[p];
            }
            let w = anchors
                .iter()
                .enumerate()
                .fold(S::one(), |acc, (l, &a)| acc * self.measures[l][a].clone());
            (anchors, w, v)
        })
    }
}

pub fn rooted_table<S: Scalar>(f: &Bigraph, k: &StepKernel<S>) -> Result<RootedTable<S>> {
    let g = factor_graph(f, k, &[]);
    let dims: Vec<usize> = f.labels().iter().map(|&v| g.weights[v].len()).collect();
    let measures = f.labels().iter().map(|&v| g.weights[v].clone()).collect();
    let values = g.contract(f.labels(), DEFAULT_TABLE_CAP)?;
    Ok(RootedTable { dims, values, measures })
}

/// `hom(F, G)` for a simple host graph, as an exact integer.
pub fn hom_count(f: &Bigraph, g: &SimpleGraph) -> Result<BigInt> {
    let k = StepKernel::<Rational>::from_graph(g)?;
    let t = density(f, &k)?;
    let scale = BigInt::from(g.node_count()).pow(f.node_count() as u32);
    let count = t * Rational::from_integer(scale);
    debug_assert!(count.is_integer());
    Ok(count.to_integer())
}

/// Schatten-type quantity `t(C_{2r}, U)`.
pub fn cycle_density<S: Scalar>(k: &StepKernel<S>, r: usize) -> Result<S> {
    density(&crate::bigraph::family::cycle(2 * r), k)
}
