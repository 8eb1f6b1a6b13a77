//! Step-function kernels on the unit square and their algebra.
//!
//! A [`StepKernel`] is constant on each product of a row block and a column
//! block. Row and column block structures are independent; operations that
//! combine kernels first pass to a common refinement of the boundaries.

mod cut;
mod json;
mod norms;
mod partition;
mod sample;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::scalar::{Rational, Scalar};

pub use cut::{CutNorm, CutWitness, CUT_NORM_CAP};
pub use json::{KernelJson, ValueMode};
pub use norms::{NormKind, NormReport, NormValue};
pub use partition::Partition;
pub use sample::{corner_kernel, sign_kernel, KernelSampler};
pub(crate) use norms::nonnegative_radicand;

const FLOAT_MEASURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct StepKernel<S> {
    rows: Vec<S>,
    cols: Vec<S>,
    /// Row-major, `rows.len() * cols.len()` entries.
    values: Vec<S>,
}

impl<S: Scalar> StepKernel<S> {
    pub fn new(row_measures: Vec<S>, col_measures: Vec<S>, values: Vec<Vec<S>>) -> Result<Self> {
        if values.len() != row_measures.len() || values.iter().any(|r| r.len() != col_measures.len()) {
            return Err(Error::InvalidKernel(format!(
                "value matrix must be {}x{}",
                row_measures.len(),
                col_measures.len()
            )));
        }
        Self::from_flat(row_measures, col_measures, values.into_iter().flatten().collect())
    }

    pub fn from_flat(row_measures: Vec<S>, col_measures: Vec<S>, values: Vec<S>) -> Result<Self> {
        check_measures(&row_measures, "row")?;
        check_measures(&col_measures, "column")?;
        if values.len() != row_measures.len() * col_measures.len() {
            return Err(Error::InvalidKernel("value count does not match block counts".into()));
        }
        if !S::EXACT && values.iter().any(|v| !v.to_f64().is_finite()) {
            return Err(Error::InvalidKernel("non-finite value".into()));
        }
        Ok(StepKernel { rows: row_measures, cols: col_measures, values })
    }

    /// Equal-measure blocks on both sides.
    pub fn uniform(values: Vec<Vec<S>>) -> Result<Self> {
        let r = values.len();
        let c = values.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidKernel("kernel needs at least one block".into()));
        }
        Self::new(equal_measures(r), equal_measures(c), values)
    }

    pub fn constant(c: S) -> Self {
        StepKernel { rows: vec![S::one()], cols: vec![S::one()], values: vec![c] }
    }

    /// `W_G`: `N` equal blocks, value 1 on adjacent pairs and 0 elsewhere.
    pub fn from_graph(g: &SimpleGraph) -> Result<Self> {
        let n = g.node_count();
        if n == 0 {
            return Err(Error::InvalidKernel("graph kernel needs at least one node".into()));
        }
        let mut values = vec![S::zero(); n * n];
        for &(u, v) in g.edges() {
            values[u * n + v] = S::one();
            values[v * n + u] = S::one();
        }
        Self::from_flat(equal_measures(n), equal_measures(n), values)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn row_measures(&self) -> &[S] {
        &self.rows
    }

    pub fn col_measures(&self) -> &[S] {
        &self.cols
    }

    pub fn value(&self, i: usize, j: usize) -> &S {
        &self.values[i * self.cols.len() + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        let c = self.cols.len();
        &self.values[i * c..(i + 1) * c]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StepKernel<T> {
        StepKernel {
            rows: self.rows.iter().map(&f).collect(),
            cols: self.cols.iter().map(&f).collect(),
            values: self.values.iter().map(&f).collect(),
        }
    }

    /// Applies `f` to the values only; measures are kept.
    pub fn map_values(&self, f: impl Fn(&S) -> S) -> Self {
        StepKernel { rows: self.rows.clone(), cols: self.cols.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> StepKernel<f64> {
        self.map(Scalar::to_f64)
    }

    /// Smallest and largest value.
    pub fn bounds(&self) -> (S, S) {
        let mut lo = self.values[0].clone();
        let mut hi = self.values[0].clone();
        for v in &self.values[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        (lo, hi)
    }

    /// All values in `[-1, 1]`.
    pub fn in_w1(&self) -> bool {
        let one = S::one();
        let (lo, hi) = self.bounds();
        lo >= -one.clone() && hi <= one
    }

    /// Blockwise `scale * value + shift`.
    pub fn affine(&self, scale: &S, shift: &S) -> Self {
        StepKernel {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            values: self.values.iter().map(|v| scale.clone() * v.clone() + shift.clone()).collect(),
        }
    }

    pub fn shifted(&self, shift: &S) -> Self {
        self.affine(&S::one(), shift)
    }

    pub fn scaled(&self, scale: &S) -> Self {
        self.affine(scale, &S::zero())
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.row_count(), self.col_count());
        let mut values = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                values.push(self.value(i, j).clone());
            }
        }
        StepKernel { rows: self.cols.clone(), cols: self.rows.clone(), values }
    }

    /// `∫∫ W`.
    pub fn integral(&self) -> S {
        let mut total = S::zero();
        for (i, ri) in self.rows.iter().enumerate() {
            let mut acc = S::zero();
            for (j, cj) in self.cols.iter().enumerate() {
                acc = acc + cj.clone() * self.value(i, j).clone();
            }
            total = total + ri.clone() * acc;
        }
        total
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.row_count()).all(|i| (0..i).all(|j| self.value(i, j) == self.value(j, i)))
    }

    /// Re-expresses the kernel on finer blocks: new row block `k` lies inside
    /// old row block `row_map[k]`, and likewise for columns.
    fn lift(&self, row_map: &[usize], rows: Vec<S>, col_map: &[usize], cols: Vec<S>) -> Self {
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for &i in row_map {
            for &j in col_map {
                values.push(self.value(i, j).clone());
            }
        }
        StepKernel { rows, cols, values }
    }

    /// Both kernels on the common refinement of their row and column
    /// boundaries.
    pub fn align(&self, other: &Self) -> Result<(Self, Self)> {
        let (rows, ra, rb) = common_refinement(&self.rows, &other.rows)?;
        let (cols, ca, cb) = common_refinement(&self.cols, &other.cols)?;
        Ok((self.lift(&ra, rows.clone(), &ca, cols.clone()), other.lift(&rb, rows, &cb, cols)))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        let (a, b) = self.align(other)?;
        let values = a.values.iter().zip(&b.values).map(|(x, y)| f(x, y)).collect();
        Ok(StepKernel { rows: a.rows, cols: a.cols, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.clone() + y.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.clone() - y.clone())
    }

    /// `(U ∘ V)(x, y) = ∫ U(x, z) V(z, y) dz`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let (mid, ma, mb) = common_refinement(&self.cols, &other.rows)?;
        let (r, c) = (self.row_count(), other.col_count());
        let mut values = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = S::zero();
                for (z, mz) in mid.iter().enumerate() {
                    acc = acc + mz.clone() * self.value(i, ma[z]).clone() * other.value(mb[z], j).clone();
                }
                values.push(acc);
            }
        }
        Ok(StepKernel { rows: self.rows.clone(), cols: other.cols.clone(), values })
    }

    /// Common refinement of the row and column boundaries, so the kernel is
    /// a function on `A x A` for one block list `A` (the atoms).
    pub fn on_atoms(&self) -> Result<Self> {
        let (atoms, rm, cm) = common_refinement(&self.rows, &self.cols)?;
        Ok(self.lift(&rm, atoms.clone(), &cm, atoms))
    }

    /// Maximum `|value|`.
    pub fn max_abs(&self) -> S {
        let (lo, hi) = self.bounds();
        let lo = lo.abs();
        let hi = hi.abs();
        if lo > hi {
            lo
        } else {
            hi
        }
    }
}

impl StepKernel<Rational> {
    pub fn from_f64_kernel(k: &StepKernel<f64>) -> Result<Self> {
        let conv = |v: &[f64]| -> Result<Vec<Rational>> {
            v.iter().map(|&x| crate::scalar::rational_from_f64(x)).collect()
        };
        let rows = conv(&k.rows)?;
        let cols = conv(&k.cols)?;
        // snap measures so that each side sums to one exactly
        let rows = renormalize(rows);
        let cols = renormalize(cols);
        StepKernel::from_flat(rows, cols, conv(&k.values)?)
    }
}

fn renormalize(v: Vec<Rational>) -> Vec<Rational> {
    let total: Rational = v.iter().cloned().sum();
    v.into_iter().map(|x| x / total.clone()).collect()
}

pub(crate) fn equal_measures<S: Scalar>(n: usize) -> Vec<S> {
    vec![S::ratio(1, n as i64); n]
}

fn check_measures<S: Scalar>(m: &[S], which: &str) -> Result<()> {
    if m.is_empty() {
        return Err(Error::InvalidKernel(format!("no {which} blocks")));
    }
    if m.iter().any(|x| *x <= S::zero()) {
        return Err(Error::InvalidKernel(format!("{which} measures must be positive")));
    }
    let total = m.iter().fold(S::zero(), |a, b| a + b.clone());
    let ok = if S::EXACT { total == S::one() } else { (total.to_f64() - 1.0).abs() <= FLOAT_MEASURE_TOL };
    if !ok {
        return Err(Error::InvalidKernel(format!("{which} measures sum to {:?}, not 1", total)));
    }
    Ok(())
}

/// Merges two block lists covering `[0, 1]` into their common refinement.
/// Returns the new measures and, for each new block, its parent in `a` and
/// in `b`.
pub(crate) fn common_refinement<S: Scalar>(a: &[S], b: &[S]) -> Result<(Vec<S>, Vec<usize>, Vec<usize>)> {
    if a == b {
        let ids: Vec<usize> = (0..a.len()).collect();
        return Ok((a.to_vec(), ids.clone(), ids));
    }
    let negligible = |x: &S| {
        if S::EXACT {
            x.is_zero()
        } else {
            x.to_f64().abs() <= FLOAT_MEASURE_TOL
        }
    };
    let (mut i, mut j) = (0, 0);
    let mut ra = a[0].clone();
    let mut rb = b[0].clone();
    let (mut out, mut ma, mut mb) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let piece = if ra < rb { ra.clone() } else { rb.clone() };
        if !negligible(&piece) {
            out.push(piece.clone());
            ma.push(i);
            mb.push(j);
        }
        ra = ra - piece.clone();
        rb = rb - piece;
        if negligible(&ra) {
            i += 1;
            if i < a.len() {
                ra = a[i].clone();
            }
        }
        if negligible(&rb) {
            j += 1;
            if j < b.len() {
                rb = b[j].clone();
            }
        }
        if i >= a.len() || j >= b.len() {
            break;
        }
    }
    if i < a.len() || j < b.len() {
        return Err(Error::IncompatibleBlocks("block lists do not cover the same interval".into()));
    }
    Ok((out, ma, mb))
}
