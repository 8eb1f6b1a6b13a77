//! Integrals of products of node factors over edge variables:
//! `tr(G, f) = ∫_{I^E} Π_i f_i(x) dx`, where `f_i` depends only on the
//! variables of edges at node `i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::factor::{Factor, FactorGraph, DEFAULT_TABLE_CAP};
use crate::error::{Error, Result};
use crate::scalar::{rat, ExtFloat, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct EdgeFactorModel<S> {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    /// Block measures shared by all edge variables.
    measures: Vec<S>,
    /// `tables[i]` is row-major over the incident edges of `i` in increasing
    /// edge order, last edge fastest.
    tables: Vec<Vec<S>>,
}

impl<S: Scalar> EdgeFactorModel<S> {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>, measures: Vec<S>, tables: Vec<Vec<S>>) -> Result<Self> {
        if measures.is_empty() || measures.iter().any(|m| *m <= S::zero()) {
            return Err(Error::InvalidModel("measures must be positive".into()));
        }
        if edges.iter().any(|&(a, b)| a >= node_count || b >= node_count) {
            return Err(Error::InvalidModel("edge endpoint out of range".into()));
        }
        if tables.len() != node_count {
            return Err(Error::InvalidModel("one table per node required".into()));
        }
        let model = EdgeFactorModel { node_count, edges, measures, tables };
        for i in 0..node_count {
            let want = model.measures.len().pow(model.incident(i).len() as u32);
            if model.tables[i].len() != want {
                return Err(Error::InvalidModel(format!(
                    "table of node {i} has {} entries, expected {want}",
                    model.tables[i].len()
                )));
            }
        }
        Ok(model)
    }

    /// Edge ids incident with node `i`, increasing.
    pub fn incident(&self, i: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].0 == i || self.edges[e].1 == i)
            .collect()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn tables(&self) -> &[Vec<S>] {
        &self.tables
    }

    fn graph(&self, square: bool) -> FactorGraph<S> {
        let factors = (0..self.node_count)
            .map(|i| Factor {
                scope: self.incident(i),
                table: if square {
                    self.tables[i].iter().map(|x| x.clone() * x.clone()).collect()
                } else {
                    self.tables[i].clone()
                },
            })
            .collect();
        FactorGraph { weights: vec![self.measures.clone(); self.edges.len()], factors }
    }

    /// `tr(G, f)`.
    pub fn value(&self) -> Result<S> {
        Ok(self.graph(false).contract(&[], DEFAULT_TABLE_CAP)?.pop().expect("scalar"))
    }

    /// `‖f_i‖_2^2` for each node.
    pub fn squared_norms(&self) -> Result<Vec<S>> {
        (0..self.node_count)
            .map(|i| {
                let g = self.graph(true);
                let single = FactorGraph { weights: g.weights, factors: vec![g.factors[i].clone()] };
                Ok(single.contract(&[], DEFAULT_TABLE_CAP)?.pop().expect("scalar"))
            })
            .collect()
    }

    /// `Π_i ‖f_i‖_2`, computed without underflow.
    pub fn norm_product(&self) -> Result<ExtFloat> {
        let mut acc = ExtFloat::one();
        for sq in self.squared_norms()? {
            let e = match sq.to_rational() {
                Some(r) => ExtFloat::from_rational(&r),
                None => ExtFloat::from_f64(sq.to_f64()),
            };
            acc = acc.mul(e.powf(0.5));
        }
        Ok(acc)
    }
}

impl EdgeFactorModel<Rational> {
    /// Seeded model on `(node_count, edges)` with `blocks` equal edge blocks
    /// and table entries drawn from `{-1, 1}` (`signs`) or a grid in `[-1, 1]`.
    pub fn random(node_count: usize, edges: Vec<(usize, usize)>, blocks: usize, signs: bool, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let measures = vec![rat(1, blocks as i64); blocks];
        let mut tables = Vec::with_capacity(node_count);
        for i in 0..node_count {
            let deg = edges.iter().filter(|&&(a, b)| a == i || b == i).count();
            let size = blocks.pow(deg as u32);
            tables.push(
                (0..size)
                    .map(|_| {
                        if signs {
                            rat(if rng.gen_bool(0.5) { 1 } else { -1 }, 1)
                        } else {
                            rat(rng.gen_range(-64..=64), 64)
                        }
                    })
                    .collect(),
            );
        }
        EdgeFactorModel::new(node_count, edges, measures, tables)
    }
}
