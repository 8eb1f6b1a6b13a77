//! Sum-product over a factor graph by variable elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::plan::{plan_elimination, ContractionPlan};

/// Default bound on the number of entries of any intermediate table.
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

#[derive(Clone, Debug)]
pub(crate) struct Factor<S> {
    /// Variable ids, strictly increasing.
    pub scope: Vec<usize>,
    /// Row-major over `scope`, last variable fastest.
    pub table: Vec<S>,
}

/// Variables with finite domains and per-value weights, plus factors.
#[derive(Clone, Debug)]
pub(crate) struct FactorGraph<S> {
    pub weights: Vec<Vec<S>>,
    pub factors: Vec<Factor<S>>,
}

impl<S: Scalar> FactorGraph<S> {
    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(Vec::len).collect()
    }

    pub fn plan(&self, keep: &[usize]) -> ContractionPlan {
        let scopes: Vec<&[usize]> = self.factors.iter().map(|f| f.scope.as_slice()).collect();
        plan_elimination(&self.dims(), &scopes, keep)
    }

    /// Sums out every variable not in `keep` (in plan order) and returns the
    /// table over `keep`, in the order given, without weights for the kept
    /// variables.
    pub fn contract(self, keep: &[usize], cap: usize) -> Result<Vec<S>> {
        let plan = self.plan(keep);
        self.contract_with(&plan.order, keep, cap)
    }

    pub fn contract_with(self, order: &[usize], keep: &[usize], cap: usize) -> Result<Vec<S>> {
        let dims = self.dims();
        let weights = self.weights;
        let mut pool = self.factors;
        for &v in order {
            let (with, without): (Vec<_>, Vec<_>) = pool.into_iter().partition(|f| f.scope.contains(&v));
            pool = without;
            pool.push(combine(&with, Some((v, &weights[v])), &dims, cap)?);
        }
        let mut sorted_keep = keep.to_vec();
        sorted_keep.sort_unstable();
        let joint = combine(&pool, None, &dims, cap)?;
        // isolated kept variables have no factor; broadcast them in
        let joint = broadcast(joint, &sorted_keep, &dims);
        Ok(reorder(&joint, keep, &dims))
    }
}

/// Multiplies the factors and, if given, sums out one variable against its
/// weights.
fn combine<S: Scalar>(
    factors: &[Factor<S>],
    sum_out: Option<(usize, &[S])>,
    dims: &[usize],
    cap: usize,
) -> Result<Factor<S>> {
    let mut scope: Vec<usize> = factors.iter().flat_map(|f| f.scope.iter().copied()).collect();
    scope.sort_unstable();
    scope.dedup();
    if let Some((v, _)) = sum_out {
        scope.retain(|&x| x != v);
    }
    let out_size = scope.iter().try_fold(1usize, |acc, &x| acc.checked_mul(dims[x]));
    let out_size = match out_size {
        Some(s) if s <= cap => s,
        _ => {
            let required = scope.iter().fold(1u128, |acc, &x| acc.saturating_mul(dims[x] as u128));
            return Err(Error::CapExceeded {
                what: "intermediate table size",
                required,
                limit: cap as u128,
            });
        }
    };
    let mut combined = scope.clone();
    if let Some((v, _)) = sum_out {
        combined.push(v);
    }
    let cdims: Vec<usize> = combined.iter().map(|&x| dims[x]).collect();
    // stride of each combined position inside each factor
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            let mut own = vec![0; f.scope.len()];
            let mut s = 1;
            for k in (0..f.scope.len()).rev() {
                own[k] = s;
                s *= dims[f.scope[k]];
            }
            combined
                .iter()
                .map(|x| f.scope.iter().position(|y| y == x).map_or(0, |k| own[k]))
                .collect()
        })
        .collect();
    let inner = sum_out.map_or(1, |(v, _)| dims[v]);
    let mut table = Vec::with_capacity(out_size);
    let mut counter = vec![0usize; combined.len()];
    let mut idx = vec![0usize; factors.len()];
    let total = out_size * inner;
    let mut acc = S::zero();
    for step in 0..total {
        let mut prod = match sum_out {
            Some((_, w)) => w[counter[combined.len() - 1]].clone(),
            None => S::one(),
        };
        if !prod.is_zero() {
            for (f, &i) in factors.iter().zip(&idx) {
                let x = &f.table[i];
                if x.is_zero() {
                    prod = S::zero();
                    break;
                }
                prod = prod * x.clone();
            }
        }
        acc = acc + prod;
        if (step + 1) % inner == 0 {
            table.push(std::mem::replace(&mut acc, S::zero()));
        }
        // odometer
        let mut p = combined.len();
        while p > 0 {
            p -= 1;
            counter[p] += 1;
            for (k, s) in strides.iter().enumerate() {
                idx[k] += s[p];
            }
            if counter[p] < cdims[p] {
                break;
            }
            for (k, s) in strides.iter().enumerate() {
                idx[k] -= s[p] * cdims[p];
            }
            counter[p] = 0;
        }
    }
    Ok(Factor { scope, table })
}

/// Extends a factor to cover `scope` (a superset), constant along new
/// variables.
fn broadcast<S: Scalar>(f: Factor<S>, scope: &[usize], dims: &[usize]) -> Factor<S> {
    if f.scope == scope {
        return f;
    }
    let size: usize = scope.iter().map(|&x| dims[x]).product();
    let mut table = Vec::with_capacity(size);
    let mut counter = vec![0usize; scope.len()];
    for _ in 0..size {
        let mut i = 0;
        for &x in &f.scope {
            let p = scope.iter().position(|&y| y == x).unwrap();
            i = i * dims[x] + counter[p];
        }
        table.push(f.table[i].clone());
        let mut p = scope.len();
        while p > 0 {
            p -= 1;
            counter[p] += 1;
            if counter[p] < dims[scope[p]] {
                break;
            }
            counter[p] = 0;
        }
    }
    Factor { scope: scope.to_vec(), table }
}

/// Table over `f.scope` (sorted) rearranged to the order `keep`.
fn reorder<S: Scalar>(f: &Factor<S>, keep: &[usize], dims: &[usize]) -> Vec<S> {
    if f.scope == keep {
        return f.table.clone();
    }
    let size = f.table.len();
    let mut out = Vec::with_capacity(size);
    let mut counter = vec![0usize; keep.len()];
    for _ in 0..size {
        let mut i = 0;
        for &x in &f.scope {
            let p = keep.iter().position(|&y| y == x).unwrap();
            i = i * dims[x] + counter[p];
        }
        out.push(f.table[i].clone());
        let mut p = keep.len();
        while p > 0 {
            p -= 1;
            counter[p] += 1;
            if counter[p] < dims[keep[p]] {
                break;
            }
            counter[p] = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rational};

    #[test]
    fn chain_sum() {
        // Σ_{a,b} w_a w_b f(a,b) with f(a,b) = a + b over {0,1}
        let half = vec![rat(1, 2), rat(1, 2)];
        let g = FactorGraph::<Rational> {
            weights: vec![half.clone(), half],
            factors: vec![Factor { scope: vec![0, 1], table: vec![rat_int(0), rat_int(1), rat_int(1), rat_int(2)] }],
        };
        let out = g.contract(&[], DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(out, vec![rat_int(1)]);
    }

    #[test]
    fn keep_order_and_isolated() {
        let w = vec![rat(1, 2), rat(1, 2)];
        let g = FactorGraph::<Rational> {
            weights: vec![w.clone(), w.clone(), w],
            factors: vec![Factor { scope: vec![0, 1], table: vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4)] }],
        };
        // keep (1, 0): transposed table
        let t = g.clone().contract(&[1, 0], DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(t, vec![rat_int(1), rat_int(3), rat_int(2), rat_int(4)]);
        // keep an isolated variable: constant along it
        let t = g.contract(&[2, 0], DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(t, vec![rat(3, 2), rat(7, 2), rat(3, 2), rat(7, 2)]);
    }

    #[test]
    fn cap_reported() {
        let w = vec![rat_int(1); 4];
        let g = FactorGraph::<Rational> {
            weights: vec![w.clone(), w.clone(), w],
            factors: vec![Factor { scope: vec![0, 1, 2], table: vec![rat_int(1); 64] }],
        };
        assert!(matches!(g.contract(&[0, 1, 2], 16), Err(Error::CapExceeded { required: 64, .. })));
    }
}
