//! Greedy elimination orders: min-degree, then min-fill, then lowest id.

use serde::Serialize;

use crate::bigraph::{Bigraph, Side};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanStep {
    pub node: usize,
    /// Neighbors of `node` at elimination time: the scope of the new factor.
    pub scope: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionPlan {
    pub order: Vec<usize>,
    pub steps: Vec<PlanStep>,
    /// Largest scope of a produced factor.
    pub width: usize,
    /// Sum over steps of the number of table entries touched.
    pub cost: u128,
}

pub(crate) fn plan_elimination(dims: &[usize], scopes: &[&[usize]], keep: &[usize]) -> ContractionPlan {
    let n = dims.len();
    let mut adj = vec![vec![false; n]; n];
    for s in scopes {
        for &a in s.iter() {
            for &b in s.iter() {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
    }
    let mut alive = vec![true; n];
    let mut todo: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    let mut steps = Vec::with_capacity(todo.len());
    let mut width = 0;
    let mut cost: u128 = 0;
    while !todo.is_empty() {
        let score = |v: usize| {
            let nb: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
            let mut fill = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a][b] {
                        fill += 1;
                    }
                }
            }
            (nb.len(), fill, v)
        };
        let (pos, _) = todo
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| score(v))
            .expect("nonempty");
        let v = todo.remove(pos);
        let scope: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
        for &a in &scope {
            for &b in &scope {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        alive[v] = false;
        width = width.max(scope.len());
        cost = cost.saturating_add(
            scope
                .iter()
                .fold(dims[v] as u128, |acc, &u| acc.saturating_mul(dims[u] as u128)),
        );
        steps.push(PlanStep { node: v, scope });
    }
    ContractionPlan { order: steps.iter().map(|s| s.node).collect(), steps, width, cost }
}

/// Elimination plan for computing a density of `f` in a kernel with
/// `rows x cols` blocks, keeping the labeled nodes listed in `anchors`.
pub fn plan_contraction(f: &Bigraph, anchors: &[usize], rows: usize, cols: usize) -> ContractionPlan {
    let dims: Vec<usize> = f
        .sides()
        .iter()
        .map(|s| match s {
            Side::First => rows,
            Side::Second => cols,
        })
        .collect();
    let pairs: Vec<[usize; 2]> = f.edges().iter().map(|&(a, b)| [a, b]).collect();
    let scopes: Vec<&[usize]> = pairs.iter().map(|p| p.as_slice()).collect();
    plan_elimination(&dims, &scopes, anchors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;

    #[test]
    fn widths() {
        for n in 2..9 {
            assert_eq!(plan_contraction(&path(n), &[], 3, 3).width, 1, "P_{n}");
        }
        for n in [4, 6, 8, 10] {
            assert_eq!(plan_contraction(&cycle(n), &[], 3, 3).width, 2, "C_{n}");
        }
        assert!(plan_contraction(&complete_bipartite(3, 3), &[], 3, 3).width <= 3);
    }

    #[test]
    fn path_cost_linear() {
        let c5 = plan_contraction(&path(5), &[], 4, 4).cost;
        let c9 = plan_contraction(&path(9), &[], 4, 4).cost;
        assert_eq!(c5, 4 * 16 + 4);
        assert_eq!(c9, 8 * 16 + 4);
    }

    #[test]
    fn anchors_never_eliminated() {
        let f = rooted_cycle(6);
        let plan = plan_contraction(&f, f.labels(), 2, 2);
        assert_eq!(plan.order.len(), 5);
        assert!(!plan.order.contains(&0));
        let mut all = plan.order.clone();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 5);
    }

    #[test]
    fn width_below_node_count() {
        for g in [complete_bipartite(4, 4), prism(6).unwrap(), theta(&[3, 3, 3]).unwrap()] {
            assert!(plan_contraction(&g, &[], 2, 2).width < g.node_count());
        }
    }
}
