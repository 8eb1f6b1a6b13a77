//! Canonical labeling of small colored multigraphs.
//!
//! Color refinement followed by an exhaustive individualization search.
//! False twins (nodes with identical neighbor rows) are interchangeable, so
//! only the smallest unused twin of each class is branched on.

use serde::{Deserialize, Serialize};

use super::{Bigraph, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoMode {
    /// Isomorphisms must map first class to first class.
    SidePreserving,
    /// Isomorphisms may also swap the two classes.
    SideSwapping,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub colors: Vec<u32>,
    /// Lower-triangular multiplicity rows in canonical node order.
    pub adjacency: Vec<u16>,
}

impl CanonicalKey {
    pub fn node_count(&self) -> usize {
        self.colors.len()
    }
}

pub(super) fn canonical_key(g: &Bigraph, mode: IsoMode) -> CanonicalKey {
    let direct = side_preserving_key(g);
    match mode {
        IsoMode::SidePreserving => direct,
        IsoMode::SideSwapping => direct.min(side_preserving_key(&g.transpose())),
    }
}

fn side_preserving_key(g: &Bigraph) -> CanonicalKey {
    let mut colors: Vec<u32> = g
        .sides()
        .iter()
        .map(|s| match s {
            Side::First => 0,
            Side::Second => 1,
        })
        .collect();
    for (k, &l) in g.labels().iter().enumerate() {
        colors[l] += 2 * (k as u32 + 1);
    }
    let adj = g.multiplicity_matrix();
    let order = canonical_order(&colors, &adj);
    key_for(&colors, &adj, &order)
}

fn key_for(colors: &[u32], adj: &[Vec<u16>], order: &[usize]) -> CanonicalKey {
    let n = order.len();
    let mut adjacency = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for p in 0..n {
        for q in 0..p {
            adjacency.push(adj[order[p]][order[q]]);
        }
    }
    CanonicalKey { colors: order.iter().map(|&v| colors[v]).collect(), adjacency }
}

/// Canonical node order (`order[p]` is the node placed at position `p`) for
/// a vertex-colored multigraph given by its multiplicity matrix.
pub(crate) fn canonical_order(colors: &[u32], adj: &[Vec<u16>]) -> Vec<usize> {
    let n = colors.len();
    if n == 0 {
        return vec![];
    }
    let mut twin = (0..n).collect::<Vec<_>>();
    for v in 0..n {
        for w in 0..v {
            if twin[w] == w && colors[v] == colors[w] && adj[v] == adj[w] {
                twin[v] = w;
                break;
            }
        }
    }
    let start = refine(adj, colors.to_vec());
    let mut best: Option<(CanonicalKey, Vec<usize>)> = None;
    search(colors, adj, &twin, start, &mut best);
    best.expect("search visits at least one leaf").1
}

fn search(
    colors: &[u32],
    adj: &[Vec<u16>],
    twin: &[usize],
    cell: Vec<u32>,
    best: &mut Option<(CanonicalKey, Vec<usize>)>,
) {
    let n = cell.len();
    let mut size = vec![0usize; n];
    for &c in &cell {
        size[c as usize] += 1;
    }
    let Some(target) = (0..n).find(|&c| size[c] > 1) else {
        let mut order = vec![0; n];
        for v in 0..n {
            order[cell[v] as usize] = v;
        }
        let key = key_for(colors, adj, &order);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            *best = Some((key, order));
        }
        return;
    };
    let target = target as u32;
    let members: Vec<usize> = (0..n).filter(|&v| cell[v] == target).collect();
    for (i, &v) in members.iter().enumerate() {
        if members[..i].iter().any(|&w| twin[w] == twin[v]) {
            continue;
        }
        let split: Vec<u32> = (0..n)
            .map(|u| 2 * cell[u] + u32::from(cell[u] == target && u != v))
            .collect();
        search(colors, adj, twin, refine(adj, split), best);
    }
}

/// Iterated neighborhood refinement; returns dense ranks `0..cells`.
fn refine(adj: &[Vec<u16>], init: Vec<u32>) -> Vec<u32> {
    let n = init.len();
    let mut cur = ranks(init.into_iter().map(|c| vec![u64::from(c)]).collect());
    let mut cells = distinct(&cur);
    loop {
        let sigs: Vec<Vec<u64>> = (0..n)
            .map(|v| {
                let mut s: Vec<u64> = (0..n)
                    .filter(|&u| adj[v][u] > 0)
                    .map(|u| (u64::from(cur[u]) << 16) | u64::from(adj[v][u]))
                    .collect();
                s.sort_unstable();
                s.insert(0, u64::from(cur[v]));
                s
            })
            .collect();
        let next = ranks(sigs);
        let next_cells = distinct(&next);
        if next_cells == cells {
            return cur;
        }
        cur = next;
        cells = next_cells;
    }
}

fn ranks<T: Ord + Clone>(sigs: Vec<T>) -> Vec<u32> {
    let mut sorted = sigs.clone();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("signature present") as u32)
        .collect()
}

fn distinct(r: &[u32]) -> usize {
    r.iter().copied().max().map_or(0, |m| m as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;
    use proptest::prelude::*;

    fn key(g: &Bigraph, mode: IsoMode) -> CanonicalKey {
        g.canonical_form(mode).unwrap()
    }

    #[test]
    fn c4_matches_k22() {
        assert_eq!(
            key(&cycle(4), IsoMode::SidePreserving),
            key(&complete_bipartite(2, 2), IsoMode::SidePreserving)
        );
    }

    #[test]
    fn k23_and_k32() {
        let a = complete_bipartite(2, 3);
        let b = complete_bipartite(3, 2);
        assert_ne!(key(&a, IsoMode::SidePreserving), key(&b, IsoMode::SidePreserving));
        assert_eq!(key(&a, IsoMode::SideSwapping), key(&b, IsoMode::SideSwapping));
    }

    #[test]
    fn p4_vs_star() {
        assert_ne!(key(&path(4), IsoMode::SideSwapping), key(&star(3), IsoMode::SideSwapping));
    }

    #[test]
    fn labels_matter() {
        let a = labeled_path(3);
        let b = path(3).with_labels(vec![1]).unwrap();
        assert_ne!(key(&a, IsoMode::SideSwapping), key(&b, IsoMode::SideSwapping));
        let c = path(3).with_labels(vec![2]).unwrap();
        assert_eq!(key(&a, IsoMode::SidePreserving), key(&c, IsoMode::SidePreserving));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(complete_bipartite(3, 3).subdivide().canonical_form(IsoMode::SideSwapping).is_err());
    }

    #[test]
    fn regular_graphs_distinguished() {
        // C_12 and two disjoint C_6 are both 2-regular with equal refinement
        let a = cycle(12);
        let b = cycle(6).disjoint_union(&cycle(6));
        assert_ne!(key(&a, IsoMode::SideSwapping), key(&b, IsoMode::SideSwapping));
        let q3 = prism(4).unwrap();
        let other = Bigraph::from_bipartite_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 5), (1, 4), (2, 7), (3, 6)],
        )
        .unwrap();
        assert_eq!(other.edge_count(), 12);
        let iso = key(&q3, IsoMode::SideSwapping) == key(&other, IsoMode::SideSwapping);
        assert_eq!(iso, brute_iso(&q3, &other, false));
    }

    fn brute_iso(a: &Bigraph, b: &Bigraph, respect_sides: bool) -> bool {
        let n = a.node_count();
        let mut ma = a.multiplicity_matrix();
        let mut mb = b.multiplicity_matrix();
        if respect_sides {
            for v in 0..n {
                ma[v][v] = 1 + a.side(v) as u16;
                mb[v][v] = 1 + b.side(v) as u16;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        fn rec(k: usize, perm: &mut Vec<usize>, ma: &[Vec<u16>], mb: &[Vec<u16>]) -> bool {
            let n = perm.len();
            if k == n {
                return (0..n).all(|i| (0..n).all(|j| ma[i][j] == mb[perm[i]][perm[j]]));
            }
            for i in k..n {
                perm.swap(k, i);
                if (0..=k).all(|j| ma[k][j] == mb[perm[k]][perm[j]]) && rec(k + 1, perm, ma, mb) {
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }
        rec(0, &mut perm, &ma, &mb)
    }

    fn arb_bigraph() -> impl Strategy<Value = Bigraph> {
        (1usize..5, 1usize..5).prop_flat_map(|(a, b)| {
            proptest::collection::vec((0..a, 0..b), 0..10).prop_map(move |es| {
                let mut sides = vec![Side::First; a];
                sides.extend(std::iter::repeat_n(Side::Second, b));
                Bigraph::new(sides, es.into_iter().map(|(i, j)| (i, a + j)), vec![]).unwrap()
            })
        })
    }

    fn arb_pair() -> impl Strategy<Value = (Bigraph, Bigraph)> {
        (1usize..4, 1usize..4, 0usize..6).prop_flat_map(|(a, b, m)| {
            let edges = proptest::collection::vec((0..a, 0..b), m);
            (edges.clone(), edges).prop_map(move |(x, y)| {
                let mut sides = vec![Side::First; a];
                sides.extend(std::iter::repeat_n(Side::Second, b));
                let build = |es: Vec<(usize, usize)>| {
                    Bigraph::new(sides.clone(), es.into_iter().map(|(i, j)| (i, a + j)), vec![]).unwrap()
                };
                (build(x), build(y))
            })
        })
    }

    proptest! {
        #[test]
        fn key_is_permutation_invariant(g in arb_bigraph(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..g.node_count()).collect();
            perm.shuffle(&mut rng);
            let h = g.permute_nodes(&perm).unwrap();
            prop_assert_eq!(key(&g, IsoMode::SidePreserving), key(&h, IsoMode::SidePreserving));
            prop_assert_eq!(key(&g, IsoMode::SideSwapping), key(&h.transpose(), IsoMode::SideSwapping));
        }

        #[test]
        fn equal_keys_mean_isomorphic((g, h) in arb_pair()) {
            let same = key(&g, IsoMode::SidePreserving) == key(&h, IsoMode::SidePreserving);
            prop_assert_eq!(same, brute_iso(&g, &h, true));
        }
    }
}
