//! Hanging path systems: openly disjoint paths whose internal nodes have
//! degree 2, with at most two path ends at any node.

use serde::Serialize;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};

/// Largest graph accepted by [`find_hanging_path_system`].
pub const HPS_NODE_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HangingPathSystem {
    /// Node sequences; each path has at least one edge.
    pub paths: Vec<Vec<usize>>,
    /// Total number of internal nodes.
    pub value: usize,
    /// Longest path, in edges.
    pub max_length: usize,
}

impl HangingPathSystem {
    pub fn new(mut paths: Vec<Vec<usize>>) -> Self {
        paths.sort();
        let value = paths.iter().map(|p| p.len().saturating_sub(2)).sum();
        let max_length = paths.iter().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0);
        HangingPathSystem { paths, value, max_length }
    }

    /// Path lengths in edges.
    pub fn lengths(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.len() - 1).collect()
    }

    /// Checks every defining condition against `f`.
    pub fn validate(&self, f: &Bigraph) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGraph(format!("hanging path system: {msg}")));
        let n = f.node_count();
        let mult = f.multiplicity_matrix();
        let deg = f.degrees();
        let mut internal_owner = vec![None; n];
        let mut ends = vec![0usize; n];
        for (i, p) in self.paths.iter().enumerate() {
            if p.len() < 2 {
                return bad(format!("path {i} has no edge"));
            }
            if p.iter().any(|&v| v >= n) {
                return bad(format!("path {i} leaves the graph"));
            }
            let mut seen = vec![false; n];
            for &v in p {
                if std::mem::replace(&mut seen[v], true) {
                    return bad(format!("path {i} repeats node {v}"));
                }
            }
            if p.windows(2).any(|w| mult[w[0]][w[1]] == 0) {
                return bad(format!("path {i} uses a non-edge"));
            }
            for &v in &p[1..p.len() - 1] {
                if deg[v] != 2 {
                    return bad(format!("internal node {v} of path {i} has degree {}", deg[v]));
                }
                if internal_owner[v].replace(i).is_some() {
                    return bad(format!("node {v} is internal to two paths"));
                }
            }
            ends[p[0]] += 1;
            ends[p[p.len() - 1]] += 1;
        }
        for v in 0..n {
            if internal_owner[v].is_some() && ends[v] > 0 {
                return bad(format!("node {v} is internal to one path and an end of another"));
            }
            if ends[v] > 2 {
                return bad(format!("{} paths start at node {v}", ends[v]));
            }
        }
        let expect = HangingPathSystem::new(self.paths.clone());
        if expect.value != self.value || expect.max_length != self.max_length {
            return bad("value or maximum length is stale".into());
        }
        Ok(())
    }
}

struct Candidate {
    nodes: Vec<usize>,
    internal: u64,
}

/// All paths of 2..=`max_len` edges whose internal nodes have degree 2, one
/// orientation each.
fn candidates(f: &Bigraph, max_len: usize) -> Vec<Candidate> {
    let n = f.node_count();
    let deg = f.degrees();
    let mut nbrs = f.adjacency();
    for list in &mut nbrs {
        list.sort_unstable();
        list.dedup();
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        for &x in &nbrs[u] {
            if deg[x] == 2 && max_len >= 2 {
                stack.push(vec![u, x]);
            }
        }
    }
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for &x in &nbrs[last] {
            if path.contains(&x) {
                continue;
            }
            let mut next = path.clone();
            next.push(x);
            let len = next.len() - 1;
            if path[0] < x {
                let internal = next[1..len].iter().fold(0u64, |m, &v| m | 1 << v);
                out.push(Candidate { nodes: next.clone(), internal });
            }
            if len < max_len && deg[x] == 2 {
                stack.push(next);
            }
        }
    }
    out.sort_by(|a, b| b.nodes.len().cmp(&a.nodes.len()).then_with(|| a.nodes.cmp(&b.nodes)));
    out
}

struct Search<'a> {
    cands: &'a [Candidate],
    /// Candidates having the node as an internal node.
    through: Vec<Vec<usize>>,
    eligible: u64,
    internal: u64,
    blocked: u64,
    ends: Vec<u8>,
    end_mask: u64,
    value: usize,
    chosen: Vec<usize>,
    best_value: usize,
    best: Vec<usize>,
}

impl Search<'_> {
    fn fits(&self, c: &Candidate) -> bool {
        let first = c.nodes[0];
        let last = *c.nodes.last().unwrap();
        c.internal & (self.internal | self.blocked | self.end_mask) == 0
            && (self.internal >> first) & 1 == 0
            && (self.internal >> last) & 1 == 0
            && self.ends[first] < 2
            && self.ends[last] < 2
    }

    fn toggle_ends(&mut self, c: usize, add: bool) {
        for &v in [self.cands[c].nodes[0], *self.cands[c].nodes.last().unwrap()].iter() {
            if add {
                self.ends[v] += 1;
            } else {
                self.ends[v] -= 1;
            }
            if self.ends[v] > 0 {
                self.end_mask |= 1 << v;
            } else {
                self.end_mask &= !(1 << v);
            }
        }
    }

    fn run(&mut self) {
        let open = self.eligible & !(self.internal | self.blocked | self.end_mask);
        if self.value > self.best_value {
            self.best_value = self.value;
            self.best = self.chosen.clone();
        }
        if self.value + open.count_ones() as usize <= self.best_value || open == 0 {
            return;
        }
        let x = open.trailing_zeros() as usize;
        for k in 0..self.through[x].len() {
            let c = self.through[x][k];
            if !self.fits(&self.cands[c]) {
                continue;
            }
            let gain = self.cands[c].nodes.len() - 2;
            self.internal |= self.cands[c].internal;
            self.toggle_ends(c, true);
            self.value += gain;
            self.chosen.push(c);
            self.run();
            self.chosen.pop();
            self.value -= gain;
            self.toggle_ends(c, false);
            self.internal &= !self.cands[c].internal;
        }
        self.blocked |= 1 << x;
        self.run();
        self.blocked &= !(1 << x);
    }
}

/// A maximum-value hanging path system with all lengths at most `max_len`,
/// by exhaustive branch and bound. Paths of length one add nothing to the
/// value and are never returned.
pub fn find_hanging_path_system(f: &Bigraph, max_len: usize) -> Result<HangingPathSystem> {
    let n = f.node_count();
    if n > HPS_NODE_CAP {
        return Err(Error::CapExceeded {
            what: "node count for hanging path search",
            required: n as u128,
            limit: HPS_NODE_CAP as u128,
        });
    }
    let cands = candidates(f, max_len);
    let mut through = vec![Vec::new(); n];
    let mut eligible = 0u64;
    for (i, c) in cands.iter().enumerate() {
        for &v in &c.nodes[1..c.nodes.len() - 1] {
            through[v].push(i);
        }
        eligible |= c.internal;
    }
    let mut search = Search {
        cands: &cands,
        through,
        eligible,
        internal: 0,
        blocked: 0,
        ends: vec![0; n],
        end_mask: 0,
        value: 0,
        chosen: Vec::new(),
        best_value: 0,
        best: Vec::new(),
    };
    search.run();
    let paths = search.best.iter().map(|&c| cands[c].nodes.clone()).collect();
    Ok(HangingPathSystem::new(paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let c6 = find_hanging_path_system(&cycle(6), 3).unwrap();
        assert_eq!(c6.value, 4);
        assert_eq!(c6.lengths(), vec![3, 3]);
        c6.validate(&cycle(6)).unwrap();
        assert_eq!(find_hanging_path_system(&star(3), 5).unwrap().value, 0);
        let p4 = find_hanging_path_system(&path(4), 3).unwrap();
        assert_eq!(p4.value, 2);
        assert_eq!(p4.paths, vec![vec![0, 1, 2, 3]]);
        assert_eq!(find_hanging_path_system(&path(4), 2).unwrap().value, 1);
        assert_eq!(find_hanging_path_system(&cycle(6), 6).unwrap().value, 4);
    }

    #[test]
    fn theta_graph() {
        // three internally disjoint paths of length 3 between two hubs
        let g = theta(&[3, 3, 3]).unwrap();
        let h = find_hanging_path_system(&g, 3).unwrap();
        h.validate(&g).unwrap();
        assert_eq!(h.value, 4);
    }

    #[test]
    fn validator_rejects() {
        let c6 = cycle(6);
        let three_ends = HangingPathSystem::new(vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0], vec![0, 1]]);
        assert!(three_ends.validate(&c6).is_err());
        let shared_internal = HangingPathSystem::new(vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert!(shared_internal.validate(&c6).is_err());
        let high_degree = HangingPathSystem::new(vec![vec![1, 0, 4]]);
        assert!(high_degree.validate(&star(3)).is_err());
        let non_edge = HangingPathSystem::new(vec![vec![0, 2, 3]]);
        assert!(non_edge.validate(&c6).is_err());
        let mut stale = HangingPathSystem::new(vec![vec![0, 1, 2]]);
        stale.value = 3;
        assert!(stale.validate(&c6).is_err());
    }

    #[test]
    fn cap() {
        assert!(find_hanging_path_system(&cycle(18), 3).is_err());
    }

    /// Every simple path with degree-2 internal nodes, by brute force over
    /// node sequences.
    fn all_paths(g: &Bigraph, max_len: usize) -> Vec<Vec<usize>> {
        let n = g.node_count();
        let mult = g.multiplicity_matrix();
        let deg = g.degrees();
        let mut out = Vec::new();
        fn extend(
            p: &mut Vec<usize>,
            n: usize,
            max_len: usize,
            mult: &[Vec<u16>],
            deg: &[usize],
            out: &mut Vec<Vec<usize>>,
        ) {
            if p.len() >= 3 && p[0] < *p.last().unwrap() && p[1..p.len() - 1].iter().all(|&v| deg[v] == 2) {
                out.push(p.clone());
            }
            if p.len() > max_len {
                return;
            }
            for v in 0..n {
                if !p.contains(&v) && mult[*p.last().unwrap()][v] > 0 {
                    p.push(v);
                    extend(p, n, max_len, mult, deg, out);
                    p.pop();
                }
            }
        }
        for s in 0..n {
            extend(&mut vec![s], n, max_len, &mult, &deg, &mut out);
        }
        out
    }

    fn oracle(g: &Bigraph, max_len: usize) -> Option<usize> {
        let paths = all_paths(g, max_len);
        if paths.len() > 14 {
            return None;
        }
        let mut best = 0;
        for mask in 0u32..1 << paths.len() {
            let pick: Vec<Vec<usize>> =
                (0..paths.len()).filter(|i| mask >> i & 1 == 1).map(|i| paths[i].clone()).collect();
            let h = HangingPathSystem::new(pick);
            if h.value > best && h.validate(g).is_ok() {
                best = h.value;
            }
        }
        Some(best)
    }

    fn arb_graph() -> impl Strategy<Value = Bigraph> {
        (1usize..4, 1usize..4).prop_flat_map(|(a, b)| {
            prop::collection::vec((0..a, 0..b), 0..8).prop_map(move |pairs| {
                let sides = (0..a + b)
                    .map(|v| if v < a { crate::bigraph::Side::First } else { crate::bigraph::Side::Second })
                    .collect();
                Bigraph::new(sides, pairs.into_iter().map(|(x, y)| (x, a + y)), vec![]).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn search_matches_subset_oracle(g in arb_graph(), max_len in 2usize..6) {
            let h = find_hanging_path_system(&g, max_len).unwrap();
            h.validate(&g).unwrap();
            prop_assert!(h.max_length <= max_len);
            if let Some(best) = oracle(&g, max_len) {
                prop_assert_eq!(h.value, best);
            }
        }
    }
}
