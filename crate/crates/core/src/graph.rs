//! Plain simple graphs: the host graphs `G` of homomorphism counts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bigraph::{canonical_order, GraphJson};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    /// Sorted pairs `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Builds a simple graph; repeated pairs collapse, loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) refers to a missing node")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at node {u}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph { n, edges: set.into_iter().collect() })
    }

    pub fn complete(n: usize) -> Self {
        SimpleGraph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// The graph on `n` nodes whose edges are the bits of `mask` over the
    /// pair order `(0,1), (0,2), .., (1,2), ..`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let edges = pairs(n)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p);
        SimpleGraph::new(n, edges).unwrap()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = true;
            a[v][u] = true;
        }
        a
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Isomorphism-invariant key: adjacency bits in canonical order.
    pub fn canonical_key(&self) -> Vec<u16> {
        let m = self.adjacency_matrix();
        let adj: Vec<Vec<u16>> = m.iter().map(|r| r.iter().map(|&b| u16::from(b)).collect()).collect();
        let order = canonical_order(&vec![0; self.n], &adj);
        let mut key = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for p in 0..self.n {
            for q in 0..p {
                key.push(adj[order[p]][order[q]]);
            }
        }
        key
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        if value.get("first").is_some() {
            let g: GraphJson = serde_json::from_value(value)?;
            return Ok(g.to_bigraph()?.to_simple_graph());
        }
        let parsed: SimpleGraphJson = serde_json::from_value(value)?;
        parsed.to_graph()
    }
}

/// `{"nodes": n, "edges": [[u, v], ..]}` with `nodes` a count or an id list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleGraphJson {
    pub nodes: NodeSpec,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeSpec {
    Count(usize),
    Ids(Vec<usize>),
}

impl SimpleGraphJson {
    pub fn to_graph(&self) -> Result<SimpleGraph> {
        match &self.nodes {
            NodeSpec::Count(n) => SimpleGraph::new(*n, self.edges.iter().map(|e| (e[0], e[1]))),
            NodeSpec::Ids(ids) => {
                let index = |id: usize| {
                    ids.iter()
                        .position(|&x| x == id)
                        .ok_or_else(|| Error::Parse(format!("unknown node id {id}")))
                };
                let mut edges = Vec::new();
                for e in &self.edges {
                    edges.push((index(e[0])?, index(e[1])?));
                }
                SimpleGraph::new(ids.len(), edges)
            }
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// One representative per isomorphism class of simple graphs on `n` nodes,
/// grown edge by edge.
pub fn isomorphism_classes(n: usize) -> Vec<SimpleGraph> {
    let all = pairs(n);
    let mut out = vec![SimpleGraph::new(n, []).unwrap()];
    let mut layer = out.clone();
    for _ in 0..all.len() {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for &(u, v) in &all {
                if g.has_edge(u, v) {
                    continue;
                }
                let h = SimpleGraph::new(n, g.edges.iter().copied().chain([(u, v)])).unwrap();
                if seen.insert(h.canonical_key()) {
                    next.push(h);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // OEIS A000088
        let expected = [1, 1, 2, 4, 11, 34, 156];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(isomorphism_classes(n).len(), c, "n = {n}");
        }
    }

    #[test]
    fn json_forms() {
        let g = SimpleGraph::from_json_str(r#"{"nodes":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        let h = SimpleGraph::from_json_str(r#"{"nodes":[5,7],"edges":[[5,7]]}"#).unwrap();
        assert_eq!(h, SimpleGraph::complete(2));
        let b = SimpleGraph::from_json_str(r#"{"first":[0],"second":[1],"edges":[[0,1],[0,1]]}"#).unwrap();
        assert_eq!(b, SimpleGraph::complete(2));
        assert!(SimpleGraph::from_json_str(r#"{"nodes":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn pair_mask() {
        let g = SimpleGraph::from_pair_mask(3, 0b101);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }
}
