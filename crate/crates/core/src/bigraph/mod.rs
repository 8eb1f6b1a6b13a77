//! Two-sided labeled multigraphs and their algebra.
//!
//! A [`Bigraph`] has a fixed bipartition into a *first* and a *second*
//! class, a multiset of edges crossing the classes, and an optional list of
//! labeled nodes. Nodes are identified by indices `0..n`.

mod canon;
pub mod family;
mod json;
mod structure;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub(crate) use canon::canonical_order;
pub use canon::{CanonicalKey, IsoMode};
pub use json::{GraphJson, NodeId};
pub use structure::{Girth, Structure};

/// Default cap on the number of edges for spanning-subgraph enumeration.
pub const SPANNING_EDGE_CAP: usize = 20;
/// Default cap on the node count for canonical labeling.
pub const CANONICAL_NODE_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bigraph {
    sides: Vec<Side>,
    /// `(first-class node, second-class node)`, sorted.
    edges: Vec<(usize, usize)>,
    /// `labels[k]` is the node carrying label `k + 1`.
    labels: Vec<usize>,
}

impl Bigraph {
    /// Builds a bigraph from node sides, edges (either endpoint order) and
    /// labeled nodes (`labels[k]` carries label `k + 1`).
    pub fn new(
        sides: Vec<Side>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        let n = sides.len();
        let mut oriented = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) refers to a missing node")));
            }
            match (sides[u], sides[v]) {
                (Side::First, Side::Second) => oriented.push((u, v)),
                (Side::Second, Side::First) => oriented.push((v, u)),
                _ => {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({u},{v}) joins two nodes of the same class"
                    )))
                }
            }
        }
        oriented.sort_unstable();
        let mut seen = vec![false; n];
        for &l in &labels {
            if l >= n {
                return Err(Error::InvalidGraph(format!("label points at missing node {l}")));
            }
            if std::mem::replace(&mut seen[l], true) {
                return Err(Error::InvalidGraph(format!("node {l} carries two labels")));
            }
        }
        Ok(Bigraph { sides, edges: oriented, labels })
    }

    /// 2-colors a plain bipartite (multi)graph on `n` nodes. In each
    /// component the smallest node goes to the first class.
    pub fn from_bipartite_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidGraph(format!("bad edge ({u},{v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut side: Vec<Option<Side>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(Side::First);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(su.flip());
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => {
                            return Err(Error::InvalidGraph("graph is not bipartite".into()))
                        }
                        _ => {}
                    }
                }
            }
        }
        Bigraph::new(side.into_iter().map(Option::unwrap).collect(), edges.iter().copied(), vec![])
    }

    pub fn empty() -> Self {
        Bigraph { sides: vec![], edges: vec![], labels: vec![] }
    }

    pub fn node_count(&self) -> usize {
        self.sides.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    /// Edges as `(first-class node, second-class node)`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        self.labels.contains(&v)
    }

    pub fn nodes_on(&self, side: Side) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.sides[v] == side).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Neighbor lists with multiplicity.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Edge multiplicity matrix.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<u16>> {
        let n = self.node_count();
        let mut m = vec![vec![0u16; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    pub fn is_simple(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Replaces the label list.
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Bigraph> {
        Bigraph::new(self.sides.clone(), self.edges.iter().copied(), labels)
    }

    /// Drops all labels.
    pub fn unlabel(&self) -> Bigraph {
        Bigraph { labels: vec![], ..self.clone() }
    }

    /// Swaps the two classes; labels are kept.
    pub fn transpose(&self) -> Bigraph {
        let sides = self.sides.iter().map(|s| s.flip()).collect();
        let mut edges: Vec<_> = self.edges.iter().map(|&(a, b)| (b, a)).collect();
        edges.sort_unstable();
        Bigraph { sides, edges, labels: self.labels.clone() }
    }

    /// Gluing product: disjoint union with equally labeled nodes merged.
    /// Parallel edges are kept. The result carries the labels of `self`.
    pub fn glue(&self, other: &Bigraph) -> Result<Bigraph> {
        if self.label_count() != other.label_count() {
            return Err(Error::LabelCountMismatch {
                left: self.label_count(),
                right: other.label_count(),
            });
        }
        for (k, (&a, &b)) in self.labels.iter().zip(&other.labels).enumerate() {
            if self.sides[a] != other.sides[b] {
                return Err(Error::LabelSideMismatch { label: k + 1 });
            }
        }
        let mut sides = self.sides.clone();
        let mut map = vec![usize::MAX; other.node_count()];
        for (k, &b) in other.labels.iter().enumerate() {
            map[b] = self.labels[k];
        }
        for v in 0..other.node_count() {
            if map[v] == usize::MAX {
                map[v] = sides.len();
                sides.push(other.sides[v]);
            }
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (map[a], map[b])));
        Bigraph::new(sides, edges, self.labels.clone())
    }

    /// `unlabel(self · other)`.
    pub fn star_product(&self, other: &Bigraph) -> Result<Bigraph> {
        Ok(self.glue(other)?.unlabel())
    }

    /// Two copies glued along all labels, then unlabeled.
    pub fn square(&self) -> Bigraph {
        self.glue(self).expect("a graph always glues with itself").unlabel()
    }

    /// One new node on every edge. Original nodes go to the first class,
    /// subdivision nodes to the second.
    pub fn subdivide(&self) -> Bigraph {
        let n = self.node_count();
        let mut sides = vec![Side::First; n];
        let mut edges = Vec::with_capacity(2 * self.edge_count());
        for &(a, b) in &self.edges {
            let s = sides.len();
            sides.push(Side::Second);
            edges.push((a, s));
            edges.push((b, s));
        }
        Bigraph::new(sides, edges, self.labels.clone()).expect("subdivision is bipartite")
    }

    /// Disjoint union of the unlabeled graphs.
    pub fn disjoint_union(&self, other: &Bigraph) -> Bigraph {
        let off = self.node_count();
        let mut sides = self.sides.clone();
        sides.extend_from_slice(&other.sides);
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        Bigraph::new(sides, edges, vec![]).expect("union of bigraphs is a bigraph")
    }

    /// Renames node `v` to `perm[v]`.
    pub fn permute_nodes(&self, perm: &[usize]) -> Result<Bigraph> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::InvalidGraph("permutation length mismatch".into()));
        }
        let mut sides = vec![Side::First; n];
        let mut hit = vec![false; n];
        for v in 0..n {
            if perm[v] >= n || std::mem::replace(&mut hit[perm[v]], true) {
                return Err(Error::InvalidGraph("not a permutation".into()));
            }
            sides[perm[v]] = self.sides[v];
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b]));
        let labels = self.labels.iter().map(|&l| perm[l]).collect();
        Bigraph::new(sides, edges, labels)
    }

    /// Subgraph induced on `keep` (in the given order); labels on removed
    /// nodes are dropped, the rest renumbered in order.
    pub fn induced(&self, keep: &[usize]) -> Bigraph {
        let mut map = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i;
        }
        let sides = keep.iter().map(|&v| self.sides[v]).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| map[a] != usize::MAX && map[b] != usize::MAX)
            .map(|&(a, b)| (map[a], map[b]));
        let labels = self
            .labels
            .iter()
            .filter(|&&l| map[l] != usize::MAX)
            .map(|&l| map[l])
            .collect();
        Bigraph::new(sides, edges, labels).expect("induced subgraph is valid")
    }

    /// Removes nodes of degree zero that carry no label.
    pub fn without_isolated(&self) -> Bigraph {
        let deg = self.degrees();
        let keep: Vec<usize> = (0..self.node_count())
            .filter(|&v| deg[v] > 0 || self.is_labeled(v))
            .collect();
        self.induced(&keep)
    }

    /// Deletes the edges with the given indices into [`Bigraph::edges`],
    /// keeping all nodes.
    pub fn without_edges(&self, drop: &[usize]) -> Bigraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, &e)| e);
        Bigraph::new(self.sides.clone(), edges, self.labels.clone()).expect("edge deletion is valid")
    }

    /// The spanning subgraph on the edges selected by `mask` (bit `i` selects
    /// `edges()[i]`), unlabeled, with isolated nodes removed.
    pub fn spanning_term(&self, mask: u64) -> Bigraph {
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let mut used = vec![false; self.node_count()];
        for &(a, b) in &edges {
            used[a] = true;
            used[b] = true;
        }
        let keep: Vec<usize> = (0..self.node_count()).filter(|&v| used[v]).collect();
        let mut map = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            map[v] = i;
        }
        Bigraph::new(
            keep.iter().map(|&v| self.sides[v]).collect(),
            edges.iter().map(|&(a, b)| (map[a], map[b])),
            vec![],
        )
        .expect("spanning term is valid")
    }

    /// Streams the `2^m` spanning terms of the unlabeled graph.
    pub fn spanning_terms(&self, edge_cap: usize) -> Result<SpanningTerms<'_>> {
        let m = self.edge_count();
        if m > edge_cap || m >= 64 {
            return Err(Error::CapExceeded {
                what: "edge count for spanning-term enumeration",
                required: m as u128,
                limit: edge_cap.min(63) as u128,
            });
        }
        Ok(SpanningTerms { graph: self, next: 0, end: 1u64 << m })
    }

    /// Node sets of connected components, each sorted, ordered by smallest
    /// node.
    pub fn component_nodes(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut out = Vec::new();
        for s in 0..self.node_count() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut nodes = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        nodes.push(w);
                        stack.push(w);
                    }
                }
            }
            nodes.sort_unstable();
            out.push(nodes);
        }
        out
    }

    /// Connected components as separate unlabeled bigraphs.
    pub fn components(&self) -> Vec<Bigraph> {
        self.component_nodes()
            .iter()
            .map(|nodes| self.unlabel().induced(nodes))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_nodes().len() <= 1
    }

    /// Canonical key; equal keys iff the bigraphs are isomorphic (labels
    /// must map to equal labels).
    pub fn canonical_form(&self, mode: IsoMode) -> Result<CanonicalKey> {
        self.canonical_form_capped(mode, CANONICAL_NODE_CAP)
    }

    pub fn canonical_form_capped(&self, mode: IsoMode, cap: usize) -> Result<CanonicalKey> {
        if self.node_count() > cap {
            return Err(Error::CapExceeded {
                what: "node count for canonical labeling",
                required: self.node_count() as u128,
                limit: cap as u128,
            });
        }
        Ok(canon::canonical_key(self, mode))
    }

    pub fn is_isomorphic(&self, other: &Bigraph, mode: IsoMode) -> Result<bool> {
        if self.node_count() != other.node_count() || self.edge_count() != other.edge_count() {
            return Ok(false);
        }
        Ok(self.canonical_form(mode)? == other.canonical_form(mode)?)
    }

    pub fn structure(&self) -> Structure {
        Structure::of(self)
    }

    /// Underlying plain multigraph collapsed to a simple graph.
    pub fn to_simple_graph(&self) -> SimpleGraph {
        SimpleGraph::new(self.node_count(), self.edges.iter().copied()).expect("bigraph edges are valid")
    }

    /// Count of edges per unordered node pair.
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &e in &self.edges {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }
}

/// Iterator over `(edge mask, spanning term)` pairs.
pub struct SpanningTerms<'a> {
    graph: &'a Bigraph,
    next: u64,
    end: u64,
}

impl Iterator for SpanningTerms<'_> {
    type Item = (u64, Bigraph);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some((mask, self.graph.spanning_term(mask)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.end - self.next) as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for SpanningTerms<'_> {}
