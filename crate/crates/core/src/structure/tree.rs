use std::collections::{BTreeSet, VecDeque};

use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};

/// A tree with a distinguished root. Leaves are the non-root nodes of
/// degree one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    graph: Bigraph,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl RootedTree {
    pub fn new(graph: Bigraph, root: usize) -> Result<Self> {
        let n = graph.node_count();
        if root >= n {
            return Err(Error::NotATree(format!("root {root} is not a node")));
        }
        if !graph.is_simple() || graph.edge_count() + 1 != n || !graph.is_connected() {
            return Err(Error::NotATree("graph must be connected and acyclic".into()));
        }
        let adj = graph.adjacency();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut next: Vec<usize> = adj[u].iter().copied().filter(|&w| depth[w] == usize::MAX).collect();
            next.sort_unstable();
            for w in next {
                depth[w] = depth[u] + 1;
                parent[w] = Some(u);
                children[u].push(w);
                queue.push_back(w);
            }
        }
        Ok(RootedTree { graph, root, parent, children, depth })
    }

    /// Tree from a parent array with exactly one `None` (the root). Sides
    /// alternate by depth, the root on the first side.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        let roots: Vec<usize> = (0..n).filter(|&v| parents[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::NotATree(format!("expected one root, found {}", roots.len())));
        }
        let mut depth = vec![None; n];
        for start in 0..n {
            let mut chain = vec![start];
            let mut v = start;
            while depth[v].is_none() {
                match parents[v] {
                    None => {
                        depth[v] = Some(0);
                    }
                    Some(p) if p >= n => return Err(Error::NotATree(format!("parent {p} is not a node"))),
                    Some(p) => {
                        if chain.len() > n {
                            return Err(Error::NotATree("parent array has a cycle".into()));
                        }
                        chain.push(p);
                        v = p;
                    }
                }
            }
            while let Some(u) = chain.pop() {
                if depth[u].is_none() {
                    depth[u] = Some(depth[v].unwrap() + 1);
                }
                v = u;
            }
        }
        let sides = depth
            .iter()
            .map(|d| if d.unwrap() % 2 == 0 { Side::First } else { Side::Second })
            .collect();
        let edges = (0..n).filter_map(|v| parents[v].map(|p| (p, v)));
        RootedTree::new(Bigraph::new(sides, edges, vec![])?, roots[0])
    }

    pub fn graph(&self) -> &Bigraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Children in increasing order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Distance from the root.
    pub fn depth_of(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v != self.root && self.children[v].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Longest downward distance from `v` to a leaf below it.
    pub fn height(&self, v: usize) -> usize {
        self.children[v].iter().map(|&c| 1 + self.height(c)).max().unwrap_or(0)
    }

    /// `(min-depth, depth)`: smallest and largest root-to-leaf distance;
    /// `(0, 0)` for a single node.
    pub fn stats(&self) -> (usize, usize) {
        let d: Vec<usize> = self.leaves().iter().map(|&v| self.depth[v]).collect();
        (d.iter().copied().min().unwrap_or(0), d.iter().copied().max().unwrap_or(0))
    }

    fn shape(&self, v: usize) -> String {
        let mut parts: Vec<String> = self.children[v].iter().map(|&c| self.shape(c)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }

    /// Isomorphism-invariant encoding of the rooted shape.
    pub fn shape_code(&self) -> String {
        self.shape(self.root)
    }
}

pub fn tree_stats(t: &RootedTree) -> (usize, usize) {
    t.stats()
}

/// All rooted trees with `1..=max_nodes` nodes up to rooted isomorphism,
/// ordered by size then shape.
pub fn rooted_trees(max_nodes: usize) -> Vec<RootedTree> {
    let mut out = Vec::new();
    if max_nodes == 0 {
        return out;
    }
    let mut level: Vec<Vec<Option<usize>>> = vec![vec![None]];
    for size in 1..=max_nodes {
        let mut built: Vec<(String, RootedTree)> = level
            .iter()
            .map(|p| {
                let t = RootedTree::from_parents(p).expect("grown parent arrays are trees");
                (t.shape_code(), t)
            })
            .collect();
        built.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(built.iter().map(|(_, t)| t.clone()));
        if size == max_nodes {
            break;
        }
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for (_, t) in &built {
            for v in 0..size {
                let mut p: Vec<Option<usize>> = (0..size).map(|u| t.parent(u)).collect();
                p.push(Some(v));
                let grown = RootedTree::from_parents(&p).expect("adding a leaf keeps a tree");
                if seen.insert(grown.shape_code()) {
                    next.push(p);
                }
            }
        }
        level = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;

    #[test]
    fn stats_examples() {
        let p = RootedTree::new(path(4), 0).unwrap();
        assert_eq!(tree_stats(&p), (3, 3));
        let s = RootedTree::new(star(3), 0).unwrap();
        assert_eq!(tree_stats(&s), (1, 1));
        let spider = RootedTree::from_parents(&[None, Some(0), Some(0), Some(2), Some(3), Some(4)]).unwrap();
        assert_eq!(tree_stats(&spider), (1, 4));
        assert_eq!(tree_stats(&RootedTree::new(path(5), 2).unwrap()), (2, 2));
    }

    #[test]
    fn rejects_non_trees() {
        assert!(RootedTree::new(cycle(4), 0).is_err());
        assert!(RootedTree::new(edge().disjoint_union(&edge()), 0).is_err());
        assert!(RootedTree::new(path(3), 3).is_err());
        assert!(RootedTree::from_parents(&[None, Some(2), Some(1)]).is_err());
        assert!(RootedTree::from_parents(&[None, None]).is_err());
    }

    #[test]
    fn rooted_tree_counts() {
        // rooted unlabeled trees: 1, 1, 2, 4, 9, 20, 48, 115, 286
        let trees = rooted_trees(9);
        let mut counts = [0usize; 10];
        for t in &trees {
            counts[t.node_count()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 2, 4, 9, 20, 48, 115, 286]);
        assert!(trees.iter().all(|t| t.graph().edge_count() + 1 == t.node_count()));
    }
}
