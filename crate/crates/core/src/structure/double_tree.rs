//! The doubled tree: two copies of a rooted tree glued along their leaves,
//! and the recursive hanging path system inside it.

use super::hps::HangingPathSystem;
use super::tree::RootedTree;
use crate::bigraph::Bigraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DoubleTree {
    pub graph: Bigraph,
    /// Node of the first copy for each tree node (the identity).
    pub first: Vec<usize>,
    /// Node of the second copy; leaves map to the shared node.
    pub second: Vec<usize>,
}

/// Two copies of `t` with corresponding leaves identified. The root is never
/// identified, even when it has degree one.
pub fn double_tree(t: &RootedTree) -> Result<DoubleTree> {
    let n = t.node_count();
    if n < 2 {
        return Err(Error::TrivialTree);
    }
    let mut second = vec![0; n];
    let mut sides = t.graph().sides().to_vec();
    for v in 0..n {
        if t.is_leaf(v) {
            second[v] = v;
        } else {
            second[v] = sides.len();
            sides.push(t.graph().side(v));
        }
    }
    let mut edges = Vec::with_capacity(2 * (n - 1));
    for &(a, b) in t.graph().edges() {
        edges.push((a, b));
        edges.push((second[a], second[b]));
    }
    let graph = Bigraph::new(sides, edges, vec![])?;
    Ok(DoubleTree { graph, first: (0..n).collect(), second })
}

struct Builder<'a> {
    t: &'a RootedTree,
    second: &'a [usize],
    paths: Vec<Vec<usize>>,
}

impl Builder<'_> {
    /// Children of `v` ordered by branch depth, deepest first, ties by id.
    fn by_depth(&self, v: usize) -> Vec<usize> {
        let mut c = self.t.children(v).to_vec();
        c.sort_by_key(|&x| (std::cmp::Reverse(self.t.height(x)), x));
        c
    }

    fn mirror(&self, p: &[usize]) -> Vec<usize> {
        p.iter().map(|&v| self.second[v]).collect()
    }

    /// Subtree at `r` with every branch but the deepest pruned.
    fn rooted_at(&mut self, r: usize) {
        if let Some(&c) = self.by_depth(r).first() {
            self.branch(r, c);
        }
    }

    /// Subtree consisting of `r` and the branch through its child `c`.
    fn branch(&mut self, r: usize, c: usize) {
        let mut p = vec![r, c];
        while let [only] = self.t.children(*p.last().unwrap()) {
            p.push(*only);
        }
        let a = p.len() - 1;
        let v = *p.last().unwrap();
        let kids = self.by_depth(v);
        if kids.is_empty() {
            if a == 1 {
                self.paths.push(vec![r, v, self.second[r]]);
            } else {
                let m = self.mirror(&p);
                self.paths.push(p);
                self.paths.push(m);
            }
            return;
        }
        let (c1, c2) = (kids[0], kids[1]);
        self.branch(v, c1);
        if a == 1 {
            self.branch(v, c2);
        } else {
            self.rooted_at(c2);
            let m = self.mirror(&p);
            self.paths.push(p);
            self.paths.push(m);
        }
    }
}

/// The hanging path system in `double_tree(t)` produced by the inductive
/// construction: prune to the deepest branch at the root, follow the bare
/// path of length `a` to the first branching node or leaf, then recurse on
/// the deepest branch and either the second branch (`a = 1`) or the second
/// branch minus its top node together with the bare path and its mirror
/// image (`a >= 2`).
pub fn double_tree_hps(t: &RootedTree) -> Result<HangingPathSystem> {
    let dt = double_tree(t)?;
    let mut b = Builder { t, second: &dt.second, paths: Vec::new() };
    b.rooted_at(t.root());
    Ok(HangingPathSystem::new(b.paths))
}
