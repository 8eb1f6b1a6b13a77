//! Standard families: paths, cycles, complete bigraphs and their partially
//! labeled versions.
//!
//! Paths and cycles start on the first class and alternate. The shorthand
//! constructors panic on invalid sizes; [`FamilySpec::build`] reports them.

use serde::{Deserialize, Serialize};

use super::{Bigraph, Side};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `P_n`: path with `n` nodes.
    Path { nodes: usize },
    /// `P'_n`: one endpoint labeled.
    LabeledPath { nodes: usize },
    /// `P''_n`: both endpoints labeled.
    DoublyLabeledPath { nodes: usize },
    /// `C_n` for even `n >= 2` (`C_2` is a doubled edge).
    Cycle { nodes: usize },
    /// `C'_n`: one node labeled.
    RootedCycle { nodes: usize },
    /// `K_{a,b}` with `a` nodes in the first class.
    CompleteBipartite { first: usize, second: usize },
    /// `K'_{a,b}`: the first class labeled `1..=a`.
    LabeledCompleteBipartite { first: usize, second: usize },
    /// `K_0`.
    Empty,
    /// `K_2`.
    Edge,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Bigraph> {
        let positive = |n: usize, what: &str| {
            if n == 0 {
                Err(Error::InvalidSize(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match *self {
            FamilySpec::Path { nodes } => {
                positive(nodes, "path node count")?;
                Ok(raw_path(nodes))
            }
            FamilySpec::LabeledPath { nodes } => {
                positive(nodes, "path node count")?;
                raw_path(nodes).with_labels(vec![0])
            }
            FamilySpec::DoublyLabeledPath { nodes } => {
                if nodes < 2 {
                    return Err(Error::InvalidSize("doubly labeled path needs two nodes".into()));
                }
                raw_path(nodes).with_labels(vec![0, nodes - 1])
            }
            FamilySpec::Cycle { nodes } => raw_cycle(nodes),
            FamilySpec::RootedCycle { nodes } => raw_cycle(nodes)?.with_labels(vec![0]),
            FamilySpec::CompleteBipartite { first, second } => {
                positive(first, "class size")?;
                positive(second, "class size")?;
                Ok(raw_complete(first, second))
            }
            FamilySpec::LabeledCompleteBipartite { first, second } => {
                positive(first, "class size")?;
                positive(second, "class size")?;
                raw_complete(first, second).with_labels((0..first).collect())
            }
            FamilySpec::Empty => Ok(Bigraph::empty()),
            FamilySpec::Edge => Ok(raw_path(2)),
        }
    }
}

fn alternating(n: usize) -> Vec<Side> {
    (0..n).map(|i| if i % 2 == 0 { Side::First } else { Side::Second }).collect()
}

fn raw_path(n: usize) -> Bigraph {
    Bigraph::new(alternating(n), (1..n).map(|i| (i - 1, i)), vec![]).expect("path is bipartite")
}

fn raw_cycle(n: usize) -> Result<Bigraph> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::OddCycle(n));
    }
    Bigraph::new(alternating(n), (0..n).map(|i| (i, (i + 1) % n)), vec![])
}

fn raw_complete(a: usize, b: usize) -> Bigraph {
    let mut sides = vec![Side::First; a];
    sides.extend(std::iter::repeat_n(Side::Second, b));
    let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)));
    Bigraph::new(sides, edges, vec![]).expect("complete bigraph is bipartite")
}

pub fn path(nodes: usize) -> Bigraph {
    FamilySpec::Path { nodes }.build().expect("invalid path size")
}

pub fn labeled_path(nodes: usize) -> Bigraph {
    FamilySpec::LabeledPath { nodes }.build().expect("invalid path size")
}

pub fn doubly_labeled_path(nodes: usize) -> Bigraph {
    FamilySpec::DoublyLabeledPath { nodes }.build().expect("invalid path size")
}

pub fn cycle(nodes: usize) -> Bigraph {
    FamilySpec::Cycle { nodes }.build().expect("invalid cycle length")
}

pub fn rooted_cycle(nodes: usize) -> Bigraph {
    FamilySpec::RootedCycle { nodes }.build().expect("invalid cycle length")
}

pub fn complete_bipartite(first: usize, second: usize) -> Bigraph {
    FamilySpec::CompleteBipartite { first, second }.build().expect("invalid class size")
}

pub fn labeled_complete_bipartite(first: usize, second: usize) -> Bigraph {
    FamilySpec::LabeledCompleteBipartite { first, second }
        .build()
        .expect("invalid class size")
}

pub fn edge() -> Bigraph {
    raw_path(2)
}

/// Star `K_{1,d}` with the center in the first class.
pub fn star(leaves: usize) -> Bigraph {
    complete_bipartite(1, leaves)
}

/// Paths of the given lengths (edge counts) joining two fixed nodes. Odd
/// lengths put the ends in different classes, even lengths in the same one;
/// mixing parities is rejected.
pub fn theta(lengths: &[usize]) -> Result<Bigraph> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::InvalidSize("theta path lengths must be positive".into()));
    }
    let parity = lengths[0] % 2;
    if lengths.iter().any(|&l| l % 2 != parity) {
        return Err(Error::InvalidGraph("theta paths must share parity".into()));
    }
    let mut edges = Vec::new();
    let mut n = 2;
    for &len in lengths {
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Bigraph::from_bipartite_edges(n, &edges)
}

/// Circular ladder `C_n x K_2` for even `n`.
pub fn prism(n: usize) -> Result<Bigraph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidSize(format!("prism over C_{n} is not bipartite")));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((n + i, n + (i + 1) % n));
        edges.push((i, n + i));
    }
    Bigraph::from_bipartite_edges(2 * n, &edges)
}

/// Attaches a pendant edge at node `at`.
pub fn with_pendant(g: &Bigraph, at: usize) -> Bigraph {
    let mut sides = g.sides().to_vec();
    let new = sides.len();
    sides.push(g.side(at).flip());
    let edges = g.edges().iter().copied().chain(std::iter::once((at, new)));
    Bigraph::new(sides, edges, g.labels().to_vec()).expect("pendant keeps bipartiteness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::IsoMode;

    #[test]
    fn c4_is_k22() {
        let c4 = cycle(4);
        assert_eq!(c4.node_count(), 4);
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.is_isomorphic(&complete_bipartite(2, 2), IsoMode::SidePreserving).unwrap());
    }

    #[test]
    fn small_members() {
        let p2 = path(2);
        assert_eq!((p2.node_count(), p2.edge_count()), (2, 1));
        assert_eq!(p2, edge());
        let k = labeled_complete_bipartite(2, 3);
        assert_eq!((k.node_count(), k.edge_count()), (5, 6));
        assert_eq!(k.labels(), &[0, 1]);
        assert!(k.labels().iter().all(|&l| k.side(l) == Side::First));
        assert_eq!(FamilySpec::Empty.build().unwrap().node_count(), 0);
    }

    #[test]
    fn invalid_sizes() {
        assert!(matches!(FamilySpec::Cycle { nodes: 5 }.build(), Err(Error::OddCycle(5))));
        assert!(FamilySpec::Cycle { nodes: 0 }.build().is_err());
        assert!(FamilySpec::Path { nodes: 0 }.build().is_err());
        assert!(FamilySpec::CompleteBipartite { first: 0, second: 2 }.build().is_err());
        assert!(FamilySpec::DoublyLabeledPath { nodes: 1 }.build().is_err());
    }

    #[test]
    fn theta_and_prism() {
        let t = theta(&[3, 3, 3]).unwrap();
        assert_eq!((t.node_count(), t.edge_count()), (8, 9));
        assert!(theta(&[2, 3]).is_err());
        let q3 = prism(4).unwrap();
        assert_eq!((q3.node_count(), q3.edge_count()), (8, 12));
        assert!(prism(3).is_err());
    }
}
