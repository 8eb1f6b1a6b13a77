use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Bigraph, Side};

/// Length of a shortest cycle; acyclic graphs have infinite girth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Structure {
    pub girth: Girth,
    pub degrees: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Nodes of degree one.
    pub endnodes: Vec<usize>,
    /// Pairs of endnodes joined by an edge (isolated `K_2` components).
    pub adjacent_endnodes: Vec<(usize, usize)>,
    /// Pairs of endnodes with a common neighbor.
    pub endnodes_sharing_neighbor: Vec<(usize, usize)>,
    pub is_star: bool,
    pub is_single_cycle: bool,
    pub is_complete_bipartite: bool,
    pub min_degree: Option<usize>,
}

impl Structure {
    pub fn of(g: &Bigraph) -> Structure {
        let n = g.node_count();
        let degrees = g.degrees();
        let components = g.component_nodes();
        let connected = components.len() == 1;
        let adj = g.adjacency();
        let endnodes: Vec<usize> = (0..n).filter(|&v| degrees[v] == 1).collect();
        let mut adjacent_endnodes = Vec::new();
        let mut endnodes_sharing_neighbor = Vec::new();
        for (i, &u) in endnodes.iter().enumerate() {
            for &w in &endnodes[i + 1..] {
                if adj[u][0] == w {
                    adjacent_endnodes.push((u, w));
                } else if adj[u][0] == adj[w][0] {
                    endnodes_sharing_neighbor.push((u, w));
                }
            }
        }
        let simple = g.is_simple();
        let is_star = connected
            && n >= 2
            && simple
            && g.edge_count() == n - 1
            && (0..n).any(|v| degrees[v] == n - 1);
        let is_single_cycle = connected && n >= 2 && degrees.iter().all(|&d| d == 2);
        let first = g.nodes_on(Side::First).len();
        let second = n - first;
        let is_complete_bipartite =
            first > 0 && second > 0 && simple && g.edge_count() == first * second;
        Structure {
            girth: girth(g),
            min_degree: degrees.iter().copied().min(),
            degrees,
            components,
            endnodes,
            adjacent_endnodes,
            endnodes_sharing_neighbor,
            is_star,
            is_single_cycle,
            is_complete_bipartite,
        }
    }
}

/// Shortest cycle length by BFS from every node; parallel edges count as
/// 2-cycles.
pub(crate) fn girth(g: &Bigraph) -> Girth {
    let n = g.node_count();
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        inc[a].push((b, id));
        inc[b].push((a, id));
    }
    let mut best = usize::MAX;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, id) in &inc[u] {
                if id == via[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = id;
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}
