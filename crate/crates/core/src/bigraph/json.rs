use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Bigraph, Side};
use crate::error::{Error, Result};

/// Node identifier in the JSON format: an integer or a string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeId {
    Int(i64),
    Name(String),
}

/// `{"first": [..], "second": [..], "edges": [[u, v], ..], "labels": {"1": id, ..}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub first: Vec<NodeId>,
    pub second: Vec<NodeId>,
    #[serde(default)]
    pub edges: Vec<[NodeId; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<usize, NodeId>,
}

impl GraphJson {
    /// Integer ids that are exactly `0..n` keep their value as node index;
    /// otherwise nodes are numbered in listing order (first class first).
    pub fn to_bigraph(&self) -> Result<Bigraph> {
        let listed: Vec<(&NodeId, Side)> = self
            .first
            .iter()
            .map(|id| (id, Side::First))
            .chain(self.second.iter().map(|id| (id, Side::Second)))
            .collect();
        let n = listed.len();
        let identity = {
            let mut seen = vec![false; n];
            listed.iter().all(|(id, _)| match id {
                NodeId::Int(i) if *i >= 0 && (*i as usize) < n => !std::mem::replace(&mut seen[*i as usize], true),
                _ => false,
            })
        };
        let mut index: HashMap<&NodeId, usize> = HashMap::new();
        let mut sides = vec![Side::First; n];
        for (pos, &(id, side)) in listed.iter().enumerate() {
            let v = match id {
                NodeId::Int(i) if identity => *i as usize,
                _ => pos,
            };
            if index.insert(id, v).is_some() {
                return Err(Error::Parse(format!("duplicate node id {id:?}")));
            }
            sides[v] = side;
        }
        let lookup = |id: &NodeId| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown node id {id:?}")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for [u, v] in &self.edges {
            edges.push((lookup(u)?, lookup(v)?));
        }
        let mut labels = Vec::with_capacity(self.labels.len());
        for (expect, (&k, id)) in (1..).zip(&self.labels) {
            if k != expect {
                return Err(Error::Parse(format!("labels must be 1..k, found {k}")));
            }
            labels.push(lookup(id)?);
        }
        Bigraph::new(sides, edges, labels)
    }

    pub fn from_bigraph(g: &Bigraph) -> GraphJson {
        let id = |v: usize| NodeId::Int(v as i64);
        GraphJson {
            first: g.nodes_on(Side::First).into_iter().map(id).collect(),
            second: g.nodes_on(Side::Second).into_iter().map(id).collect(),
            edges: g.edges().iter().map(|&(a, b)| [id(a), id(b)]).collect(),
            labels: g.labels().iter().enumerate().map(|(k, &v)| (k + 1, id(v))).collect(),
        }
    }
}

impl Bigraph {
    pub fn from_json_str(s: &str) -> Result<Bigraph> {
        let parsed: GraphJson = serde_json::from_str(s)?;
        parsed.to_bigraph()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::from_bigraph(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;

    #[test]
    fn round_trip() {
        for g in [doubly_labeled_path(4), labeled_complete_bipartite(2, 3), cycle(2), Bigraph::empty()] {
            let text = serde_json::to_string(&g.to_json()).unwrap();
            assert_eq!(Bigraph::from_json_str(&text).unwrap(), g);
        }
    }

    #[test]
    fn string_ids_and_multiplicity() {
        let g = Bigraph::from_json_str(
            r#"{"first":["a"],"second":["b"],"edges":[["a","b"],["b","a"]],"labels":{"1":"a"}}"#,
        )
        .unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), &[0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Bigraph::from_json_str(r#"{"first":[0],"second":[1],"edges":[[0,2]]}"#).is_err());
        assert!(Bigraph::from_json_str(r#"{"first":[0,1],"second":[],"edges":[[0,1]]}"#).is_err());
        assert!(Bigraph::from_json_str(r#"{"first":[0],"second":[0],"edges":[]}"#).is_err());
        assert!(Bigraph::from_json_str(r#"{"first":[0],"second":[1],"labels":{"2":0}}"#).is_err());
    }
}
