//! Classification of expansion terms by shape, one tag per connected
//! component.

use serde::Serialize;

use crate::bigraph::{Bigraph, Structure};
use crate::error::{Error, Result};

/// Shape classes, listed in precedence order: a component gets the first
/// tag that applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum TermTag {
    /// No edges at all.
    Empty,
    /// A component that is a single edge.
    HasIsolatedEdgeComponent,
    Star,
    TwoEndnodesNonStar,
    SingleCycle { girth: usize },
    CompleteBipartiteNonStar,
    MinDegreeTwoOther { girth: usize },
    OneEndnode { girth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    /// Nodes of the component in the classified graph.
    pub nodes: Vec<usize>,
    pub tag: TermTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermClass {
    /// `Empty` with no edges, otherwise the highest-precedence component
    /// tag.
    pub tag: TermTag,
    pub components: Vec<ComponentClass>,
}

fn component_tag(c: &Bigraph) -> TermTag {
    let s = Structure::of(c);
    let girth = || s.girth.finite().expect("a component with no endnode or one endnode has a cycle");
    if c.node_count() == 2 && c.edge_count() == 1 {
        TermTag::HasIsolatedEdgeComponent
    } else if s.is_star {
        TermTag::Star
    } else if s.endnodes.len() >= 2 {
        TermTag::TwoEndnodesNonStar
    } else if s.is_single_cycle {
        TermTag::SingleCycle { girth: girth() }
    } else if s.is_complete_bipartite {
        TermTag::CompleteBipartiteNonStar
    } else if s.endnodes.is_empty() {
        TermTag::MinDegreeTwoOther { girth: girth() }
    } else {
        TermTag::OneEndnode { girth: girth() }
    }
}

/// Classifies a term with no isolated nodes. Labels are ignored.
pub fn classify_term(f: &Bigraph) -> Result<TermClass> {
    let f = f.unlabel();
    if f.degrees().contains(&0) {
        return Err(Error::IsolatedNode);
    }
    let components: Vec<ComponentClass> = f
        .component_nodes()
        .into_iter()
        .map(|nodes| {
            let tag = component_tag(&f.induced(&nodes));
            ComponentClass { nodes, tag }
        })
        .collect();
    let tag = components.iter().map(|c| c.tag).min().unwrap_or(TermTag::Empty);
    Ok(TermClass { tag, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;
    use proptest::prelude::*;

    fn tag(g: &Bigraph) -> TermTag {
        classify_term(g).unwrap().tag
    }

    #[test]
    fn examples() {
        assert_eq!(tag(&star(4)), TermTag::Star);
        assert_eq!(tag(&path(3)), TermTag::Star);
        assert_eq!(tag(&path(5)), TermTag::TwoEndnodesNonStar);
        assert_eq!(tag(&complete_bipartite(3, 3).subdivide()), TermTag::MinDegreeTwoOther { girth: 8 });
        assert_eq!(tag(&Bigraph::empty()), TermTag::Empty);
        assert_eq!(tag(&edge()), TermTag::HasIsolatedEdgeComponent);
        assert_eq!(tag(&cycle(4)), TermTag::SingleCycle { girth: 4 });
        assert_eq!(tag(&cycle(2)), TermTag::SingleCycle { girth: 2 });
        assert_eq!(tag(&complete_bipartite(2, 3)), TermTag::CompleteBipartiteNonStar);
        assert_eq!(tag(&with_pendant(&cycle(6), 0)), TermTag::OneEndnode { girth: 6 });
        assert_eq!(tag(&complete_bipartite(1, 1).disjoint_union(&cycle(4))), TermTag::HasIsolatedEdgeComponent);
        let mixed = classify_term(&cycle(6).disjoint_union(&star(2))).unwrap();
        assert_eq!(mixed.tag, TermTag::Star);
        assert_eq!(mixed.components[1].tag, TermTag::Star);
        assert_eq!(mixed.components[0].tag, TermTag::SingleCycle { girth: 6 });
    }

    #[test]
    fn isolated_nodes_rejected() {
        let g = Bigraph::new(vec![crate::Side::First, crate::Side::Second], [], vec![]).unwrap();
        assert!(matches!(classify_term(&g), Err(Error::IsolatedNode)));
    }

    #[test]
    fn total_over_spanning_terms() {
        for g in [cycle(8), complete_bipartite(2, 4), theta(&[2, 2, 4]).unwrap(), with_pendant(&cycle(6), 1)] {
            for (_, term) in g.spanning_terms(8).unwrap() {
                let c = classify_term(&term).unwrap();
                assert_eq!(c.components.len(), term.component_nodes().len());
            }
        }
    }

    proptest! {
        #[test]
        fn invariant_under_relabeling(
            pairs in prop::collection::vec((0usize..4, 0usize..4), 1..9),
            seed in any::<u64>(),
        ) {
            let sides = (0..8).map(|v| if v < 4 { crate::Side::First } else { crate::Side::Second }).collect();
            let g = Bigraph::new(sides, pairs.into_iter().map(|(a, b)| (a, 4 + b)), vec![]).unwrap().without_isolated();
            let n = g.node_count();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let h = g.permute_nodes(&perm).unwrap();
            let mut a: Vec<TermTag> = classify_term(&g).unwrap().components.iter().map(|c| c.tag).collect();
            let mut b: Vec<TermTag> = classify_term(&h).unwrap().components.iter().map(|c| c.tag).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
