//! Spanning-subgraph expansion `t(F, 1 + U) = Σ_{F'} t(F', U)`, grouped by
//! isomorphism class of the term.

use std::collections::BTreeMap;

use serde::Serialize;

use super::density;
use crate::bigraph::{Bigraph, CanonicalKey, IsoMode, CANONICAL_NODE_CAP, SPANNING_EDGE_CAP};
use crate::error::{Error, Result};
use crate::exec;
use crate::kernel::StepKernel;
use crate::scalar::Scalar;

/// Grouping key of a term: its side-preserving canonical form, or the raw
/// edge mask for terms too large to canonicalize.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TermKey {
    Canonical(CanonicalKey),
    Raw(u64),
}

#[derive(Clone, Debug)]
pub struct ExpansionEntry<S> {
    pub key: TermKey,
    /// Term of the smallest edge mask in the class.
    pub representative: Bigraph,
    pub first_mask: u64,
    pub multiplicity: u64,
    /// `t(F', U)` for one member of the class.
    pub value: S,
}

#[derive(Clone, Debug)]
pub struct Expansion<S> {
    pub entries: Vec<ExpansionEntry<S>>,
    /// `Σ multiplicity · value`.
    pub total: S,
}

pub(crate) fn term_key(term: &Bigraph, mask: u64) -> TermKey {
    if term.node_count() > CANONICAL_NODE_CAP {
        TermKey::Raw(mask)
    } else {
        TermKey::Canonical(
            term.canonical_form(IsoMode::SidePreserving)
                .expect("node count checked against the cap"),
        )
    }
}

/// Groups the `2^m` spanning terms of `f` by class: `key -> (first mask,
/// count)`.
pub fn group_terms(f: &Bigraph) -> Result<BTreeMap<TermKey, (u64, u64)>> {
    let f = f.unlabel();
    let m = f.edge_count();
    if m > SPANNING_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "edge count for spanning-term enumeration",
            required: m as u128,
            limit: SPANNING_EDGE_CAP as u128,
        });
    }
    let chunk_bits = m.min(8);
    let per_chunk = 1u64 << (m - chunk_bits);
    let partial = exec::map_range(1usize << chunk_bits, |c| {
        let mut local: BTreeMap<TermKey, (u64, u64)> = BTreeMap::new();
        let start = c as u64 * per_chunk;
        for mask in start..start + per_chunk {
            let key = term_key(&f.spanning_term(mask), mask);
            local.entry(key).and_modify(|e| e.1 += 1).or_insert((mask, 1));
        }
        local
    });
    let mut merged: BTreeMap<TermKey, (u64, u64)> = BTreeMap::new();
    for local in partial {
        for (k, (mask, count)) in local {
            merged
                .entry(k)
                .and_modify(|e| {
                    e.0 = e.0.min(mask);
                    e.1 += count;
                })
                .or_insert((mask, count));
        }
    }
    Ok(merged)
}

/// The expansion ledger of `f` around `U` (so the kernel is `1 + U`).
pub fn expansion<S: Scalar>(f: &Bigraph, u: &StepKernel<S>) -> Result<Expansion<S>> {
    let f = f.unlabel();
    let groups: Vec<(TermKey, (u64, u64))> = group_terms(&f)?.into_iter().collect();
    let values = exec::map_slice(&groups, |(_, (mask, _))| density(&f.spanning_term(*mask), u));
    let mut entries = Vec::with_capacity(groups.len());
    let mut total = S::zero();
    for ((key, (mask, count)), value) in groups.into_iter().zip(values) {
        let value = value?;
        total = total + S::from_i64(count as i64) * value.clone();
        entries.push(ExpansionEntry {
            key,
            representative: f.spanning_term(mask),
            first_mask: mask,
            multiplicity: count,
            value,
        });
    }
    Ok(Expansion { entries, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;
    use crate::kernel::KernelSampler;
    use crate::scalar::{rat_int, Rational};

    #[test]
    fn c4_ledger_with_mean_zero() {
        let u = KernelSampler::new(2, 3).mean_zero(true).random_measures(true).sample(3);
        let e = expansion(&cycle(4), &u).unwrap();
        assert_eq!(e.entries.len(), 7);
        let find = |g: &Bigraph| {
            let key = TermKey::Canonical(g.canonical_form(IsoMode::SidePreserving).unwrap());
            e.entries.iter().find(|x| x.key == key).unwrap().clone()
        };
        let empty = find(&Bigraph::empty());
        assert_eq!((empty.multiplicity, empty.value.clone()), (1, rat_int(1)));
        let k2 = find(&edge());
        assert_eq!((k2.multiplicity, k2.value.clone()), (4, rat_int(0)));
        let two = find(&edge().disjoint_union(&edge()));
        assert_eq!((two.multiplicity, two.value.clone()), (2, rat_int(0)));
        // P_3 comes in two orientations: center in either class
        let p3a = find(&path(3));
        let p3b = find(&path(3).transpose());
        assert_eq!(p3a.multiplicity + p3b.multiplicity, 4);
        assert_eq!(find(&path(4)).multiplicity, 4);
        assert_eq!(find(&cycle(4)).multiplicity, 1);
        let w = u.shifted(&rat_int(1));
        assert_eq!(e.total, density(&cycle(4), &w).unwrap());
    }

    #[test]
    fn single_edge() {
        let u = KernelSampler::new(2, 2).sample(1);
        let e = expansion(&edge(), &u).unwrap();
        assert_eq!(e.entries.len(), 2);
        assert_eq!(e.total, rat_int(1) + u.integral());
    }

    #[test]
    fn identity_on_p4() {
        for seed in 0..10 {
            let u: StepKernel<Rational> = KernelSampler::new(3, 2).random_measures(true).sample(seed);
            let e = expansion(&path(4), &u).unwrap();
            let direct = super::super::density_naive(&path(4), &u.shifted(&rat_int(1))).unwrap();
            assert_eq!(e.total, direct);
        }
    }

    #[test]
    fn counts_sum_to_power_of_two() {
        let g = complete_bipartite(3, 3);
        let groups = group_terms(&g).unwrap();
        assert_eq!(groups.values().map(|v| v.1).sum::<u64>(), 1 << 9);
    }
}
