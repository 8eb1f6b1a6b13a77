//! Finite-graph form: quasirandom host graphs have at least the random
//! count of copies of `F`, up to `eps`.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use super::certificate::{eps_upper, verify_variant, Certificate, Variant};
use crate::bigraph::Bigraph;
use crate::density::{density, hom_count, NAIVE_CAP};
use crate::exec;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernel::{CutWitness, StepKernel};
use crate::scalar::{format_rational, pow2, rat_int, ExtFloat, Rational};

/// Largest host graph handled (exact cut norms enumerate node subsets).
pub const GRAPH_NODE_CAP: usize = 24;

/// High bits of the subset index enumerated as separate tasks.
const SPLIT_BITS: usize = 6;

/// Best rectangle for `1[xy ∈ E] - shift_num / shift_den` on the uniform
/// kernel of `g`: the outer loop runs over all `S`, and the best `T` for a
/// fixed `S` takes every node whose column sum has the wanted sign. All
/// arithmetic is in integers scaled by `shift_den`.
fn rectangle_search(g: &SimpleGraph, shift_num: i64, shift_den: i64, two_sided: bool) -> (Rational, CutWitness) {
    let n = g.node_count();
    let adj: Vec<u32> = (0..n)
        .map(|y| (0..n).filter(|&x| g.has_edge(x, y)).fold(0u32, |m, x| m | 1 << x))
        .collect();
    let split = SPLIT_BITS.min(n);
    let low = n - split;
    // (scaled value, S, sign) per task; ties keep the smallest S
    let best = exec::map_range(1 << split, |hi| {
        let mut best = (0i64, 0u32, 1i8);
        for lo in 0u32..1 << low {
            let s = (hi as u32) << low | lo;
            let size = i64::from(s.count_ones());
            let (mut pos, mut neg) = (0i64, 0i64);
            for &a in &adj {
                let c = shift_den * i64::from((a & s).count_ones()) - shift_num * size;
                if c > 0 {
                    pos += c;
                } else {
                    neg -= c;
                }
            }
            if pos > best.0 {
                best = (pos, s, 1);
            }
            if two_sided && neg > best.0 {
                best = (neg, s, -1);
            }
        }
        best
    })
    .into_iter()
    .fold((0i64, 0u32, 1i8), |acc, b| if b.0 > acc.0 { b } else { acc });
    let (value, s, sign) = best;
    let rows: Vec<usize> = (0..n).filter(|&x| s >> x & 1 == 1).collect();
    let size = rows.len() as i64;
    let cols = (0..n)
        .filter(|&y| {
            let c = shift_den * i64::from((adj[y] & s).count_ones()) - shift_num * size;
            if sign > 0 {
                c > 0
            } else {
                c < 0
            }
        })
        .collect();
    let scale = shift_den * (n * n) as i64;
    (Rational::new(BigInt::from(value), BigInt::from(scale)), CutWitness { rows, cols, sign })
}

/// Number of maps `V(F) -> V(G)` sending edges to edges, by enumeration.
fn brute_force_hom(f: &Bigraph, g: &SimpleGraph) -> Option<u64> {
    let n = f.node_count();
    let size = g.node_count();
    if (size as u128).checked_pow(n as u32).is_none_or(|total| total > NAIVE_CAP) {
        return None;
    }
    let adj = g.adjacency_matrix();
    let mut map = vec![0usize; n];
    let mut count = 0u64;
    loop {
        if f.edges().iter().all(|&(a, b)| adj[map[a]][map[b]]) {
            count += 1;
        }
        let mut i = 0;
        while i < n {
            map[i] += 1;
            if map[i] < size {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == n {
            return Some(count);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphCheck {
    pub name: String,
    pub value: String,
    pub threshold: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CutWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphCertificate {
    pub nodes: usize,
    pub edges: usize,
    /// Edge density `M / C(N, 2)`.
    pub p: String,
    /// Normalizing constant `2M / N²`, the integral of the graph kernel.
    pub q: String,
    pub eps: String,
    pub checks: Vec<GraphCheck>,
    pub quasirandom: bool,
    /// Exact homomorphism density `t(F, G)`.
    pub density: String,
    pub hom_count: String,
    /// Independent brute-force recount agrees with `hom_count`; `None` when
    /// the brute force is over its cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hom_cross_check: Option<bool>,
    /// `p^m - eps`.
    pub floor: String,
    pub floor_holds: bool,
    /// `t(F, G) / q^m` in extended precision.
    pub normalized_density: ExtFloat,
    /// Certificate for the normalized kernel, present when both checks hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_certificate: Option<Certificate>,
}

pub fn certify_graph(g: &SimpleGraph, f: &Bigraph, eps: &Rational) -> Result<GraphCertificate> {
    let n = g.node_count();
    if n > GRAPH_NODE_CAP {
        return Err(Error::CapExceeded { what: "host graph nodes", required: n as u128, limit: GRAPH_NODE_CAP as u128 });
    }
    if n < 2 {
        return Err(Error::InvalidGraph("host graph needs at least two nodes".into()));
    }
    if !f.is_simple() {
        return Err(Error::NonSimple);
    }
    let f = f.unlabel();
    let m = f.edge_count();
    let upper = eps_upper(m);
    if *eps <= rat_int(0) || *eps >= upper {
        return Err(Error::InvalidEpsilon { eps: format_rational(eps), upper: format_rational(&upper) });
    }
    let edges = g.edge_count();
    let p = Rational::new(BigInt::from(edges), BigInt::from(n * (n - 1) / 2));
    let q = Rational::new(BigInt::from(2 * edges), BigInt::from(n * n));
    let w = StepKernel::<Rational>::from_graph(g)?;

    let pairs = (n * (n - 1) / 2) as i64;
    let (cut, cut_witness) = rectangle_search(g, edges as i64, pairs, true);
    let cut_thr = pow2(-8 * m as i64) * p.clone() - eps.clone();
    let (over, over_witness) = rectangle_search(g, 2 * edges as i64, pairs, false);
    let checks = vec![
        GraphCheck {
            name: "cut_norm(W_G - p)".into(),
            holds: cut <= cut_thr,
            value: format_rational(&cut),
            threshold: format_rational(&cut_thr),
            witness: Some(cut_witness),
        },
        GraphCheck {
            name: "max (W_G - 2p) over rectangles".into(),
            holds: over <= rat_int(0),
            value: format_rational(&over),
            threshold: "0".into(),
            witness: Some(over_witness),
        },
    ];
    let quasirandom = checks.iter().all(|c| c.holds);

    let t = density(&f, &w)?;
    let hom = hom_count(&f, g)?;
    let hom_cross_check = brute_force_hom(&f, g).map(|c| BigInt::from(c) == hom);
    let floor = Pow::pow(p.clone(), m as u32) - eps.clone();
    let normalized_density = if edges == 0 {
        ExtFloat::ZERO
    } else {
        ExtFloat::from_rational(&t).div(ExtFloat::from_rational(&q).powf(m as f64))
    };
    let kernel_certificate = if quasirandom && edges > 0 {
        let normalized = w.scaled(&(rat_int(1) / q.clone()));
        Some(verify_variant(&f, &normalized, &Variant::Reg { eps: eps.clone() })?)
    } else {
        None
    };
    Ok(GraphCertificate {
        nodes: n,
        edges,
        p: format_rational(&p),
        q: format_rational(&q),
        eps: format_rational(eps),
        checks,
        quasirandom,
        density: format_rational(&t),
        hom_count: hom.to_string(),
        hom_cross_check,
        floor_holds: t >= floor,
        floor: format_rational(&floor),
        normalized_density,
        kernel_certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::{cycle, path};
    use crate::scalar::{parse_rational, rat};

    #[test]
    fn complete_graph_counts() {
        let g = SimpleGraph::complete(5);
        let c = certify_graph(&g, &cycle(4), &pow2(-40)).unwrap();
        // trace of A^4 with spectrum {4, -1, -1, -1, -1}
        let trace = 4i64.pow(4) + 4;
        assert_eq!(c.hom_count, trace.to_string());
        assert_eq!(c.p, "1");
        assert_eq!(c.q, "4/5");
        assert_eq!(c.hom_cross_check, Some(true));
        // loops are missing, so t(C4, K5) = 260/625 < p^4
        assert!(!c.floor_holds);
        // K5 is not quasirandom at this scale: the diagonal is empty
        assert!(!c.quasirandom);
    }

    #[test]
    fn integer_search_matches_kernel_cut_norm() {
        for mask in [0b1011_0110_1101u64, 0b1111_0000_1111, 0b1, 0b11_1111_1111_1111] {
            let g = SimpleGraph::from_pair_mask(6, mask);
            let m = g.edge_count() as i64;
            let w = StepKernel::<Rational>::from_graph(&g).unwrap();
            let p = rat(m, 15);
            let (cut, witness) = rectangle_search(&g, m, 15, true);
            assert_eq!(cut, w.shifted(&-p.clone()).cut_norm().value);
            let (over, _) = rectangle_search(&g, 2 * m, 15, false);
            assert_eq!(over, w.shifted(&-(p.clone() + p)).bilinear_max().value);
            // the witness attains the value
            let e: i64 = witness
                .rows
                .iter()
                .flat_map(|&x| witness.cols.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| g.has_edge(x, y))
                .count() as i64;
            let area = (witness.rows.len() * witness.cols.len()) as i64;
            let signed = rat(15 * e - m * area, 15 * 36);
            assert_eq!(if witness.sign > 0 { signed } else { -signed }, cut);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = SimpleGraph::complete(4);
        assert!(matches!(certify_graph(&g, &path(3), &rat(1, 2)), Err(Error::InvalidEpsilon { .. })));
        let big = SimpleGraph::complete(GRAPH_NODE_CAP + 1);
        assert!(matches!(certify_graph(&big, &path(3), &pow2(-30)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn density_matches_hom_over_power() {
        let g = SimpleGraph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let f = path(4);
        let c = certify_graph(&g, &f, &pow2(-40)).unwrap();
        let t = parse_rational(&c.density).unwrap();
        let hom = parse_rational(&c.hom_count).unwrap();
        assert_eq!(t * rat_int(6i64.pow(4)), hom);
    }
}
