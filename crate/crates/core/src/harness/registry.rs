//! Built-in catalogue of density inequalities.
//!
//! Kernels are not assumed symmetric, so a graph and its transpose can have
//! different densities. Where a bound involves an odd path or a `K_{2,d}`,
//! the orientation is the one produced by the gluing argument behind the
//! bound; when that argument produces both orientations, the bound uses
//! their geometric mean.

use serde::Serialize;

use super::expr::DensityExpr;
use crate::bigraph::family::*;
use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};
use crate::scalar::{rat, rat_int};
use crate::structure::find_hanging_path_system;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryStatus {
    /// Stated as proved.
    Paper,
    /// A repaired form of a misprinted statement.
    Corrected,
    /// A literal statement believed to be misprinted; expected to fail.
    ErratumSuspect,
}

/// Sampling domain of the kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// Values in `[-1, 1]`.
    W1,
    /// Arbitrary bounded kernels, sampled from `[-3, 3]`.
    Unbounded,
}

/// `lhs <= rhs`. Labeled graphs are evaluated as rooted densities at every
/// anchor combination.
#[derive(Clone, Debug)]
pub struct Clause {
    pub name: String,
    pub lhs: DensityExpr,
    pub rhs: DensityExpr,
}

/// Multigraph with one function per node, for the edge-weight bound.
#[derive(Clone, Debug)]
pub struct WeightGraph {
    pub name: String,
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub enum Check {
    Clauses(Vec<Clause>),
    /// `tr(G, f) <= Π_i ‖f_i‖_2` on random node functions.
    EdgeWeight(Vec<WeightGraph>),
}

#[derive(Clone, Debug)]
pub struct InequalityEntry {
    pub id: String,
    pub citation: String,
    pub status: EntryStatus,
    pub domain: Domain,
    pub check: Check,
}

impl InequalityEntry {
    pub fn expected_pass(&self) -> bool {
        self.status != EntryStatus::ErratumSuspect
    }

    pub fn clauses(&self) -> &[Clause] {
        match &self.check {
            Check::Clauses(c) => c,
            Check::EdgeWeight(_) => &[],
        }
    }
}

fn t(g: Bigraph, name: impl Into<String>) -> DensityExpr {
    DensityExpr::t(g, name)
}

fn cyc(n: usize) -> DensityExpr {
    t(cycle(n), format!("C{n}"))
}

fn le(name: impl Into<String>, lhs: DensityExpr, rhs: DensityExpr) -> Clause {
    Clause { name: name.into(), lhs, rhs }
}

fn product(factors: impl IntoIterator<Item = DensityExpr>) -> DensityExpr {
    factors.into_iter().fold(DensityExpr::constant(rat_int(1)), |a, b| a * b)
}

/// `P_3` whose middle node lies on `side`.
pub fn p3_centered(side: Side) -> Bigraph {
    match side {
        Side::Second => path(3),
        Side::First => path(3).transpose(),
    }
}

fn p3_expr(side: Side) -> DensityExpr {
    match side {
        Side::Second => t(p3_centered(side), "P3"),
        Side::First => t(p3_centered(side), "P3^T"),
    }
}

/// `K_{2,d}` with the two-node class on `side`.
fn k2d(d: usize, side: Side) -> DensityExpr {
    match side {
        Side::First => t(complete_bipartite(2, d), format!("K2,{d}")),
        Side::Second => t(complete_bipartite(2, d).transpose(), format!("K2,{d}^T")),
    }
}

/// `t(G)^{1/2} t(Gᵀ)^{1/2}`, or `t(G)` when both orientations agree.
fn both_ways(a: DensityExpr, b: DensityExpr) -> DensityExpr {
    if a == b {
        a
    } else {
        a.pow(rat(1, 2)) * b.pow(rat(1, 2))
    }
}

/// Two nonadjacent endnodes, preferring ones with different neighbors.
pub fn endnode_pair(f: &Bigraph) -> Option<(usize, usize)> {
    let s = f.structure();
    let adj = f.adjacency();
    let pairs: Vec<(usize, usize)> = s
        .endnodes
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| s.endnodes[i + 1..].iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| adj[u][0] != v)
        .collect();
    pairs
        .iter()
        .copied()
        .find(|&(u, v)| adj[u][0] != adj[v][0])
        .or_else(|| pairs.first().copied())
}

/// The `P_3` factor for a term with two nonadjacent endnodes `u, v`: the
/// product of the square roots of the paths centered at their neighbors.
pub fn two_end_p3(f: &Bigraph) -> Option<DensityExpr> {
    let (u, v) = endnode_pair(f)?;
    let adj = f.adjacency();
    Some(both_ways(p3_expr(f.side(adj[u][0])), p3_expr(f.side(adj[v][0]))))
}

/// The `P_3` factor for a term with exactly one endnode: centered at the
/// endnode's neighbor.
pub fn one_end_p3(f: &Bigraph) -> Option<DensityExpr> {
    let s = f.structure();
    if s.endnodes.len() != 1 {
        return None;
    }
    let w = f.adjacency()[s.endnodes[0]][0];
    Some(p3_expr(f.side(w)))
}

/// Largest set of pairwise nonadjacent nodes of degree at least two in
/// which no node of `f` has more than two neighbors; ties go to the
/// lexicographically first set.
fn spread_independent_set(f: &Bigraph) -> Vec<usize> {
    let n = f.node_count();
    let mult = f.multiplicity_matrix();
    let deg = f.degrees();
    let mut best: Vec<usize> = Vec::new();
    for mask in 1u32..1 << n {
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if set.len() <= best.len() || set.iter().any(|&v| deg[v] < 2) {
            continue;
        }
        let independent = set.iter().all(|&a| set.iter().all(|&b| mult[a][b] == 0));
        let spread = (0..n).all(|w| set.iter().filter(|&&v| mult[w][v] > 0).count() <= 2);
        if independent && spread {
            best = set;
        }
    }
    best
}

fn girth_of(f: &Bigraph) -> usize {
    f.structure().girth.finite().expect("graph has a cycle")
}

fn glued_path(a_edges: usize, b_edges: usize) -> Bigraph {
    labeled_path(a_edges + 1).star_product(&labeled_path(b_edges + 1)).expect("same label side")
}

fn mon() -> InequalityEntry {
    let mut c = Vec::new();
    for k in 1..4 {
        c.push(le(format!("C{} <= C{}", 2 * k + 2, 2 * k), cyc(2 * k + 2), cyc(2 * k)));
    }
    c.push(le("0 <= C8", DensityExpr::zero(), cyc(8)));
    InequalityEntry {
        id: "MON".into(),
        citation: "even cycle densities are nonnegative and decrease: C2 >= C4 >= C6 >= C8 >= 0".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn mon_logconvex() -> InequalityEntry {
    let mut c = Vec::new();
    for a in 1..=4usize {
        for b in a..=4 {
            if (a + b) % 2 == 0 {
                c.push(le(
                    format!("C{}^2 <= C{} C{}", a + b, 2 * a, 2 * b),
                    cyc(a + b).powi(2),
                    cyc(2 * a) * cyc(2 * b),
                ));
            }
        }
    }
    InequalityEntry {
        id: "MON-LOGCONVEX".into(),
        citation: "log-convexity of cycle densities: t(C_{a+b})^2 <= t(C_{2a}) t(C_{2b})".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn gcs() -> InequalityEntry {
    let tuples: [&[usize]; 9] =
        [&[1, 1], &[1, 3], &[2, 2], &[1, 1, 2], &[2, 4], &[1, 2, 3], &[3, 3], &[1, 1, 1, 1], &[2, 2, 2]];
    let c = tuples
        .iter()
        .map(|rs| {
            let r: usize = rs.iter().sum();
            let names: Vec<String> = rs.iter().map(|x| format!("C{}", 2 * x)).collect();
            le(format!("C{r}^2 <= {}", names.join(" ")), cyc(r).powi(2), product(rs.iter().map(|&x| cyc(2 * x))))
        })
        .collect();
    InequalityEntry {
        id: "GCS".into(),
        citation: "C_r^2 <= C_{2 r_1} ... C_{2 r_k} for r = r_1 + ... + r_k".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn cycle0() -> InequalityEntry {
    let c = (1..=4)
        .map(|k| {
            le(
                format!("C{} <= C{} C4^(1/2)", 2 * k + 2, 2 * k),
                cyc(2 * k + 2),
                cyc(2 * k) * cyc(4).pow(rat(1, 2)),
            )
        })
        .collect();
    InequalityEntry {
        id: "CYCLE0".into(),
        citation: "C_{2k+2} <= C_{2k} C_4^{1/2}".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn cycle_products() -> InequalityEntry {
    let cases: [(usize, usize, &[usize]); 9] = [
        (3, 1, &[2, 2]),
        (4, 1, &[2, 3]),
        (4, 1, &[2, 2, 2]),
        (3, 2, &[3, 3]),
        (3, 2, &[2, 2, 2, 2]),
        (3, 2, &[2, 2, 3]),
        (2, 2, &[2, 2, 1]),
        (4, 2, &[4, 4]),
        (4, 2, &[3, 3, 2, 2]),
    ];
    let c = cases
        .iter()
        .map(|&(r, k, rs)| {
            assert_eq!(rs.iter().map(|x| x - 1).sum::<usize>(), k * (r - 1));
            let names: Vec<String> = rs.iter().map(|x| format!("C{}", 2 * x)).collect();
            le(
                format!("{} <= C{}^{k}", names.join(" "), 2 * r),
                product(rs.iter().map(|&x| cyc(2 * x))),
                cyc(2 * r).powi(k as i64),
            )
        })
        .collect();
    InequalityEntry {
        id: "CYCLE".into(),
        citation: "prod_i C_{2 r_i} <= C_{2r}^k when 1 <= r_i <= r and sum (r_i - 1) = k (r - 1)".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn four_cycle() -> InequalityEntry {
    let mut c = Vec::new();
    for k in 2..=5usize {
        c.push(le(format!("C4^{} <= C{}", k - 1, 2 * k), cyc(4).powi(k as i64 - 1), cyc(2 * k)));
        c.push(le(format!("C{} <= C4^({k}/2)", 2 * k), cyc(2 * k), cyc(4).pow(rat(k as i64, 2))));
    }
    InequalityEntry {
        id: "4CYCLE".into(),
        citation: "C_4^{k-1} <= C_{2k} <= C_4^{k/2}".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn paths_a() -> InequalityEntry {
    let mut c = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            let lhs = t(glued_path(a, b), format!("P{}", a + b + 1));
            let pa = t(glued_path(a, a), format!("P{}", 2 * a + 1));
            let pb = t(glued_path(b, b), format!("P{}", 2 * b + 1));
            c.push(le(
                format!("P{} <= P{}^(1/2) P{}^(1/2) (a={a}, b={b})", a + b + 1, 2 * a + 1, 2 * b + 1),
                lhs,
                pa.pow(rat(1, 2)) * pb.pow(rat(1, 2)),
            ));
        }
    }
    InequalityEntry {
        id: "PATHS-A".into(),
        citation: "P_{a+b+1} <= P_{2a+1}^{1/2} P_{2b+1}^{1/2}, paths glued at a common node".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

/// `P_{2a+1}` centered on the side of the nodes at distance `b` from the
/// center of `glued_path(a + b, a + b)`.
fn cut_piece_square(a: usize, b: usize) -> Bigraph {
    if b.is_multiple_of(2) {
        glued_path(a, a)
    } else {
        glued_path(a, a).transpose()
    }
}

fn paths_b() -> InequalityEntry {
    let mut c = Vec::new();
    for a in 1..=3 {
        for b in 1..=2 {
            c.push(le(
                format!("P{} <= P{} C{}^(1/4) (a={a}, b={b})", 2 * a + b + 1, 2 * a + 1, 4 * b),
                t(glued_path(a, a + b), format!("P{}", 2 * a + b + 1)),
                both_ways(
                    t(glued_path(a, a), format!("P{}", 2 * a + 1)),
                    t(cut_piece_square(a, b), format!("P{}{}", 2 * a + 1, if b % 2 == 1 { "^T" } else { "" })),
                ) * cyc(4 * b).pow(rat(1, 4)),
            ));
        }
    }
    InequalityEntry {
        id: "PATHS-B".into(),
        citation: "P_{2a+b+1} <= P_{2a+1} C_{4b}^{1/4}".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn mon2() -> InequalityEntry {
    let k = |h: usize, n: usize| t(complete_bipartite(h, n), format!("K{h},{n}"));
    let mut c = Vec::new();
    for h in 1..=3 {
        for j in 1..=2 {
            c.push(le(format!("K{h},{} <= K{h},{}", 2 * j + 2, 2 * j), k(h, 2 * j + 2), k(h, 2 * j)));
        }
        c.push(le(format!("0 <= K{h},6"), DensityExpr::zero(), k(h, 6)));
        for a in 1..=3 {
            for b in a..=3 {
                c.push(le(
                    format!("K{h},{}^2 <= K{h},{} K{h},{}", a + b, 2 * a, 2 * b),
                    k(h, a + b).powi(2),
                    k(h, 2 * a) * k(h, 2 * b),
                ));
            }
        }
    }
    InequalityEntry {
        id: "MON2".into(),
        citation: "t(K_{h,2k}) is nonnegative and decreasing in k, with t(K_{h,a+b})^2 <= t(K_{h,2a}) t(K_{h,2b})"
            .into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn knn() -> InequalityEntry {
    let c = (3..=4)
        .map(|n| {
            le(
                format!("K{n},{n} <= K2,{n} C2^(1/2)"),
                t(complete_bipartite(n, n), format!("K{n},{n}")),
                both_ways(k2d(n, Side::First), k2d(n, Side::Second)) * cyc(2).pow(rat(1, 2)),
            )
        })
        .collect();
    InequalityEntry {
        id: "KNN".into(),
        citation: "K_{n,n} <= K_{2,n} C_2^{1/2} for n >= 3 (K_{2,n} in both orientations)".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn c4fix() -> InequalityEntry {
    let mut c = Vec::new();
    for r in 2..=4 {
        for (g, tag) in [(rooted_cycle(2 * r), ""), (rooted_cycle(2 * r).transpose(), "^T")] {
            let rooted = t(g, format!("C'{}{tag}", 2 * r));
            c.push(le(format!("0 <= C'{}{tag}", 2 * r), DensityExpr::zero(), rooted.clone()));
            c.push(le(
                format!("C'{}{tag} <= C{}^(1/2)", 2 * r, 4 * r - 4),
                rooted,
                cyc(4 * r - 4).pow(rat(1, 2)),
            ));
        }
    }
    InequalityEntry {
        id: "C4FIX".into(),
        citation: "0 <= t_x(C'_{2r}) <= t(C_{4r-4})^{1/2} at every anchor x".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn p3fix() -> InequalityEntry {
    let mut c = Vec::new();
    for k in 4..=6 {
        for (g, tag) in [(doubly_labeled_path(k), ""), (doubly_labeled_path(k).transpose(), "^T")] {
            c.push(le(
                format!("|P''{k}{tag}| <= C{}^(1/4)", 4 * k - 12),
                t(g, format!("P''{k}{tag}")).abs(),
                cyc(4 * k - 12).pow(rat(1, 4)),
            ));
        }
    }
    InequalityEntry {
        id: "P3FIX".into(),
        citation: "|t_xy(P''_k)| <= t(C_{4k-12})^{1/4} at every anchor pair, k >= 4".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn cauchy_pairs() -> Vec<(Bigraph, &'static str, Bigraph, &'static str)> {
    vec![
        (labeled_path(2), "P'2", labeled_path(3), "P'3"),
        (labeled_path(3), "P'3", labeled_path(4), "P'4"),
        (rooted_cycle(4), "C'4", labeled_path(3), "P'3"),
        (labeled_complete_bipartite(2, 1), "K'2,1", labeled_complete_bipartite(2, 2), "K'2,2"),
        (doubly_labeled_path(3), "P''3", doubly_labeled_path(5), "P''5"),
        (doubly_labeled_path(2), "P''2", doubly_labeled_path(4), "P''4"),
    ]
}

fn cauchy() -> InequalityEntry {
    let c = cauchy_pairs()
        .into_iter()
        .map(|(a, an, b, bn)| {
            let glued = a.star_product(&b).expect("library pairs glue");
            le(
                format!("({an}*{bn})^2 <= {an}^2 {bn}^2"),
                t(glued, format!("{an}*{bn}")).powi(2),
                t(a.square(), format!("{an}^*2")) * t(b.square(), format!("{bn}^*2")),
            )
        })
        .collect();
    InequalityEntry {
        id: "C-H".into(),
        citation: "t(F1*F2)^2 <= t(F1^*2) t(F2^*2) for k-labeled F1, F2 and any bounded U".into(),
        status: EntryStatus::Paper,
        domain: Domain::Unbounded,
        check: Check::Clauses(c),
    }
}

fn positivity() -> InequalityEntry {
    let lib = [
        (labeled_path(3), "P'3"),
        (labeled_path(4), "P'4"),
        (doubly_labeled_path(4), "P''4"),
        (doubly_labeled_path(5), "P''5"),
        (labeled_complete_bipartite(2, 3), "K'2,3"),
        (rooted_cycle(6), "C'6"),
    ];
    let c = lib
        .into_iter()
        .map(|(g, n)| le(format!("0 <= {n}^*2"), DensityExpr::zero(), t(g.square(), format!("{n}^*2"))))
        .collect();
    InequalityEntry {
        id: "POS".into(),
        citation: "F^*2 >= 0 for every k-labeled F and any bounded U".into(),
        status: EntryStatus::Paper,
        domain: Domain::Unbounded,
        check: Check::Clauses(c),
    }
}

fn indep1_graphs() -> Vec<(Bigraph, &'static str)> {
    vec![
        (path(5), "P5"),
        (path(6), "P6"),
        (cycle(6), "C6"),
        (complete_bipartite(2, 3), "K2,3"),
        (star(3).subdivide(), "sbd(K1,3)"),
        (with_pendant(&cycle(4), 0), "C4+pendant"),
    ]
}

fn indep1() -> InequalityEntry {
    let c = indep1_graphs()
        .into_iter()
        .map(|(g, n)| le(format!("{n} <= C4"), t(g, n), cyc(4)))
        .collect();
    InequalityEntry {
        id: "INDEP1".into(),
        citation: "F <= C_4 when F has two nonadjacent nodes of degree at least 2".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn indep() -> InequalityEntry {
    let graphs = [
        (cycle(6), "C6"),
        (cycle(8), "C8"),
        (complete_bipartite(2, 3), "K2,3"),
        (path(6), "P6"),
        (prism(4).unwrap(), "Q3"),
        (theta(&[3, 3, 3]).unwrap(), "theta(3,3,3)"),
    ];
    let mut c = Vec::new();
    for (g, n) in graphs {
        let set = spread_independent_set(&g);
        let bound = product(set.iter().map(|&v| k2d(g.degree(v), g.side(v))));
        c.push(le(format!("{n}^2 <= prod K2,d"), t(g.clone(), n).powi(2), bound.clone()));
        c.push(le(format!("prod K2,d <= C4^{} ({n})", set.len()), bound, cyc(4).powi(set.len() as i64)));
    }
    InequalityEntry {
        id: "INDEP".into(),
        citation: "F^2 <= prod_i K_{2,d_i} <= C_4^k for independent nodes with no common neighbor of three".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn hanging() -> InequalityEntry {
    let graphs = [
        (theta(&[3, 3, 3]).unwrap(), "theta(3,3,3)"),
        (complete_bipartite(3, 3).subdivide(), "sbd(K3,3)"),
        (cycle(8), "C8"),
        (path(6), "P6"),
        (complete_bipartite(2, 3), "K2,3"),
        (with_pendant(&cycle(6), 0), "C6+pendant"),
        (theta(&[2, 4, 4]).unwrap(), "theta(2,4,4)"),
    ];
    let c = graphs
        .into_iter()
        .map(|(g, n)| {
            let h = find_hanging_path_system(&g, g.node_count()).expect("graphs are below the search cap");
            let names: Vec<String> = h.lengths().iter().map(|r| format!("C{}", 2 * r)).collect();
            le(
                format!("{n}^2 <= {}", names.join(" ")),
                t(g, n).powi(2),
                product(h.lengths().into_iter().map(|r| cyc(2 * r))),
            )
        })
        .collect();
    InequalityEntry {
        id: "HANGING".into(),
        citation: "F^2 <= prod_i C_{2 r_i} for a hanging path system of lengths r_1..r_m".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn hang_bound() -> InequalityEntry {
    let graphs = [
        (theta(&[3, 3, 3]).unwrap(), "theta(3,3,3)"),
        (cycle(8), "C8"),
        (path(6), "P6"),
        (complete_bipartite(2, 3), "K2,3"),
        (theta(&[2, 4, 4]).unwrap(), "theta(2,4,4)"),
        (complete_bipartite(3, 3).subdivide(), "sbd(K3,3)"),
    ];
    let mut c = Vec::new();
    for (g, n) in graphs {
        for r in 2..=g.node_count() / 2 {
            let h = find_hanging_path_system(&g, r).expect("graphs are below the search cap");
            let a = h.value as i64 - 2 * r as i64 + 2;
            if a < 0 {
                continue;
            }
            c.push(le(
                format!("{n} <= C{} C4^({a}/2)", 2 * r),
                t(g.clone(), n),
                cyc(2 * r) * cyc(4).pow(rat(a, 2)),
            ));
        }
    }
    InequalityEntry {
        id: "HANG-BOUND".into(),
        citation: "F <= C_{2r} C_4^{a/2} for a hanging path system of lengths 2..r and value 2r + a - 2".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn erase() -> InequalityEntry {
    let cases: [(Bigraph, &str, &[usize]); 5] = [
        (cycle(6), "C6", &[0, 1]),
        (complete_bipartite(2, 3), "K2,3", &[0, 1]),
        (path(5), "P5", &[1, 2]),
        (prism(4).unwrap(), "Q3", &[0, 1, 2, 3]),
        (theta(&[3, 3, 3]).unwrap(), "theta(3,3,3)", &[0, 1]),
    ];
    let c = cases
        .into_iter()
        .map(|(g, n, s)| {
            let inside: Vec<usize> = (0..g.edge_count())
                .filter(|&i| s.contains(&g.edges()[i].0) && s.contains(&g.edges()[i].1))
                .collect();
            let f0 = g.without_edges(&inside).with_labels(s.to_vec()).expect("labels are nodes");
            le(
                format!("{n} <= ({n}_0^*2)^(1/2) over {s:?}"),
                t(g.clone(), n),
                t(f0.square(), format!("{n}_0^*2")).pow(rat(1, 2)),
            )
        })
        .collect();
    InequalityEntry {
        id: "ERASE".into(),
        citation: "F <= (F_0^*2)^{1/2}, F_0 = F with the edges inside S removed and S labeled".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

/// Graphs with minimum degree two that are neither a cycle nor complete
/// bipartite.
pub fn main_lemma_graphs() -> Vec<(Bigraph, &'static str)> {
    let k33_minus = complete_bipartite(3, 3).without_edges(&[0]);
    vec![
        (theta(&[3, 3, 3]).unwrap(), "theta(3,3,3)"),
        (complete_bipartite(3, 3).subdivide(), "sbd(K3,3)"),
        (prism(4).unwrap(), "Q3"),
        (prism(6).unwrap(), "prism(6)"),
        (theta(&[3, 3, 5]).unwrap(), "theta(3,3,5)"),
        (theta(&[5, 5, 5]).unwrap(), "theta(5,5,5)"),
        (k33_minus, "K3,3-e"),
    ]
}

fn main_lemma() -> InequalityEntry {
    let c = main_lemma_graphs()
        .into_iter()
        .map(|(g, n)| {
            let r = girth_of(&g);
            le(format!("{n} <= C{r} C4^(1/4)"), t(g, n), cyc(r) * cyc(4).pow(rat(1, 4)))
        })
        .collect();
    InequalityEntry {
        id: "MAIN".into(),
        citation: "F <= C_{2r} C_4^{1/4} for F of girth 2r with all degrees >= 2, not a cycle or complete bipartite"
            .into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn two_end() -> InequalityEntry {
    let spider = Bigraph::from_bipartite_edges(6, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
    let broom = Bigraph::from_bipartite_edges(6, &[(0, 1), (0, 2), (2, 3), (3, 4), (3, 5)]).unwrap();
    let graphs = [
        (path(4), "P4"),
        (path(5), "P5"),
        (path(6), "P6"),
        (spider, "spider(1,2,2)"),
        (broom, "double-broom"),
        (with_pendant(&with_pendant(&cycle(4), 0), 2), "C4+2 pendants (opposite)"),
        (with_pendant(&with_pendant(&cycle(4), 0), 1), "C4+2 pendants (adjacent)"),
        (with_pendant(&with_pendant(&cycle(4), 0), 0), "C4+2 pendants (same node)"),
    ];
    let c = graphs
        .into_iter()
        .map(|(g, n)| {
            let p3 = two_end_p3(&g).expect("graph has two nonadjacent endnodes");
            le(format!("{n} <= P3 C4^(1/4)"), t(g, n), p3 * cyc(4).pow(rat(1, 4)))
        })
        .collect();
    InequalityEntry {
        id: "2END".into(),
        citation: "F <= P_3 C_4^{1/4} for F with two nonadjacent endnodes, not a star, at least 3 edges".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn one_end() -> InequalityEntry {
    let graphs = [
        (with_pendant(&cycle(4), 0), "C4+pendant"),
        (with_pendant(&cycle(6), 1), "C6+pendant"),
        (with_pendant(&complete_bipartite(2, 3), 0), "K2,3+pendant"),
        (with_pendant(&theta(&[3, 3, 3]).unwrap(), 0), "theta(3,3,3)+pendant"),
        (with_pendant(&prism(4).unwrap(), 0), "Q3+pendant"),
    ];
    let c = graphs
        .into_iter()
        .map(|(g, n)| {
            let r = girth_of(&g);
            let p3 = one_end_p3(&g).expect("exactly one endnode");
            le(
                format!("{n} <= 1/2 (C{r} + P3) C4^(1/8)"),
                t(g, n),
                (cyc(r) + p3).scale(rat(1, 2)) * cyc(4).pow(rat(1, 8)),
            )
        })
        .collect();
    InequalityEntry {
        id: "ONE-END".into(),
        citation: "F <= 1/2 (C_{2r} + P_3) C_4^{1/8} for F with exactly one endnode and girth 2r".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn edge_weight() -> InequalityEntry {
    let g = |name: &str, nodes: usize, edges: &[(usize, usize)]| WeightGraph {
        name: name.into(),
        nodes,
        edges: edges.to_vec(),
    };
    InequalityEntry {
        id: "EDGE-WEIGHT".into(),
        citation: "tr(G, f) <= prod_i ||f_i||_2 when each f_i depends on the edges at node i".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::EdgeWeight(vec![
            g("path3", 3, &[(0, 1), (1, 2)]),
            g("triangle", 3, &[(0, 1), (1, 2), (2, 0)]),
            g("C5", 5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
            g("K4", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            g("triangle+double edge", 3, &[(0, 1), (0, 1), (1, 2), (2, 0)]),
        ]),
    }
}

fn triv() -> InequalityEntry {
    let mut c = vec![
        le("|C6| <= C4", cyc(6).abs(), cyc(4)),
        le("|C8| <= C6", cyc(8).abs(), cyc(6)),
    ];
    for (g, n) in indep1_graphs() {
        c.push(le(format!("|{n}| <= C4"), t(g, n).abs(), cyc(4)));
    }
    InequalityEntry {
        id: "TRIV".into(),
        citation: "F <= G for nonisomorphic F, G without isolated nodes implies |t(F)| <= t(G)".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

/// Every clause of the given entries with all graphs subdivided.
fn subdivided(base: &[InequalityEntry]) -> InequalityEntry {
    let mut c = Vec::new();
    for e in base {
        for cl in e.clauses() {
            let sbd = |g: &Bigraph, n: &str| (g.subdivide(), format!("sbd({n})"));
            c.push(le(format!("sbd: {}", cl.name), cl.lhs.map_graphs(&sbd), cl.rhs.map_graphs(&sbd)));
        }
    }
    InequalityEntry {
        id: "SUBDIV".into(),
        citation: "F <= G implies sbd(F) <= sbd(G)".into(),
        status: EntryStatus::Paper,
        domain: Domain::W1,
        check: Check::Clauses(c),
    }
}

fn cut_sandwich() -> Vec<InequalityEntry> {
    let cut = DensityExpr::cut_norm;
    vec![
        InequalityEntry {
            id: "C4-LOWER".into(),
            citation: "||U||_cut^4 <= t(C_4, U)".into(),
            status: EntryStatus::Paper,
            domain: Domain::W1,
            check: Check::Clauses(vec![le("cut^4 <= C4", cut().powi(4), cyc(4))]),
        },
        InequalityEntry {
            id: "C4-UPPER-CORRECTED".into(),
            citation: "t(C_4, U) <= 4 ||U||_cut".into(),
            status: EntryStatus::Corrected,
            domain: Domain::W1,
            check: Check::Clauses(vec![le("C4 <= 4 cut", cyc(4), cut().scale(rat_int(4)))]),
        },
        InequalityEntry {
            id: "C4-UPPER-LITERAL".into(),
            citation: "t(C_4, U) <= ||U||_cut, as printed".into(),
            status: EntryStatus::ErratumSuspect,
            domain: Domain::W1,
            check: Check::Clauses(vec![le("C4 <= cut", cyc(4), cut())]),
        },
    ]
}

/// The full catalogue, in a fixed order.
pub fn builtin_registry() -> Vec<InequalityEntry> {
    let base_for_subdivision = [mon(), cycle0(), knn(), indep1()];
    let mut out = vec![
        mon(),
        mon_logconvex(),
        gcs(),
        cycle0(),
        cycle_products(),
        four_cycle(),
        paths_a(),
        paths_b(),
        mon2(),
        knn(),
        c4fix(),
        p3fix(),
        cauchy(),
        positivity(),
        subdivided(&base_for_subdivision),
        indep1(),
        indep(),
        hanging(),
        hang_bound(),
        erase(),
        main_lemma(),
        two_end(),
        one_end(),
        edge_weight(),
        triv(),
    ];
    out.extend(cut_sandwich());
    out
}

/// Looks up an entry by id, ignoring case.
pub fn find_entry(id: &str) -> Result<InequalityEntry> {
    builtin_registry()
        .into_iter()
        .find(|e| e.id.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownEntry(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let r = builtin_registry();
        assert!(r.len() >= 24);
        let paper = r.iter().filter(|e| e.status == EntryStatus::Paper).count();
        assert!(paper >= 24, "{paper}");
        let mut ids: Vec<&str> = r.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), r.len());
        for e in &r {
            assert!(!e.citation.is_empty());
            match &e.check {
                Check::Clauses(c) => assert!(!c.is_empty(), "{}", e.id),
                Check::EdgeWeight(g) => assert!(!g.is_empty()),
            }
        }
        assert!(find_entry("mon").is_ok());
        assert!(find_entry("nope").is_err());
    }

    #[test]
    fn glued_paths_are_paths() {
        use crate::bigraph::IsoMode;
        for a in 1..4 {
            for b in 1..4 {
                let g = glued_path(a, b);
                assert!(g.is_isomorphic(&path(a + b + 1), IsoMode::SideSwapping).unwrap());
            }
        }
    }

    #[test]
    fn spread_sets() {
        assert_eq!(spread_independent_set(&cycle(6)).len(), 3);
        assert_eq!(spread_independent_set(&complete_bipartite(2, 3)).len(), 2);
        assert_eq!(spread_independent_set(&path(6)), vec![1, 3]);
        let s = spread_independent_set(&prism(4).unwrap());
        assert!(s.len() >= 2);
    }

    #[test]
    fn endnode_choices() {
        assert_eq!(endnode_pair(&path(4)), Some((0, 3)));
        assert_eq!(endnode_pair(&edge()), None);
        let p3 = two_end_p3(&path(5)).unwrap();
        assert_eq!(p3.to_string(), "t(P3)");
        let p4 = two_end_p3(&path(4)).unwrap();
        assert_eq!(p4.to_string(), "t(P3)^(1/2) t(P3^T)^(1/2)");
        assert_eq!(one_end_p3(&with_pendant(&cycle(4), 1)).unwrap().to_string(), "t(P3)");
        assert_eq!(one_end_p3(&with_pendant(&cycle(4), 0)).unwrap().to_string(), "t(P3^T)");
    }
}
