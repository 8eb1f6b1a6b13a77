//! Cross-module invariants on random inputs.

use proptest::prelude::*;
use proptest::test_runner::Config;

use sidorenko_local::bigraph::family::{complete_bipartite, cycle, path, star, theta};
use sidorenko_local::density::{cycle_density, density, expansion};
use sidorenko_local::exec::with_threads;
use sidorenko_local::harness::{check_entry, find_entry, CheckConfig};
use sidorenko_local::kernel::{KernelSampler, Partition};
use sidorenko_local::scalar::{parse_rational, pow2, rat, rat_int};
use sidorenko_local::structure::classify_term;
use sidorenko_local::verifier::{build_ledger, verify_variant, Variant, Verdict};
use sidorenko_local::{Bigraph, IsoMode, Rational, Side, StepKernel};

/// Bigraph on `sides.len()` nodes; bit `k` of `mask` toggles the k-th
/// cross pair in lexicographic order.
fn bigraph_from_bits(sides: &[bool], mask: u64) -> Bigraph {
    let n = sides.len();
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if sides[u] != sides[v] {
                if mask >> k & 1 == 1 {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
    }
    let sides = sides.iter().map(|&s| if s { Side::First } else { Side::Second }).collect();
    Bigraph::new(sides, edges, vec![]).unwrap()
}

fn small_bigraph() -> impl Strategy<Value = Bigraph> {
    (prop::collection::vec(any::<bool>(), 2..7), any::<u64>()).prop_map(|(s, m)| bigraph_from_bits(&s, m))
}

fn patterns() -> Vec<Bigraph> {
    vec![
        path(3),
        path(4),
        star(3),
        cycle(4),
        cycle(6),
        complete_bipartite(2, 3),
        theta(&[1, 3]).unwrap(),
        theta(&[2, 2, 2]).unwrap(),
    ]
}

fn sampled(rows: usize, cols: usize, seed: u64) -> StepKernel<Rational> {
    KernelSampler::new(rows, cols).random_measures(true).sample(seed)
}

proptest! {
    #![proptest_config(Config::with_cases(40))]

    #[test]
    fn cut_norm_sandwich(seed in 0u64..100_000, rows in 1usize..4, cols in 1usize..4) {
        let u = sampled(rows, cols, seed);
        let cut = u.cut_norm();
        prop_assert!(cut.exact);
        let c4 = cycle_density(&u, 2).unwrap();
        let fourth = cut.value.clone() * cut.value.clone() * cut.value.clone() * cut.value.clone();
        prop_assert!(fourth <= c4);
        prop_assert!(c4 <= rat_int(4) * cut.value.clone());
        prop_assert!(cut.value.clone() * cut.value.clone() <= u.l2_squared());
        prop_assert!(cut.value <= u.max_abs());
    }

    #[test]
    fn cut_witness_attains_value(seed in 0u64..100_000) {
        let u = sampled(3, 2, seed);
        let cut = u.cut_norm();
        let w = &cut.witness;
        let mut sum = rat_int(0);
        for &i in &w.rows {
            for &j in &w.cols {
                sum += u.row_measures()[i].clone() * u.col_measures()[j].clone() * u.value(i, j).clone();
            }
        }
        let signed = if w.sign < 0 { -sum } else { sum };
        prop_assert_eq!(signed, cut.value);
    }

    #[test]
    fn transpose_invariance(seed in 0u64..100_000, r in 1usize..4) {
        let u = sampled(2, 3, seed);
        let t = u.transpose();
        prop_assert_eq!(t.transpose(), u.clone());
        prop_assert_eq!(t.cut_norm().value, u.cut_norm().value);
        prop_assert_eq!(t.integral(), u.integral());
        prop_assert_eq!(cycle_density(&t, r).unwrap(), cycle_density(&u, r).unwrap());
    }

    #[test]
    fn gram_diagonal_is_l2(seed in 0u64..100_000) {
        let u = sampled(3, 2, seed);
        let v = u.compose(&u.transpose()).unwrap();
        prop_assert!(v.is_symmetric());
        let mut diag = rat_int(0);
        for i in 0..v.row_count() {
            diag += v.row_measures()[i].clone() * v.value(i, i).clone();
        }
        prop_assert_eq!(diag, u.l2_squared());
    }

    #[test]
    fn step_average_projects(seed in 0u64..100_000, classes in 1usize..4, assign in any::<u64>()) {
        let w = KernelSampler::new(3, 2).range(rat_int(0), rat_int(2)).random_measures(true).sample(seed);
        let n = w.atoms().unwrap().len();
        let k = classes.min(n);
        // every class gets its own atom first so none is empty
        let assignment: Vec<usize> =
            (0..n).map(|a| if a < k { a } else { (assign >> (2 * (a % 32)) & 3) as usize % k }).collect();
        let p = Partition::new(assignment).unwrap();
        let avg = w.step_average(&p).unwrap();
        prop_assert_eq!(avg.step_average(&p).unwrap(), avg.clone());
        prop_assert_eq!(avg.integral(), w.integral());
        let (lo, hi) = avg.bounds();
        let (wlo, whi) = w.bounds();
        prop_assert!(lo >= wlo && hi <= whi);
        let u = w.shifted(&rat_int(-1)).on_atoms().unwrap();
        let ua = avg.shifted(&rat_int(-1));
        prop_assert!(ua.cut_norm().value <= u.cut_norm().value);
        prop_assert!(ua.l2_squared() <= u.l2_squared());
    }

    #[test]
    fn relabeling_keeps_canonical_form_and_class(g in small_bigraph(), shift in 0usize..7) {
        let n = g.node_count();
        let perm: Vec<usize> = (0..n).map(|v| (v + shift) % n).collect();
        let h = g.permute_nodes(&perm).unwrap();
        prop_assert_eq!(
            g.canonical_form(IsoMode::SidePreserving).unwrap(),
            h.canonical_form(IsoMode::SidePreserving).unwrap()
        );
        let u = sampled(2, 2, shift as u64);
        prop_assert_eq!(density(&g, &u).unwrap(), density(&h, &u).unwrap());
        if g.degrees().iter().all(|&d| d > 0) {
            prop_assert_eq!(classify_term(&g).unwrap().tag, classify_term(&h).unwrap().tag);
        }
    }

    #[test]
    fn square_has_nonnegative_density(g in small_bigraph(), seed in 0u64..100_000) {
        let u = sampled(2, 2, seed);
        let sq = g.square();
        prop_assert_eq!(sq.edge_count(), 2 * g.edge_count());
        prop_assert!(density(&sq, &u).unwrap() >= rat_int(0));
    }

    #[test]
    fn expansion_multiplicities_and_total(which in 0usize..8, seed in 0u64..100_000) {
        let f = &patterns()[which];
        let u = sampled(2, 3, seed);
        let exp = expansion(f, &u).unwrap();
        let count: u64 = exp.entries.iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(count, 1u64 << f.edge_count());
        prop_assert_eq!(exp.total, density(f, &u.shifted(&rat_int(1))).unwrap());
    }

    #[test]
    fn ledger_is_consistent(which in 0usize..8, seed in 0u64..100_000) {
        let f = &patterns()[which];
        let u = KernelSampler::new(2, 2).mean_zero(true).random_measures(true).sample(seed);
        let w = u.shifted(&rat_int(1));
        let t = density(f, &w).unwrap();
        let (ledger, total) = build_ledger(f, &u, &t).unwrap();
        prop_assert!(ledger.consistent);
        prop_assert_eq!(total, t);
    }
}

proptest! {
    #![proptest_config(Config::with_cases(24))]

    /// Whenever the small-sup-norm hypotheses hold, the verdict is positive
    /// and the exact density is at least one.
    #[test]
    fn sup_norm_hypotheses_imply_floor(which in 0usize..8, seed in 0u64..100_000, rows in 1usize..4) {
        let f = &patterns()[which];
        let m = f.edge_count() as i64;
        let half = rat(1, 8 * m);
        let u = KernelSampler::new(rows, 3)
            .range(-half.clone(), half)
            .mean_zero(true)
            .random_measures(true)
            .sample(seed);
        let w = u.shifted(&rat_int(1));
        let cert = verify_variant(f, &w, &Variant::Infty).unwrap();
        prop_assert!(cert.hypotheses_hold);
        prop_assert!(cert.verdict.is_positive());
        let t = parse_rational(&cert.density).unwrap();
        prop_assert!(t >= rat_int(1));
        prop_assert_eq!(t, density(f, &w).unwrap());
    }

    /// Close kernels: tiny perturbations of the constant kernel.
    #[test]
    fn close_hypotheses_imply_floor(which in 0usize..6, seed in 0u64..100_000) {
        let f = &patterns()[which];
        let m = f.edge_count() as i64;
        let u = KernelSampler::new(2, 2).mean_zero(true).random_measures(true).sample(seed);
        let cut = u.cut_norm().value;
        prop_assume!(cut > rat_int(0));
        let delta = pow2(-8 * m) / cut;
        let w = u.scaled(&delta).shifted(&rat_int(1));
        let cert = verify_variant(f, &w, &Variant::Close).unwrap();
        prop_assert!(cert.hypotheses_hold);
        prop_assert!(matches!(cert.verdict, Verdict::Certified | Verdict::BoundChainFailedButExactTotalOk));
        prop_assert!(parse_rational(&cert.density).unwrap() >= rat_int(1));
    }
}

#[test]
fn harness_is_deterministic_across_thread_counts() {
    let config = CheckConfig { trials: 12, seed: 7, tol: 1e-9, max_blocks: 4, adversarial: true };
    for id in ["MON", "CYCLE", "4CYCLE", "C-H", "SUBDIV"] {
        let entry = find_entry(id).unwrap();
        let a = serde_json::to_string(&with_threads(1, || check_entry(&entry, &config)).unwrap()).unwrap();
        let b = serde_json::to_string(&check_entry(&entry, &config).unwrap()).unwrap();
        let c = serde_json::to_string(&check_entry(&entry, &config).unwrap()).unwrap();
        assert_eq!(a, b, "{id}");
        assert_eq!(b, c, "{id}");
    }
}
