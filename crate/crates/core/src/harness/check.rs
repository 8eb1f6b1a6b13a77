//! Randomized checking of registry entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::{Atom, DensityExpr, ExprValue};
use super::registry::{builtin_registry, Check, Clause, Domain, EntryStatus, InequalityEntry, WeightGraph};
use crate::bigraph::{Bigraph, Side};
use crate::density::{density, density_naive, rooted_density_naive, rooted_table, EdgeFactorModel, RootedTable};
use crate::error::{Error, Result};
use crate::exec;
use crate::graph::SimpleGraph;
use crate::kernel::{corner_kernel, sign_kernel, KernelJson, KernelSampler, StepKernel, ValueMode};
use crate::scalar::{format_rational, rat, rat_int, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    /// Absolute slack for comparisons that are not exact.
    pub tol: f64,
    /// Largest block count of sampled kernels.
    pub max_blocks: usize,
    /// Also test the fixed adversarial kernels.
    pub adversarial: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { trials: 100, seed: 1, tol: 1e-9, max_blocks: 6, adversarial: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub citation: String,
    pub status: EntryStatus,
    pub domain: Domain,
    pub trials: usize,
    /// Number of adversarial kernels tested in addition to the trials.
    pub atoms: usize,
    pub tol: f64,
    /// Minimum of `rhs - lhs` over kernels, clauses and anchors.
    pub worst_margin: f64,
    /// The same margin as an exact rational, when it is one.
    pub worst_margin_exact: Option<String>,
    pub worst_clause: String,
    pub worst_source: String,
    /// Anchor blocks of the worst case, for rooted clauses.
    pub anchors: Vec<usize>,
    /// Kernel of the worst case, attached when the entry fails.
    pub witness: Option<KernelJson>,
    pub passed: bool,
    pub expected_pass: bool,
    /// Whether the brute-force oracle confirms a failure; `None` when the
    /// entry passed or the oracle is out of reach.
    pub revalidated: Option<bool>,
    /// Whether the worst kernel scaled by 1/2 and 1/4 still passes; `None`
    /// for failing or inhomogeneous entries.
    pub homogeneity_ok: Option<bool>,
}

impl EntryReport {
    pub fn matches_expectation(&self) -> bool {
        self.passed == self.expected_pass
    }
}

/// One margin, exact when possible.
#[derive(Clone, Debug)]
struct Margin {
    value: f64,
    exact: Option<Rational>,
}

impl Margin {
    fn from_value<S: Scalar>(v: &ExprValue<S>) -> Margin {
        Margin { value: v.to_f64(), exact: v.exact().and_then(Scalar::to_rational) }
    }

    fn fails(&self, tol: f64) -> bool {
        match &self.exact {
            Some(r) => *r < rat_int(0),
            None => self.value < -tol,
        }
    }
}

#[derive(Clone, Debug)]
struct Worst {
    margin: Margin,
    clause: usize,
    anchors: Vec<usize>,
}

fn min_worst(a: Option<Worst>, b: Worst) -> Option<Worst> {
    match a {
        Some(a) if a.margin.value <= b.margin.value => Some(a),
        _ => Some(b),
    }
}

fn uniform(values: Vec<Vec<i64>>) -> StepKernel<Rational> {
    StepKernel::uniform(values.into_iter().map(|r| r.into_iter().map(rat_int).collect()).collect()).unwrap()
}

fn checkerboard(n: usize) -> StepKernel<Rational> {
    uniform((0..n).map(|i| (0..n).map(|j| if (i + j) % 2 == 0 { 1 } else { -1 }).collect()).collect())
}

fn graph_minus_density(g: &SimpleGraph) -> StepKernel<Rational> {
    let n = g.node_count() as i64;
    let p = rat(2 * g.edge_count() as i64, n * n);
    StepKernel::from_graph(g).unwrap().shifted(&-p)
}

/// Fixed kernels tried before the random ones: the sign kernel first, then
/// other vertex-like kernels, then centered graph kernels.
pub fn adversarial_kernels(domain: Domain) -> Vec<(String, StepKernel<Rational>)> {
    let mut out = vec![
        ("sign".to_string(), sign_kernel()),
        ("corner".to_string(), corner_kernel()),
        ("const(1)".to_string(), StepKernel::constant(rat_int(1))),
        ("const(-1)".to_string(), StepKernel::constant(rat_int(-1))),
        ("const(1/2)".to_string(), StepKernel::constant(rat(1, 2))),
        ("checker(3)".to_string(), checkerboard(3)),
        ("checker(4)".to_string(), checkerboard(4)),
    ];
    let u = [rat_int(1), rat(-1, 2)];
    let v = [rat(1, 2), rat_int(-1)];
    let rank1 = StepKernel::new(
        vec![rat(1, 3), rat(2, 3)],
        vec![rat(1, 4), rat(3, 4)],
        u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect(),
    )
    .unwrap();
    out.push(("rank1(unequal)".to_string(), rank1));
    let graphs = [
        ("K3", SimpleGraph::complete(3)),
        ("C5", SimpleGraph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()),
        ("P4", SimpleGraph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap()),
        ("K1,3", SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap()),
    ];
    for (name, g) in graphs {
        out.push((format!("graph({name})-p"), graph_minus_density(&g)));
    }
    if domain == Domain::Unbounded {
        let three = rat_int(3);
        out.push(("3*sign".to_string(), sign_kernel().scaled(&three)));
        out.push(("3*corner".to_string(), corner_kernel().scaled(&three)));
        out.push(("const(-3)".to_string(), StepKernel::constant(rat_int(-3))));
    }
    out
}

/// The random kernel of trial `trial`, independent of every other trial.
pub fn trial_kernel(domain: Domain, seed: u64, trial: usize, max_blocks: usize) -> StepKernel<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    let rows = rng.gen_range(1..=max_blocks.max(1));
    let symmetric = rng.gen_bool(0.3);
    let cols = if symmetric { rows } else { rng.gen_range(1..=max_blocks.max(1)) };
    let bound = match domain {
        Domain::W1 => 1,
        Domain::Unbounded => 3,
    };
    KernelSampler::new(rows, cols)
        .range(rat_int(-bound), rat_int(bound))
        .symmetric(symmetric)
        .mean_zero(rng.gen_bool(0.3))
        .random_measures(rng.gen_bool(0.5))
        .sample(rng.gen())
}

/// The labeled atoms of a clause must agree on label count and sides.
fn label_sides(clause: &Clause) -> Result<Vec<Side>> {
    let mut sides: Option<Vec<Side>> = None;
    for e in [&clause.lhs, &clause.rhs] {
        for atom in e.atoms() {
            if let Some(g) = atom.graph() {
                if g.label_count() == 0 {
                    continue;
                }
                let s: Vec<Side> = g.labels().iter().map(|&v| g.side(v)).collect();
                match &sides {
                    None => sides = Some(s),
                    Some(prev) if *prev == s => {}
                    Some(_) => {
                        return Err(Error::InvalidGraph(format!(
                            "labeled graphs in clause {:?} disagree on labels",
                            clause.name
                        )))
                    }
                }
            }
        }
    }
    Ok(sides.unwrap_or_default())
}

enum AtomValue<S> {
    Plain(S),
    Rooted(RootedTable<S>),
}

/// Evaluates every atom of a clause once.
fn atom_values<S: Scalar>(
    clause: &Clause,
    u: &StepKernel<S>,
    naive: bool,
) -> Result<Vec<(Atom, AtomValue<S>)>> {
    let mut out: Vec<(Atom, AtomValue<S>)> = Vec::new();
    for e in [&clause.lhs, &clause.rhs] {
        for atom in e.atoms() {
            if out.iter().any(|(a, _)| a == atom) {
                continue;
            }
            let v = match atom {
                Atom::CutNorm => AtomValue::Plain(u.cut_norm().value),
                Atom::Density { graph, .. } if graph.label_count() == 0 => AtomValue::Plain(if naive { density_naive(graph, u)? } else { density(graph, u)? }),
                Atom::Density { graph, .. } => AtomValue::Rooted(if naive { naive_table(graph, u)? } else { rooted_table(graph, u)? }),
            };
            out.push((atom.clone(), v));
        }
    }
    Ok(out)
}

fn naive_table<S: Scalar>(g: &Bigraph, u: &StepKernel<S>) -> Result<RootedTable<S>> {
    let per_label: Vec<Vec<S>> = g
        .labels()
        .iter()
        .map(|&v| match g.side(v) {
            Side::First => u.row_measures().to_vec(),
            Side::Second => u.col_measures().to_vec(),
        })
        .collect();
    let dims: Vec<usize> = per_label.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    let mut values = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut anchors = vec![0; dims.len()];
        for p in (0..dims.len()).rev() {
            anchors[p] = idx % dims[p];
            idx /= dims[p];
        }
        values.push(rooted_density_naive(g, u, &anchors)?);
    }
    Ok(RootedTable { dims, values, measures: per_label })
}

fn anchor_dims<S: Scalar>(sides: &[Side], u: &StepKernel<S>) -> Vec<usize> {
    sides
        .iter()
        .map(|s| match s {
            Side::First => u.row_count(),
            Side::Second => u.col_count(),
        })
        .collect()
}

fn anchor_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    (0..total)
        .map(|mut idx| {
            let mut a = vec![0; dims.len()];
            for p in (0..dims.len()).rev() {
                a[p] = idx % dims[p];
                idx /= dims[p];
            }
            a
        })
        .collect()
}

fn eval_at<S: Scalar>(e: &DensityExpr, values: &[(Atom, AtomValue<S>)], anchors: &[usize]) -> Result<ExprValue<S>> {
    e.evaluate_with(|atom| {
        let (_, v) = values.iter().find(|(a, _)| a == atom).expect("atom was evaluated");
        Ok(match v {
            AtomValue::Plain(x) => x.clone(),
            AtomValue::Rooted(t) => t.get(anchors).clone(),
        })
    })
}

/// Smallest margin of one clause over all anchor combinations.
fn clause_margin<S: Scalar>(
    clause: &Clause,
    u: &StepKernel<S>,
    naive: bool,
) -> Result<(Margin, Vec<usize>)> {
    let sides = label_sides(clause)?;
    let values = atom_values(clause, u, naive)?;
    let mut worst: Option<(Margin, Vec<usize>)> = None;
    for anchors in anchor_tuples(&anchor_dims(&sides, u)) {
        let lhs = eval_at(&clause.lhs, &values, &anchors)?;
        let rhs = eval_at(&clause.rhs, &values, &anchors)?;
        let m = Margin::from_value(&rhs.minus(&lhs));
        if worst.as_ref().is_none_or(|(w, _)| m.value < w.value) {
            worst = Some((m, anchors));
        }
    }
    Ok(worst.expect("at least one anchor tuple"))
}

/// Float sweep over the clauses; clauses whose float margin is within `tol`
/// of failing are recomputed exactly (or in extended precision).
fn margin_of_source(clauses: &[Clause], u: &StepKernel<Rational>, tol: f64) -> Result<Worst> {
    let fast = u.to_f64();
    let mut worst = None;
    for (i, c) in clauses.iter().enumerate() {
        let (mut margin, mut anchors) = clause_margin(c, &fast, false)?;
        if margin.value < tol {
            (margin, anchors) = clause_margin(c, u, false)?;
        }
        worst = min_worst(worst, Worst { margin, clause: i, anchors });
    }
    Ok(worst.expect("entry has clauses"))
}

fn homogeneous(clauses: &[Clause]) -> bool {
    clauses.iter().all(|c| {
        c.lhs.is_zero() || c.rhs.is_zero() || matches!((c.lhs.degree(), c.rhs.degree()), (Some(a), Some(b)) if a == b)
    })
}

fn check_clauses(entry: &InequalityEntry, clauses: &[Clause], config: &CheckConfig) -> Result<EntryReport> {
    let mut sources = if config.adversarial { adversarial_kernels(entry.domain) } else { Vec::new() };
    let atoms = sources.len();
    for trial in 0..config.trials {
        sources.push((
            format!("trial {trial}"),
            trial_kernel(entry.domain, config.seed, trial, config.max_blocks),
        ));
    }
    let results = exec::map_range(sources.len(), |i| margin_of_source(clauses, &sources[i].1, config.tol));
    let mut worst: Option<(usize, Worst)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let w = r?;
        if worst.as_ref().is_none_or(|(_, b)| w.margin.value < b.margin.value) {
            worst = Some((i, w));
        }
    }
    let (src, w) = worst.ok_or_else(|| Error::InvalidModel("no kernels to test".into()))?;
    let passed = !w.margin.fails(config.tol);
    let kernel = &sources[src].1;
    let revalidated = if passed {
        None
    } else {
        match clause_margin(&clauses[w.clause], kernel, true) {
            Ok((m, _)) => Some(m.fails(config.tol)),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    };
    let homogeneity_ok = if passed && homogeneous(clauses) {
        let mut ok = true;
        for c in [rat(1, 2), rat(1, 4)] {
            ok &= !margin_of_source(clauses, &kernel.scaled(&c), config.tol)?.margin.fails(config.tol);
        }
        Some(ok)
    } else {
        None
    };
    Ok(EntryReport {
        id: entry.id.clone(),
        citation: entry.citation.clone(),
        status: entry.status,
        domain: entry.domain,
        trials: config.trials,
        atoms,
        tol: config.tol,
        worst_margin: w.margin.value,
        worst_margin_exact: w.margin.exact.as_ref().map(format_rational),
        worst_clause: clauses[w.clause].name.clone(),
        worst_source: sources[src].0.clone(),
        anchors: w.anchors,
        witness: (!passed).then(|| KernelJson::from_kernel(kernel, ValueMode::Rational)),
        passed,
        expected_pass: entry.expected_pass(),
        revalidated,
        homogeneity_ok,
    })
}

/// `Π ‖f_i‖_2 - tr(G, f)`; exact when the comparison can be decided
/// through squares.
fn edge_weight_margin(model: &EdgeFactorModel<Rational>) -> Result<Margin> {
    let value = model.value()?;
    let bound = model.norm_product()?;
    let approx = bound.sub(crate::scalar::ExtFloat::from_rational(&value)).to_f64();
    let squares: Rational = model.squared_norms()?.into_iter().product();
    let holds = value <= rat_int(0) || value.clone() * value.clone() <= squares;
    // the sign is exact even when the magnitude is not
    let exact = if holds { None } else { Some(-(value.clone() * value - squares)) };
    Ok(Margin { value: if holds { approx.max(0.0) } else { approx.min(-f64::MIN_POSITIVE) }, exact })
}

fn check_edge_weight(entry: &InequalityEntry, graphs: &[WeightGraph], config: &CheckConfig) -> Result<EntryReport> {
    let cases: Vec<(usize, usize)> =
        (0..config.trials).flat_map(|t| (0..graphs.len()).map(move |g| (t, g))).collect();
    let results = exec::map_range(cases.len(), |i| -> Result<Margin> {
        let (trial, gi) = cases[i];
        let g = &graphs[gi];
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream((trial * graphs.len() + gi) as u64 + 1);
        let blocks = rng.gen_range(1..=3);
        let model = EdgeFactorModel::random(g.nodes, g.edges.clone(), blocks, rng.gen_bool(0.5), rng.gen())?;
        edge_weight_margin(&model)
    });
    let mut worst: Option<(usize, Margin)> = None;
    for (i, r) in results.into_iter().enumerate() {
        let m = r?;
        if worst.as_ref().is_none_or(|(_, b)| m.value < b.value) {
            worst = Some((i, m));
        }
    }
    let (i, m) = worst.ok_or_else(|| Error::InvalidModel("no trials".into()))?;
    let passed = !m.fails(config.tol);
    let (trial, gi) = cases[i];
    Ok(EntryReport {
        id: entry.id.clone(),
        citation: entry.citation.clone(),
        status: entry.status,
        domain: entry.domain,
        trials: config.trials,
        atoms: 0,
        tol: config.tol,
        worst_margin: m.value,
        worst_margin_exact: m.exact.as_ref().map(format_rational),
        worst_clause: graphs[gi].name.clone(),
        worst_source: format!("trial {trial}"),
        anchors: Vec::new(),
        witness: None,
        passed,
        expected_pass: entry.expected_pass(),
        revalidated: None,
        homogeneity_ok: None,
    })
}

pub fn check_entry(entry: &InequalityEntry, config: &CheckConfig) -> Result<EntryReport> {
    if config.trials == 0 && !config.adversarial {
        return Err(Error::InvalidModel("at least one trial is required".into()));
    }
    match &entry.check {
        Check::Clauses(c) => check_clauses(entry, c, config),
        Check::EdgeWeight(g) => check_edge_weight(entry, g, config),
    }
}

/// Checks every registry entry in registry order.
pub fn check_all(config: &CheckConfig) -> Result<Vec<EntryReport>> {
    builtin_registry().iter().map(|e| check_entry(e, config)).collect()
}
