use serde::Serialize;
use serde_json::{json, Value};

use super::input::{load_bigraph, load_kernel, load_simple_graph};
use super::{Cli, Command, Outcome};
use crate::bigraph::{Bigraph, GraphJson};
use crate::density::{density, expansion, hom_count};
use crate::error::{Error, Result};
use crate::harness::{builtin_registry, check_all, check_entry, find_entry, CheckConfig};
use crate::kernel::{KernelJson, KernelSampler, NormKind, NormValue, StepKernel, ValueMode};
use crate::scalar::{format_rational, parse_rational, rat_int, Scalar};
use crate::verifier::{certify_graph, verify_variant, Variant};

fn scalar_json<S: Scalar>(x: &S, mode: ValueMode) -> Value {
    match (mode, x.to_rational()) {
        (ValueMode::Rational, Some(r)) => Value::String(format_rational(&r)),
        _ => json!(x.to_f64()),
    }
}

pub(super) fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Density { graph, kernel } => {
            let f = load_bigraph(graph)?;
            let (w, _) = load_kernel(kernel)?;
            let value = match cli.mode {
                ValueMode::Rational => scalar_json(&density(&f, &w)?, cli.mode),
                ValueMode::Float => scalar_json(&density(&f, &w.to_f64())?, cli.mode),
            };
            let summary = format!("t(F, W) = {value}");
            Outcome::new(&json!({ "value": value }), true, summary)
        }
        Command::Hom { pattern, host } => {
            let f = load_bigraph(pattern)?;
            let g = load_simple_graph(host)?;
            let count = hom_count(&f, &g)?;
            let summary = format!("hom(F, G) = {count}");
            Outcome::new(&json!({ "value": count.to_string() }), true, summary)
        }
        Command::Norm { kernel, kind } => norm(cli, kernel, kind),
        Command::Expand { graph, kernel, signed } => expand(cli, graph, kernel, *signed),
        Command::Check { entry, trials, seed, tol, max_blocks, no_adversarial } => {
            if !(*tol > 0.0) {
                return Err(Error::Parse("tolerance must be positive".into()));
            }
            let config =
                CheckConfig { trials: *trials, seed: *seed, tol: *tol, max_blocks: *max_blocks, adversarial: !no_adversarial };
            if entry.eq_ignore_ascii_case("all") {
                let reports = check_all(&config)?;
                let matched = reports.iter().filter(|r| r.matches_expectation()).count();
                let unexpected: Vec<&str> =
                    reports.iter().filter(|r| !r.matches_expectation()).map(|r| r.id.as_str()).collect();
                let ok = unexpected.is_empty();
                let summary = format!("{matched}/{} entries match their status", reports.len());
                Outcome::new(
                    &json!({ "entries": reports, "matched": matched, "unexpected": unexpected, "all_match": ok }),
                    ok,
                    summary,
                )
            } else {
                let report = check_entry(&find_entry(entry)?, &config)?;
                let summary = format!(
                    "{}: {} (worst margin {:e} on {})",
                    report.id,
                    if report.passed { "pass" } else { "fail" },
                    report.worst_margin,
                    report.worst_clause
                );
                let ok = report.matches_expectation();
                Outcome::new(&report, ok, summary)
            }
        }
        Command::List => {
            let entries: Vec<Value> = builtin_registry()
                .iter()
                .map(|e| {
                    json!({
                        "id": e.id,
                        "citation": e.citation,
                        "status": e.status,
                        "domain": e.domain,
                        "clauses": e.clauses().len(),
                    })
                })
                .collect();
            let summary = format!("{} entries", entries.len());
            Outcome::new(&entries, true, summary)
        }
        Command::Verify { graph, kernel, variant, eps } => {
            let f = load_bigraph(graph)?;
            let (w, _) = load_kernel(kernel)?;
            let variant = match (variant.to_ascii_lowercase().as_str(), eps) {
                ("close", _) => Variant::Close,
                ("infty" | "inf", _) => Variant::Infty,
                ("c4", _) => Variant::C4,
                ("reg", Some(e)) => Variant::Reg { eps: parse_rational(e)? },
                ("reg", None) => return Err(Error::Parse("--variant reg needs --eps".into())),
                (other, _) => return Err(Error::Parse(format!("unknown variant {other:?}"))),
            };
            let cert = verify_variant(&f, &w, &variant)?;
            let summary = format!("{:?}: t(F, W) = {}", cert.verdict, cert.density);
            Outcome::new(&cert, cert.verdict.is_positive(), summary)
        }
        Command::CertifyGraph { host, pattern, eps } => {
            let g = load_simple_graph(host)?;
            let f = load_bigraph(pattern)?;
            let cert = certify_graph(&g, &f, &parse_rational(eps)?)?;
            let certified = cert.quasirandom
                && cert.floor_holds
                && cert.kernel_certificate.as_ref().is_some_and(|c| c.verdict.is_positive());
            let summary = format!(
                "quasirandom: {}, t(F, G) = {} vs floor {}",
                cert.quasirandom, cert.density, cert.floor
            );
            Outcome::new(&cert, certified, summary)
        }
        Command::Sample { blocks, range, seed, symmetric, mean_zero, random_measures, grid } => {
            let (rows, cols) = match blocks.split_once(['x', 'X']) {
                Some((r, c)) => (parse_count(r)?, parse_count(c)?),
                None => {
                    let n = parse_count(blocks)?;
                    (n, n)
                }
            };
            let (lo, hi) = range
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected lo,hi, got {range:?}")))?;
            let k = KernelSampler::new(rows, cols)
                .range(parse_rational(lo.trim())?, parse_rational(hi.trim())?)
                .grid(*grid)
                .symmetric(*symmetric)
                .mean_zero(*mean_zero)
                .random_measures(*random_measures)
                .try_sample(*seed)?;
            let summary = format!("{rows}x{cols} kernel, seed {seed}");
            Outcome::new(&KernelJson::from_kernel(&k, cli.mode), true, summary)
        }
    }
}

fn parse_count(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad block count {s:?}")))
}

fn norm(cli: &Cli, kernel: &str, kind: &str) -> Result<Outcome> {
    let kind: NormKind = kind.parse()?;
    let (w, _) = load_kernel(kernel)?;
    let report = match cli.mode {
        ValueMode::Rational => norm_json(w.norm(kind)?, cli.mode),
        ValueMode::Float => norm_json(w.to_f64().norm(kind)?, cli.mode),
    };
    let summary = format!("{kind} norm ≈ {}", report["approx"]);
    Outcome::new(&report, true, summary)
}

fn norm_json<S: Scalar>(r: crate::kernel::NormReport<S>, mode: ValueMode) -> Value {
    let mut v = json!({ "kind": r.kind.to_string(), "approx": r.approx, "lower_bound": r.lower_bound });
    match r.value {
        NormValue::Exact(x) => v["value"] = scalar_json(&x, mode),
        NormValue::Root { radicand, degree } => {
            v["radicand"] = scalar_json(&radicand, mode);
            v["root"] = json!(degree);
        }
    }
    if let Some(w) = r.witness {
        v["witness"] = serde_json::to_value(w).unwrap_or(Value::Null);
    }
    v
}

#[derive(Serialize)]
struct TermJson {
    edges: Vec<[usize; 2]>,
    graph: GraphJson,
    multiplicity: u64,
    value: Value,
}

fn expand(cli: &Cli, graph: &str, kernel: &str, signed: bool) -> Result<Outcome> {
    let f = load_bigraph(graph)?;
    let (k, _) = load_kernel(kernel)?;
    let u = if signed { k } else { k.shifted(&rat_int(-1)) };
    let report = match cli.mode {
        ValueMode::Rational => expansion_json(&f, &u, cli.mode)?,
        ValueMode::Float => expansion_json(&f, &u.to_f64(), cli.mode)?,
    };
    let summary = format!("{} classes, total {}", report["terms"].as_array().map_or(0, Vec::len), report["total"]);
    Outcome::new(&report, true, summary)
}

fn expansion_json<S: Scalar>(f: &Bigraph, u: &StepKernel<S>, mode: ValueMode) -> Result<Value> {
    let f = f.unlabel();
    let exp = expansion(&f, u)?;
    let direct = density(&f, &u.shifted(&S::one()))?;
    let terms: Vec<TermJson> = exp
        .entries
        .iter()
        .map(|e| TermJson {
            edges: f
                .edges()
                .iter()
                .enumerate()
                .filter(|(i, _)| e.first_mask >> i & 1 == 1)
                .map(|(_, &(a, b))| [a, b])
                .collect(),
            graph: e.representative.to_json(),
            multiplicity: e.multiplicity,
            value: scalar_json(&e.value, mode),
        })
        .collect();
    Ok(json!({
        "terms": terms,
        "total": scalar_json(&exp.total, mode),
        "density": scalar_json(&direct, mode),
    }))
}
