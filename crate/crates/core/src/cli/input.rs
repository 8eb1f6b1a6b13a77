//! Loading graphs and kernels from files or short names.

use std::fs;
use std::path::Path;

use crate::bigraph::family;
use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::kernel::{StepKernel, ValueMode};
use crate::scalar::{parse_rational, Rational};

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn with_path<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Json(j) => Error::Parse(format!("{path}: {j}")),
        other => other,
    })
}

fn size(s: &str, name: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad size in graph name {name:?}")))
}

/// `C6`, `P4`, `K2,3`, `S3` (star with three edges), `theta2,2,4`.
pub fn named_bigraph(name: &str) -> Result<Bigraph> {
    let lower = name.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix("theta") {
        let lengths = rest.split(',').map(|x| size(x, name)).collect::<Result<Vec<_>>>()?;
        return family::theta(&lengths);
    }
    let (head, rest) = lower.split_at(1);
    match head {
        "c" => {
            let n = size(rest, name)?;
            if n < 2 || n % 2 == 1 {
                return Err(Error::OddCycle(n));
            }
            Ok(family::cycle(n))
        }
        "p" => Ok(family::path(size(rest, name)?)),
        "s" => Ok(family::star(size(rest, name)?)),
        "k" => {
            let (a, b) = rest
                .split_once([',', 'x'])
                .ok_or_else(|| Error::Parse(format!("expected K<a>,<b>, got {name:?}")))?;
            Ok(family::complete_bipartite(size(a, name)?, size(b, name)?))
        }
        _ => Err(Error::Parse(format!("{name:?} is neither a file nor a known graph name"))),
    }
}

pub fn load_bigraph(arg: &str) -> Result<Bigraph> {
    if Path::new(arg).is_file() {
        with_path(arg, Bigraph::from_json_str(&read(arg)?))
    } else {
        named_bigraph(arg)
    }
}

/// Host graph from a file, or `K<n>` for the complete graph.
pub fn load_simple_graph(arg: &str) -> Result<SimpleGraph> {
    if Path::new(arg).is_file() {
        return with_path(arg, SimpleGraph::from_json_str(&read(arg)?));
    }
    let n = arg
        .strip_prefix(['K', 'k'])
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("{arg:?} is neither a file nor K<n>")))?;
    Ok(SimpleGraph::complete(n))
}

/// Kernel from a file, or `const:<c>` for a one-block constant kernel.
pub fn load_kernel(arg: &str) -> Result<(StepKernel<Rational>, Option<ValueMode>)> {
    if let Some(c) = arg.strip_prefix("const:") {
        return Ok((StepKernel::constant(parse_rational(c)?), None));
    }
    with_path(arg, StepKernel::from_json_str(&read(arg)?))
}
