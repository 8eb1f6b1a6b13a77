//! Command-line front end. Every command prints one JSON document.
//!
//! Exit codes: 0 on success or a positive verdict, 1 on a negative verdict,
//! 2 on usage, input or cap errors.

mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::kernel::ValueMode;

pub use input::{load_bigraph, load_kernel, load_simple_graph, named_bigraph};

#[derive(Debug, Parser)]
#[command(name = "sidorenko", version, about = "Homomorphism densities, inequality checks and local certificates")]
pub struct Cli {
    /// Arithmetic for density, expand and norm: rational or float.
    #[arg(long, global = true, default_value = "rational")]
    pub mode: ValueMode,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "SIDORENKO_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    /// Indented JSON and a one-line summary on stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homomorphism density t(F, W).
    Density {
        /// Bigraph JSON file or a name such as C6, P4, K2,3.
        graph: String,
        /// Kernel JSON file or const:<c>.
        kernel: String,
    },
    /// Homomorphism count hom(F, G) into a simple graph.
    Hom { pattern: String, host: String },
    /// Norm of a kernel: cut, l2, linf, schatten<r>.
    Norm {
        kernel: String,
        #[arg(long, default_value = "cut")]
        kind: String,
    },
    /// Spanning-subgraph expansion of t(F, 1 + U).
    Expand {
        graph: String,
        kernel: String,
        /// The kernel is U itself rather than W = 1 + U.
        #[arg(long)]
        signed: bool,
    },
    /// Property-test registry entries (an id or "all").
    Check {
        entry: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 6)]
        max_blocks: usize,
        /// Skip the fixed adversarial kernels.
        #[arg(long)]
        no_adversarial: bool,
    },
    /// List registry entries.
    List,
    /// Local certificate that t(F, W) >= 1.
    Verify {
        graph: String,
        kernel: String,
        #[arg(long, default_value = "close")]
        variant: String,
        /// Slack for the averaged variant.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Finite-graph form on a host graph.
    CertifyGraph {
        /// Simple graph JSON file or K<n>.
        host: String,
        pattern: String,
        #[arg(long)]
        eps: String,
    },
    /// Random step kernel.
    Sample {
        /// Block count, or <rows>x<cols>.
        #[arg(long, default_value = "3")]
        blocks: String,
        /// Value range lo,hi.
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        mean_zero: bool,
        #[arg(long)]
        random_measures: bool,
        /// Values are drawn from a grid with this many steps.
        #[arg(long, default_value_t = 8)]
        grid: u32,
    },
}

/// A finished command: its report and whether the verdict is positive.
pub struct Outcome {
    pub json: serde_json::Value,
    pub positive: bool,
    pub summary: String,
}

impl Outcome {
    fn new(report: &impl Serialize, positive: bool, summary: String) -> Result<Self> {
        Ok(Outcome { json: serde_json::to_value(report)?, positive, summary })
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(&outcome.json)?
    } else {
        serde_json::to_string(&outcome.json)?
    };
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if cli.pretty {
        eprintln!("{}", outcome.summary);
    }
    Ok(())
}

fn error_json(e: &Error) -> String {
    let mut v = serde_json::json!({ "error": e.to_string() });
    if let Error::CapExceeded { what, required, limit } = e {
        v["cap"] = serde_json::json!({ "what": what, "required": required.to_string(), "limit": limit.to_string() });
    }
    v.to_string()
}

pub fn run_cli(cli: &Cli) -> i32 {
    let result = exec::with_threads(cli.threads, || commands::dispatch(cli));
    match result.and_then(|o| emit(cli, &o).map(|_| o)) {
        Ok(o) if o.positive => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
    }
}
