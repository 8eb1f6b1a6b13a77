//! Homomorphism densities of bipartite multigraphs in step kernels, a
//! property harness for signed-kernel density inequalities, and a verifier
//! for local Sidorenko certificates.

pub mod bigraph;
pub mod cli;
pub mod density;
pub mod error;
pub mod exec;
pub mod graph;
pub mod harness;
pub mod kernel;
pub mod scalar;
pub mod structure;
pub mod verifier;

pub use bigraph::{Bigraph, IsoMode, Side};
pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use kernel::StepKernel;
pub use scalar::{Rational, Scalar};
