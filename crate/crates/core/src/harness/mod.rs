//! Density inequalities as formal expressions, and a seeded checker that
//! reports the worst margin of each over sampled and adversarial kernels.

mod check;
mod expr;
mod registry;

pub use check::{adversarial_kernels, check_all, check_entry, trial_kernel, CheckConfig, EntryReport};
pub use expr::{Atom, DensityExpr, ExprValue, Power, Product};
pub use registry::{
    builtin_registry, endnode_pair, find_entry, main_lemma_graphs, one_end_p3, p3_centered, two_end_p3, Check,
    Clause, Domain, EntryStatus, InequalityEntry, WeightGraph,
};
