//! Certificates that `t(F, W) >= 1` for kernels near the constant one.

mod certificate;
mod graph_form;
mod regularity;

pub use certificate::{
    build_ledger, eps_upper, verify_close, verify_variant, BipartiteCase, BipartiteGroup, BoundedCase, BoundedTerm,
    Certificate, CycleBudget, Hypothesis, Ledger, StarCase, StarNode, Variant, Verdict,
};
pub use graph_form::{certify_graph, GraphCertificate, GraphCheck, GRAPH_NODE_CAP};
pub use regularity::{weak_regularity_partition, PartitionReport};
