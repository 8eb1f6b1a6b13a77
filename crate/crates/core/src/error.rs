use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("label count mismatch: {left} vs {right}")]
    LabelCountMismatch { left: usize, right: usize },

    #[error("label {label} sits on different sides in the two factors")]
    LabelSideMismatch { label: usize },

    #[error("cycle length {0} is not a positive even number")]
    OddCycle(usize),

    #[error("invalid family size: {0}")]
    InvalidSize(String),

    #[error("{what} exceeds cap: required {required}, limit {limit}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("incompatible block structures: {0}")]
    IncompatibleBlocks(String),

    #[error("partition class {0} is empty")]
    EmptyClass(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("missing anchor for label {0}")]
    MissingAnchor(usize),

    #[error("anchor block {block} out of range for label {label}")]
    AnchorOutOfRange { label: usize, block: usize },

    #[error("negative radicand {value} for exponent {exponent}")]
    NegativeRadicand { value: f64, exponent: String },

    #[error("not a rooted tree: {0}")]
    NotATree(String),

    #[error("tree must have at least two nodes")]
    TrivialTree,

    #[error("term has an isolated node")]
    IsolatedNode,

    #[error("graph must be simple (no parallel edges)")]
    NonSimple,

    #[error("epsilon {eps} outside the admissible interval (0, {upper})")]
    InvalidEpsilon { eps: String, upper: String },

    #[error("partition refinement stopped at {classes} classes with discrepancy {discrepancy}")]
    PartitionFailure { classes: usize, discrepancy: String },

    #[error("invalid edge-factor model: {0}")]
    InvalidModel(String),

    #[error("unknown registry entry {0:?}")]
    UnknownEntry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
