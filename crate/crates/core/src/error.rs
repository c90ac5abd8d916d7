use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: expected two node tokens, found {found}")]
    Parse { line: usize, found: usize },

    #[error("edge list contains no edges or nodes")]
    EmptyInput,

    #[error("graph has no edges; modularity is undefined")]
    NoEdges,

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("partition covers {partition} nodes but the graph has {graph}")]
    SizeMismatch { partition: usize, graph: usize },

    #[error("resolution parameter must be positive, got {0}")]
    InvalidResolution(String),

    #[error("brute-force enumeration refused for n = {n} (limit {limit}); use branch_and_bound_max")]
    TooLargeForBruteForce { n: usize, limit: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("inconsistent pair-decision state: {0}")]
    InconsistentState(String),

    #[error("optimum modularity must be positive for GOP, got {0}")]
    NonPositiveOptimum(f64),

    #[error("algorithm modularity {q_alg} exceeds the optimum {q_star}")]
    ExceedsOptimum { q_alg: f64, q_star: f64 },

    #[error("reference partition cannot normalize RMI (self-RMI = {0})")]
    NonNormalizableReference(f64),

    #[error("table marginals disagree: rows sum to {rows}, columns to {cols}")]
    MarginalMismatch { rows: u64, cols: u64 },

    #[error("ECS alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("no optimal partitions supplied")]
    EmptyOptima,

    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),

    #[error("benchmark generation failed at {stage}: {reason}")]
    Generation { stage: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
