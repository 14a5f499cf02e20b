use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// Precondition failures that correspond to a hypothesis of the underlying
/// theory carry the name of that hypothesis so the CLI can surface it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("multi-index has length {got}, expected {expected}")]
    IndexLength { got: usize, expected: usize },

    #[error("functions live on different spheres")]
    SphereMismatch,

    #[error("resolvent shift {shift} hits the eigenvalue of degree {degree}, whose component is nonzero")]
    ResolventSingular { degree: u32, shift: String },

    #[error("non-finite sample value at quadrature node {node}")]
    NonFiniteSample { node: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis `{hypothesis}` violated: {detail}")]
    Hypothesis { hypothesis: &'static str, detail: String },

    #[error("evaluation paths disagree for {what}: {values:?}")]
    PathDisagreement { what: &'static str, values: Vec<f64> },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
