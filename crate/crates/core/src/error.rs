use thiserror::Error;

/// Errors raised by the operator, resolvent, and prox routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The requested (lambda, mu) pair lies outside the regime where the prox is single-valued.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("resolvent undefined: I + A is singular")]
    ResolventUndefined,

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
