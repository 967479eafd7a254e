//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrsError {
    /// A vector or matrix argument has the wrong length.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Invalid data passed by the caller (infeasible start, bad triplets, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A solver configuration that violates its own invariants
    /// (step size out of range, non-positive tolerance, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The requested operation is not available at this problem size,
    /// e.g. dense eigendecomposition above the dense limit.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A solver produced output that violates a guaranteed property.
    /// Never silently accepted; surfaced to the caller.
    #[error("solver anomaly: {0}")]
    SolverAnomaly(String),

    /// Problem-file syntax or consistency error.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, TrsError>;
