//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by polytope geometry, target construction, metric
/// factorization, and chain execution.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("infeasible point: constraint {index} violated by {violation:.3e}")]
    Infeasible { index: usize, violation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("metric failure: {0}")]
    MetricFailure(String),

    #[error("point too close to the boundary: slack {slack:.3e} at constraint {index}")]
    NearBoundary { index: usize, slack: f64 },

    #[error("no interior point found")]
    NoInteriorPoint,

    #[error("missing dependency for kernel construction: {0}")]
    MissingDependency(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
