//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by belief construction, game operations, and solvers.
///
/// Numeric payloads are carried as `f64` regardless of the scalar the caller
/// works in, so the error type stays object-safe and non-generic.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("choice index {index} out of range for {n_choices} choices")]
    ChoiceOutOfRange { index: usize, n_choices: usize },

    #[error("{name} = {value} outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("mismatched shapes: {0}")]
    ShapeMismatch(String),

    #[error("cannot normalize a vector with zero total mass")]
    ZeroMass,

    #[error("non-finite {what} encountered at iteration {iteration}")]
    NonFinite { what: &'static str, iteration: usize },

    #[error(
        "solver did not converge within {iterations} iterations \
         (residual {residual:.3e}, objective {objective:.6e})"
    )]
    SolverFailure {
        iterations: usize,
        residual: f64,
        objective: f64,
        /// Last iterate, for diagnostics.
        last_iterate: Vec<f64>,
    },

    #[error("support size {support} exceeds brute-force limit {limit}")]
    SupportTooLarge { support: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
