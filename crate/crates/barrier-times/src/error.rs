//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scalar argument is outside its admissible range.
    #[error("{field} must be {requirement} (got {value})")]
    Domain {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Incident momentum at or above the barrier momentum scale; only the
    /// tunneling regime k < w is modeled.
    #[error("above-barrier not supported: k = {momentum} >= w = {momentum_scale}")]
    AboveBarrier { momentum: f64, momentum_scale: f64 },

    /// A simulation setup violates a cross-field constraint.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An observable could not be extracted from simulation output.
    #[error("measurement failed: {0}")]
    Measurement(String),

    /// Propagation produced a non-physical state (norm drift, NaN).
    #[error("propagation unstable: {0}")]
    Unstable(String),

    /// Numerical routine failed in a way that indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::AboveBarrier { .. } | Error::Config(_)
        )
    }
}
