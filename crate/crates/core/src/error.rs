//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by samplers, laws and numerical routines.
#[derive(Debug, Error)]
pub enum SkylineError {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested truncation radius does not exist (divergent tail).
    #[error("no finite truncation radius: {0}")]
    NoFiniteTruncation(String),

    /// An adaptive quadrature failed to reach its tolerance within budget.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// The Poisson sampler cannot represent the requested mean count.
    #[error("expected point count {0} overflows the Poisson sampler")]
    CountOverflow(f64),

    /// Operation requires a height model this routine does not support.
    #[error("unsupported height model: {0}")]
    UnsupportedModel(String),
}

pub type Result<T> = std::result::Result<T, SkylineError>;
