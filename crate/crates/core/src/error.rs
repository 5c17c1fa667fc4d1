//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Diagnostic payloads are carried as `f64` regardless of the working
/// scalar so the enum stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands disagree on dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A matrix failed the Hermiticity check.
    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    /// The eigensolver ran out of sweeps before the off-diagonal mass vanished.
    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    /// Initial and final states lie on the same ray; there is nothing to rotate.
    #[error("initial and final states lie on the same ray (separation {theta:.3e} rad)")]
    DegeneratePair { theta: f64 },

    /// The supplied axis states are not an orthonormal pair, or their
    /// eigenvalues coincide.
    #[error("invalid rotation axis: {reason}")]
    InvalidAxis { reason: String },

    /// A scalar argument fell outside its documented domain.
    #[error("argument out of domain: {0}")]
    Domain(String),

    /// A vector or matrix entry was NaN or infinite.
    #[error("entries must be finite")]
    NonFinite,

    /// Attempted to normalize a vector with zero norm.
    #[error("cannot normalize a zero vector")]
    ZeroNorm,

    /// A set of vectors turned out numerically linearly dependent.
    #[error("vectors are numerically linearly dependent")]
    RankDeficient,
}

pub type Result<T> = std::result::Result<T, Error>;
