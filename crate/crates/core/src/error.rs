//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the exact and numeric routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Fixed-width integer arithmetic left its range.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    /// Two series with different exponent denominators were combined.
    #[error("denominator mismatch: {0} vs {1}")]
    DenominatorMismatch(i64, i64),
    /// A caller passed an argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A lattice vector or sublattice failed a required property.
    #[error("lattice error: {0}")]
    Lattice(String),
    /// An exact elimination hit a zero pivot that no fallback could avoid.
    #[error("singular system: {0}")]
    Singular(String),
    /// A point lies outside the region where a product or sum converges.
    #[error("outside convergence region: {0}")]
    Convergence(String),
    /// Enumeration would exceed the configured vector budget.
    #[error("enumeration budget of {0} vectors exceeded")]
    Budget(usize),
    /// The restricted family meets a mirror or a wall it cannot cross.
    #[error("discriminant: {0}")]
    Discriminant(String),
    /// A computed expansion matched none of the expected closed forms.
    #[error("no match: {0}")]
    NoMatch(String),
    /// Input or output serialization failed.
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
