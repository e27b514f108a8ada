//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input to the Hermitian eigensolver was not Hermitian.
    #[error("matrix is not Hermitian (max defect {0:.3e})")]
    NotHermitian(f64),

    /// A subsystem-dimension list is inconsistent with the matrix it labels.
    #[error("inconsistent dimensions: {0}")]
    BadDims(String),

    /// Operator/state dimensions do not match.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A matrix failed the density-matrix invariants.
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    /// A Kraus list failed the completeness relation.
    #[error("Kraus operators are not trace preserving (defect {0:.3e})")]
    NotTracePreserving(f64),

    /// A rate denominator vanished; sweeps skip such points explicitly.
    #[error("degenerate denominator: {0}")]
    Degenerate(String),

    /// A parameter was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
