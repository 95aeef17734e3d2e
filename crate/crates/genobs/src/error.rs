use thiserror::Error;

/// Errors reported by the library.
///
/// Constructors validate every type invariant up front, so downstream
/// operations mostly cannot fail; the variants here name the invariant that
/// was violated.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix must be square (got {rows} rows, {cols} columns)")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry (NaN or infinity) at position {0}")]
    NonFinite(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("vector norm {norm:.3e} is below the degenerate threshold")]
    ZeroVector { norm: f64 },

    #[error("operator is not Hermitian: ||A - A*||_F = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("total effect operator is not positive definite: min eigenvalue {min_eigenvalue:.3e}")]
    TotalNotPositiveDefinite { min_eigenvalue: f64 },

    #[error("frame is numerically singular: condition number {condition:.3e} exceeds {limit:.1e}")]
    SingularFrame { condition: f64, limit: f64 },

    #[error("frame vector {index} is not normalized: |<e,e> - 1| = {deviation:.3e}")]
    NotNormalized { index: usize, deviation: f64 },

    #[error("basis is not orthonormal: max Gram deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("outcome values must be pairwise distinct (values {i} and {j} coincide)")]
    DuplicateValues { i: usize, j: usize },

    #[error("outcome labels must be pairwise distinct (label {0:?} repeats)")]
    DuplicateLabels(String),

    #[error("label count {labels} does not match outcome count {outcomes}")]
    LabelCountMismatch { labels: usize, outcomes: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),

    #[error("state is invalid: {0}")]
    InvalidState(String),

    #[error("probability vector violates its invariants: {0}")]
    InvalidDistribution(String),

    #[error("denominator Tr(rho E(X)) = {value:.3e} is degenerate; an input invariant was violated")]
    DegenerateDenominator { value: f64 },

    #[error("candidate reconstruction system is singular; the tomographic frame is defective")]
    SingularReconstruction,

    #[error("no affinity-violation witness found (best gap {best_gap:.3e}); consistent with representability")]
    NoWitnessFound { best_gap: f64 },

    #[error(
        "representability is indeterminate: verification failed but the best affinity gap \
         {best_gap:.3e} lies inside the round-off band; inspect the instance"
    )]
    IndeterminateRepresentability { best_gap: f64 },

    #[error("eigensolver failed to converge (off-diagonal residual {off_diagonal:.3e})")]
    EigenFailed { off_diagonal: f64 },

    #[error("document is invalid: {0}")]
    InvalidDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
