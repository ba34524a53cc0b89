use thiserror::Error;

/// Errors produced while building scenario measures or solving hedge systems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HedgeError {
    /// A grid axis is too short, unsorted, or contains out-of-range values.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A probability table failed validation; the message lists the first
    /// violations found.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// Gaussian scenario parameters are unusable (non-positive sd, |rho| > 1,
    /// too few grid points, non-finite entries).
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// The pairwise correlations do not form a positive definite matrix, so
    /// no Gaussian coupling with these parameters exists.
    #[error("invalid correlation structure: {0}")]
    InvalidCorrelation(String),

    /// Real-world and risk-neutral measures live on different supports.
    #[error("incompatible supports: {0}")]
    IncompatibleSupports(String),

    /// A marginal probability is zero where conditional means are needed.
    #[error("degenerate marginal: {0}")]
    DegenerateMarginal(String),

    /// The mean-variance trade-off parameter must be strictly positive.
    #[error("risk aversion must be positive, got {0}")]
    NonPositiveRiskAversion(f64),

    /// The stacked moment/constraint matrix lost rank at working precision.
    #[error("non-generic instance: stacked system singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularSystem { pivot: f64, threshold: f64 },

    /// The price-weather cross-moment block is too large for the decoupled
    /// independence solve.
    #[error("measure not independent: max |Mpw| = {0:e}")]
    NotIndependent(f64),

    /// Vector lengths disagree with the system dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The operation needs at least one outcome.
    #[error("empty distribution")]
    EmptyDistribution,

    /// A scalar or vector argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
