//! Numerical tolerances used across the crate.
//!
//! Every threshold that decides between "fine" and "fail" lives here so that
//! the solver, the validators and the test suite agree on a single value.

/// Probability tables produced by our own discretizers must sum to 1 at
/// essentially machine precision; anything worse indicates a construction bug.
pub const MEASURE_CONSTRUCTION_SUM_TOL: f64 = 1e-12;

/// User-supplied probability tables are accepted when they sum to 1 within
/// this slack, which covers tables written out with ~15 significant digits.
pub const MEASURE_INPUT_SUM_TOL: f64 = 1e-9;

/// A stacked moment/constraint matrix counts as singular when the smallest
/// surviving pivot of its full-pivoting LU factorization falls below this
/// factor times the matrix max-norm. No regularization is applied; the solver
/// fails loudly instead.
pub const SINGULARITY_RELATIVE_THRESHOLD: f64 = 1e-12;

/// First-order-condition stationarity residuals are accepted up to this
/// factor times max(1, max-norm of the FOC right-hand side).
pub const FOC_RELATIVE_TOL: f64 = 1e-8;

/// Zero-cost constraint residuals |phi' x| are accepted up to this absolute
/// bound; claims are priced with probabilities of order one.
pub const COST_RESIDUAL_TOL: f64 = 1e-8;

/// The decoupled independence solve is only meaningful when the price-weather
/// cross-moment block vanishes; entries above this bound reject the fast path.
pub const INDEPENDENCE_MAX_CROSS_MOMENT: f64 = 1e-10;

/// Profit outcomes closer than this relative distance are merged into one
/// atom when a hedged profit distribution is tabulated.
pub const OUTCOME_MERGE_RELATIVE_TOL: f64 = 1e-9;

/// The covariance-style matrix M is positive semidefinite in exact
/// arithmetic; eigenvalues are allowed to dip below zero by at most this
/// factor times the largest eigenvalue before validation flags the instance.
pub const PSD_EIGENVALUE_FLOOR_FACTOR: f64 = 1e-8;

/// Eigenvalues at or below this factor times the largest eigenvalue count as
/// members of the structural two-dimensional null space of M.
pub const NULL_EIGENVALUE_FACTOR: f64 = 1e-8;

/// Largest acceptable principal angle (measured by its sine) between the
/// computed null eigenspace of M and the span of the two block indicator
/// vectors.
pub const EIGENSPACE_ANGLE_TOL: f64 = 1e-6;

/// A correlation matrix must keep at least this much determinant in its
/// conditioning blocks for the Gaussian discretizers to invert it.
pub const CORRELATION_MIN_DET: f64 = 1e-12;

/// Structural identities of an assembled system (zero column sums of c,
/// indicator null directions of M, marginal consistency) hold to this bound.
pub const ASSEMBLY_IDENTITY_TOL: f64 = 1e-10;
