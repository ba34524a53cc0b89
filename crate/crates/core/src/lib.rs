//! Optimal zero-cost hedging of price and weather risk for an energy
//! retailer with mean-variance preferences, in a discrete scenario setting.
//!
//! The retailer sells power at a flat retail rate r and buys at the spot
//! price, so its unhedged profit over a period is y(p, q) = (r - p) q, with
//! the demanded quantity q correlated with both the spot price p and a
//! weather index w. The library finds the pair of zero-cost contingent
//! claims, one paying x_p(p) and one paying x_w(w), that maximizes
//! mean-variance utility of the hedged profit y + x_p + x_w. Because the
//! setting is discrete, the optimum solves a single dense linear system
//! assembled from scenario moments; no iterative optimization is involved.
//!
//! The pipeline, mirrored by the module layout:
//!
//! 1. [`distributions`]: scenario grids, the real-world measure and the
//!    pricing (risk-neutral) measure, plus lognormal-normal discretizers.
//! 2. [`moments`]: reduction of a measure pair to the moment system the
//!    optimizer needs (conditional profit means, covariance blocks).
//! 3. [`solver`]: closed-form solution of the stacked first-order
//!    conditions, two-fund decomposition, restricted variants, and FOC
//!    verification.
//! 4. [`frontier`]: the mean-variance frontier traced as risk aversion
//!    varies, and frontier dominance comparison.
//! 5. [`analytics`]: exact hedged-profit distributions, quantile tables,
//!    and the correlation / volatility parameter sweeps.
//! 6. [`report`]: CSV and JSON renderings of all of the above.
//!
//! # Example
//!
//! Hedging a tiny two-point market where both claims are priced under the
//! real-world measure itself:
//!
//! ```
//! use mvhedge::distributions::{RealWorldMeasure, RiskNeutralMeasure, ScenarioGrid};
//! use mvhedge::moments::{assemble_system, hedged_mean_variance};
//! use mvhedge::solver::{solve_general, verify_foc};
//!
//! let grid = ScenarioGrid::new(
//!     vec![100.0, 140.0], // spot prices
//!     vec![10.0, 20.0],   // demanded quantities
//!     vec![0.0, 1.0],     // weather index levels
//! )?;
//! let psi = RealWorldMeasure::new(grid, vec![0.125; 8])?;
//! let phi = RiskNeutralMeasure::from_real_world(&psi);
//! let sys = assemble_system(&psi, &phi, 120.0)?;
//!
//! let sol = solve_general(&sys, 1.0)?;
//! assert!(verify_foc(&sys, &sol).passes());
//!
//! let (_, unhedged_var) = hedged_mean_variance(&sys, &[0.0; 2], &[0.0; 2]);
//! let (_, hedged_var) = hedged_mean_variance(&sys, &sol.x_p, &sol.x_w);
//! assert!(hedged_var < unhedged_var);
//! # Ok::<(), mvhedge::error::HedgeError>(())
//! ```

pub mod analytics;
pub mod distributions;
pub mod error;
pub mod frontier;
pub mod moments;
pub mod report;
pub mod solver;
pub mod tolerances;

pub use analytics::{
    build_model, correlation_sweep, hedged_profit_distribution, quantiles, strategy_claims,
    strategy_solution, volatility_sweep, CorrelationRecord, ProfitDistribution, ScenarioModel,
    Strategy, SweepAxis, VolatilityRecord,
};
pub use distributions::{
    discretize_real_world, discretize_risk_neutral, discretize_risk_neutral_on, GaussianSpec,
    RealWorldMeasure, RiskNeutralMeasure, ScenarioGrid,
};
pub use error::HedgeError;
pub use frontier::{claims_at, frontier_point, frontier_sweep, weakly_dominates, FrontierPoint};
pub use moments::{assemble_system, hedged_mean_variance, utility_value, HedgeSystem};
pub use solver::{
    restricted_risk_min, solve_general, solve_independent, solve_restricted, two_fund_basis,
    verify_foc, ClaimPair, FocReport, HedgeSolution, Restriction, TwoFundBasis,
};
