//! Mean-variance frontier of optimally hedged profit.
//!
//! Writing u = 1/(2a), the optimal claim is affine in u, and both hedged
//! moments collapse onto a single scalar g = x_o' M x_o >= 0:
//!
//! ```text
//!     mean(u)     = mean_inf + u g
//!     variance(u) = var_inf  + u^2 g
//! ```
//!
//! so the frontier traced by the risk-aversion sweep is the parabola
//! `mean = mean_inf + sqrt(g (variance - var_inf))`, concave and increasing.
//! Concavity is what makes the piecewise-linear comparison in
//! [`weakly_dominates`] safe: chords underestimate the curve, so a frontier
//! never spuriously dominates through interpolation error.

use serde::{Deserialize, Serialize};

use crate::error::HedgeError;
use crate::moments::{hedged_mean_variance, HedgeSystem};
use crate::solver::{two_fund_basis, ClaimPair, TwoFundBasis};

/// One frontier sample: the hedged profit moments at risk aversion `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub a: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Claims held at one frontier point, `x(a) = x_inf + x_o / (2a)`.
pub fn claims_at(basis: &TwoFundBasis, a: f64) -> Result<ClaimPair, HedgeError> {
    if !a.is_finite() || a <= 0.0 {
        return Err(HedgeError::NonPositiveRiskAversion(a));
    }
    let u = 0.5 / a;
    let combine = |inf: &[f64], tilt: &[f64]| {
        inf.iter()
            .zip(tilt)
            .map(|(x, t)| x + u * t)
            .collect::<Vec<f64>>()
    };
    Ok(ClaimPair {
        price: combine(&basis.x_inf.price, &basis.x_o.price),
        weather: combine(&basis.x_inf.weather, &basis.x_o.weather),
    })
}

/// Evaluates the frontier at one risk aversion from a precomputed basis.
pub fn frontier_point(
    sys: &HedgeSystem,
    basis: &TwoFundBasis,
    a: f64,
) -> Result<FrontierPoint, HedgeError> {
    let claims = claims_at(basis, a)?;
    let (mean, variance) = hedged_mean_variance(sys, &claims.price, &claims.weather);
    Ok(FrontierPoint { a, mean, variance })
}

/// Sweeps the frontier over strictly increasing positive risk aversions,
/// factoring the stacked system once.
pub fn frontier_sweep(
    sys: &HedgeSystem,
    a_values: &[f64],
) -> Result<Vec<FrontierPoint>, HedgeError> {
    if a_values.is_empty() {
        return Err(HedgeError::InvalidParameter(
            "risk-aversion sweep is empty".into(),
        ));
    }
    for pair in a_values.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(HedgeError::InvalidParameter(format!(
                "risk-aversion sweep must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let basis = two_fund_basis(sys)?;
    a_values
        .iter()
        .map(|&a| frontier_point(sys, &basis, a))
        .collect()
}

/// Checks that the `dominant` frontier lies weakly above `other` in the
/// mean-variance plane: at every variance attained by `other`, the
/// piecewise-linear interpolant of `dominant` reaches at least the other
/// mean minus `mean_tol`.
///
/// Variances outside the dominant curve's sampled range compare against its
/// nearest endpoint. For the dominant curve that clamping underestimates (the
/// true frontier keeps rising), so it can fail a genuine dominance but never
/// fabricate one.
pub fn weakly_dominates(
    dominant: &[FrontierPoint],
    other: &[FrontierPoint],
    mean_tol: f64,
) -> bool {
    if dominant.is_empty() || other.is_empty() {
        return false;
    }
    let mut curve: Vec<(f64, f64)> = dominant.iter().map(|p| (p.variance, p.mean)).collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    other
        .iter()
        .all(|p| interpolate_mean(&curve, p.variance) >= p.mean - mean_tol)
}

fn interpolate_mean(curve: &[(f64, f64)], variance: f64) -> f64 {
    let first = curve[0];
    let last = curve[curve.len() - 1];
    if variance <= first.0 {
        return first.1;
    }
    if variance >= last.0 {
        return last.1;
    }
    for seg in curve.windows(2) {
        let (v0, m0) = seg[0];
        let (v1, m1) = seg[1];
        if variance <= v1 {
            if v1 == v0 {
                return m0.max(m1);
            }
            let t = (variance - v0) / (v1 - v0);
            return m0 + t * (m1 - m0);
        }
    }
    last.1
}
