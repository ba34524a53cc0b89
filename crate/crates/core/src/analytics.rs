//! Strategy-level analytics over the scenario table.
//!
//! Everything here evaluates hedges rather than computing them: exact
//! discrete profit distributions and their quantiles, and the two
//! re-discretizing parameter sweeps (price-weather correlation and marginal
//! volatility). Quantiles are taken directly on the scenario distribution,
//! with no density smoothing, so every number is reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{
    discretize_real_world, discretize_risk_neutral_on, GaussianSpec, RealWorldMeasure,
    RiskNeutralMeasure,
};
use crate::error::HedgeError;
use crate::moments::{assemble_system, profit, utility_value, HedgeSystem};
use crate::solver::{solve_general, solve_restricted, ClaimPair, HedgeSolution, Restriction};
use crate::tolerances::{MEASURE_INPUT_SUM_TOL, OUTCOME_MERGE_RELATIVE_TOL};

/// Hedging strategies compared throughout the analytics and the CLI.
///
/// `IndependenceProxy` is the full hedge computed after forcing the
/// price-weather cross-moment block to zero, then held under the true
/// measure; it quantifies the cost of wrongly assuming independence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    NoHedge,
    PriceOnly,
    WeatherOnly,
    PriceAndWeather,
    IndependenceProxy,
}

impl Strategy {
    /// All strategies in reporting order.
    pub fn all() -> [Strategy; 5] {
        [
            Strategy::NoHedge,
            Strategy::PriceOnly,
            Strategy::WeatherOnly,
            Strategy::PriceAndWeather,
            Strategy::IndependenceProxy,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::NoHedge => "no-hedge",
            Strategy::PriceOnly => "price-only",
            Strategy::WeatherOnly => "weather-only",
            Strategy::PriceAndWeather => "price-and-weather",
            Strategy::IndependenceProxy => "independence-proxy",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = HedgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "no-hedge" => Ok(Strategy::NoHedge),
            "price-only" => Ok(Strategy::PriceOnly),
            "weather-only" => Ok(Strategy::WeatherOnly),
            "price-and-weather" => Ok(Strategy::PriceAndWeather),
            "independence-proxy" => Ok(Strategy::IndependenceProxy),
            other => Err(HedgeError::InvalidParameter(format!(
                "unknown strategy {other:?}; expected one of no-hedge, price-only, \
                 weather-only, price-and-weather, independence-proxy"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// Model construction from parametric specs
// ---------------------------------------------------------------------------

/// A fully discretized market: both measures on one grid plus the assembled
/// moment system.
#[derive(Debug, Clone)]
pub struct ScenarioModel {
    pub psi: RealWorldMeasure,
    pub phi: RiskNeutralMeasure,
    pub system: HedgeSystem,
    pub retail_rate: f64,
}

/// Discretizes the real-world spec, evaluates the pricing spec's marginals
/// on the same supports, and assembles the moment system.
pub fn build_model(
    psi_spec: &GaussianSpec,
    phi_spec: &GaussianSpec,
    retail_rate: f64,
) -> Result<ScenarioModel, HedgeError> {
    if !retail_rate.is_finite() || retail_rate <= 0.0 {
        return Err(HedgeError::InvalidParameter(format!(
            "retail rate must be positive and finite, got {retail_rate}"
        )));
    }
    let psi = discretize_real_world(psi_spec)?;
    let phi = discretize_risk_neutral_on(phi_spec, psi.grid().prices(), psi.grid().weather())?;
    let system = assemble_system(&psi, &phi, retail_rate)?;
    Ok(ScenarioModel {
        psi,
        phi,
        system,
        retail_rate,
    })
}

/// Solves for one strategy's claims; `None` for the unhedged strategy.
pub fn strategy_solution(
    sys: &HedgeSystem,
    strategy: Strategy,
    a: f64,
) -> Result<Option<HedgeSolution>, HedgeError> {
    match strategy {
        Strategy::NoHedge => Ok(None),
        Strategy::PriceOnly => solve_restricted(sys, a, Restriction::PriceOnly).map(Some),
        Strategy::WeatherOnly => solve_restricted(sys, a, Restriction::WeatherOnly).map(Some),
        Strategy::PriceAndWeather => solve_general(sys, a).map(Some),
        Strategy::IndependenceProxy => solve_general(&sys.independence_proxy(), a).map(Some),
    }
}

/// Claim pair held under a strategy, zeros when unhedged.
pub fn strategy_claims(
    sys: &HedgeSystem,
    strategy: Strategy,
    a: f64,
) -> Result<ClaimPair, HedgeError> {
    Ok(match strategy_solution(sys, strategy, a)? {
        Some(sol) => ClaimPair {
            price: sol.x_p,
            weather: sol.x_w,
        },
        None => ClaimPair {
            price: vec![0.0; sys.n_prices()],
            weather: vec![0.0; sys.n_weather()],
        },
    })
}

// ---------------------------------------------------------------------------
// Profit distributions and quantiles
// ---------------------------------------------------------------------------

/// One atom of a discrete profit distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfitOutcome {
    pub value: f64,
    pub probability: f64,
}

/// Discrete distribution of hedged profit under one strategy, outcomes
/// sorted ascending by value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfitDistribution {
    strategy: Strategy,
    outcomes: Vec<ProfitOutcome>,
}

impl ProfitDistribution {
    /// Builds a distribution from (value, probability) pairs: sorts by
    /// value, merges values equal within
    /// [`OUTCOME_MERGE_RELATIVE_TOL`](crate::tolerances) relative to the
    /// value scale (probability-weighted value within each cluster), and
    /// validates that probabilities are nonnegative and sum to 1.
    pub fn from_outcomes(
        strategy: Strategy,
        pairs: Vec<(f64, f64)>,
    ) -> Result<Self, HedgeError> {
        if pairs.is_empty() {
            return Err(HedgeError::EmptyDistribution);
        }
        let mut total = 0.0;
        for &(value, prob) in &pairs {
            if !value.is_finite() {
                return Err(HedgeError::InvalidParameter(format!(
                    "profit outcome {value} is not finite"
                )));
            }
            if !prob.is_finite() || prob < 0.0 {
                return Err(HedgeError::InvalidMeasure(format!(
                    "outcome probability {prob} is negative or not finite"
                )));
            }
            total += prob;
        }
        if (total - 1.0).abs() > MEASURE_INPUT_SUM_TOL {
            return Err(HedgeError::InvalidMeasure(format!(
                "outcome probabilities sum to {total}, expected 1"
            )));
        }

        // Zero-probability scenarios carry no mass and would only seed
        // empty atoms; the sum check above guarantees some mass remains.
        let mut sorted: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, p)| p > 0.0).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let scale = sorted
            .iter()
            .fold(1.0_f64, |acc, &(v, _)| acc.max(v.abs()));
        let merge_width = OUTCOME_MERGE_RELATIVE_TOL * scale;

        let mut outcomes: Vec<ProfitOutcome> = Vec::new();
        let mut cluster_start = sorted[0].0;
        let mut weighted_value = 0.0;
        let mut cluster_prob = 0.0;
        for (value, prob) in sorted {
            if value - cluster_start > merge_width {
                outcomes.push(ProfitOutcome {
                    value: weighted_value / cluster_prob,
                    probability: cluster_prob,
                });
                cluster_start = value;
                weighted_value = 0.0;
                cluster_prob = 0.0;
            }
            weighted_value += value * prob;
            cluster_prob += prob;
        }
        outcomes.push(ProfitOutcome {
            value: weighted_value / cluster_prob,
            probability: cluster_prob,
        });

        Ok(Self { strategy, outcomes })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn outcomes(&self) -> &[ProfitOutcome] {
        &self.outcomes
    }

    pub fn mean(&self) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.value * o.probability)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.outcomes
            .iter()
            .map(|o| o.probability * (o.value - mean).powi(2))
            .sum()
    }
}

/// Enumerates the hedged profit `y(p, q) + x_p(p) + x_w(w)` over every
/// scenario and aggregates it into a [`ProfitDistribution`]. Without a
/// solution the claims are zero (the unhedged profit distribution).
pub fn hedged_profit_distribution(
    psi: &RealWorldMeasure,
    retail_rate: f64,
    solution: Option<&HedgeSolution>,
    strategy: Strategy,
) -> Result<ProfitDistribution, HedgeError> {
    let grid = psi.grid();
    let (n, l, m) = grid.dims();
    if let Some(sol) = solution {
        if sol.x_p.len() != n || sol.x_w.len() != m {
            return Err(HedgeError::DimensionMismatch(format!(
                "claims of length {} and {} on a {}x{} price-weather grid",
                sol.x_p.len(),
                sol.x_w.len(),
                n,
                m
            )));
        }
    }

    let mut pairs = Vec::with_capacity(n * l * m);
    for (i, &price) in grid.prices().iter().enumerate() {
        for (j, &quantity) in grid.quantities().iter().enumerate() {
            for (k, _) in grid.weather().iter().enumerate() {
                let mut value = profit(price, quantity, retail_rate);
                if let Some(sol) = solution {
                    value += sol.x_p[i] + sol.x_w[k];
                }
                pairs.push((value, psi.prob(i, j, k)));
            }
        }
    }
    ProfitDistribution::from_outcomes(strategy, pairs)
}

/// Left-continuous inverse CDF at each level: the smallest outcome whose
/// cumulative probability reaches the level. Levels must be strictly
/// increasing and inside (0, 1).
pub fn quantiles(dist: &ProfitDistribution, levels: &[f64]) -> Result<Vec<f64>, HedgeError> {
    if dist.outcomes().is_empty() {
        return Err(HedgeError::EmptyDistribution);
    }
    for &level in levels {
        if !level.is_finite() || level <= 0.0 || level >= 1.0 {
            return Err(HedgeError::InvalidParameter(format!(
                "quantile level {level} is outside (0, 1)"
            )));
        }
    }
    for pair in levels.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(HedgeError::InvalidParameter(format!(
                "quantile levels must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }

    let outcomes = dist.outcomes();
    let mut result = Vec::with_capacity(levels.len());
    let mut cumulative = 0.0;
    let mut idx = 0;
    for &level in levels {
        while idx < outcomes.len() - 1 && cumulative + outcomes[idx].probability < level {
            cumulative += outcomes[idx].probability;
            idx += 1;
        }
        result.push(outcomes[idx].value);
    }
    Ok(result)
}

/// Fraction of unhedged variance removed by a hedge.
pub fn variance_reduction(unhedged_variance: f64, hedged_variance: f64) -> f64 {
    if unhedged_variance == 0.0 {
        return 0.0;
    }
    1.0 - hedged_variance / unhedged_variance
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

/// One correlation-sweep setting: the general solution, the proxy computed
/// as if price and weather were independent, and both hedges' utilities and
/// profit moments under the true system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRecord {
    pub rho_wp: f64,
    pub general: HedgeSolution,
    pub proxy: HedgeSolution,
    pub utility_general: f64,
    pub utility_proxy: f64,
    pub mean_general: f64,
    pub variance_general: f64,
    pub mean_proxy: f64,
    pub variance_proxy: f64,
}

/// Re-discretizes the model at each weather-price correlation (applied to
/// both measures, so the pricing measure tracks the same dependence),
/// solves the general problem and the independence proxy, and evaluates
/// both hedges under the true (correlated) measure.
pub fn correlation_sweep(
    psi_spec: &GaussianSpec,
    phi_spec: &GaussianSpec,
    rho_values: &[f64],
    a: f64,
    retail_rate: f64,
) -> Result<Vec<CorrelationRecord>, HedgeError> {
    let mut records = Vec::with_capacity(rho_values.len());
    for &rho in rho_values {
        let mut psi = psi_spec.clone();
        let mut phi = phi_spec.clone();
        psi.rho_wp = rho;
        phi.rho_wp = rho;
        psi.validate()?;
        phi.validate()?;
        let model = build_model(&psi, &phi, retail_rate)?;
        let sys = &model.system;
        let general = solve_general(sys, a)?;
        let proxy = solve_general(&sys.independence_proxy(), a)?;
        let utility_general = utility_value(sys, &general.x_p, &general.x_w, a);
        let utility_proxy = utility_value(sys, &proxy.x_p, &proxy.x_w, a);
        let (mean_general, variance_general) =
            crate::moments::hedged_mean_variance(sys, &general.x_p, &general.x_w);
        let (mean_proxy, variance_proxy) =
            crate::moments::hedged_mean_variance(sys, &proxy.x_p, &proxy.x_w);
        records.push(CorrelationRecord {
            rho_wp: rho,
            general,
            proxy,
            utility_general,
            utility_proxy,
            mean_general,
            variance_general,
            mean_proxy,
            variance_proxy,
        });
    }
    Ok(records)
}

/// Which marginal's standard deviation a volatility sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Price,
    Weather,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Price => "price",
            SweepAxis::Weather => "weather",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = HedgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "price" => Ok(SweepAxis::Price),
            "weather" => Ok(SweepAxis::Weather),
            other => Err(HedgeError::InvalidParameter(format!(
                "unknown sweep axis {other:?}; expected price or weather"
            ))),
        }
    }
}

/// One volatility-sweep setting with the supports the claims live on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolatilityRecord {
    pub sigma: f64,
    pub solution: HedgeSolution,
    pub price_support: Vec<f64>,
    pub weather_support: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// Re-discretizes with the chosen axis's standard deviation replaced (in
/// both measures, so the pricing measure keeps the same vols as the
/// real-world one) and solves at each sigma. Correlations are left at the
/// base spec's values.
pub fn volatility_sweep(
    psi_spec: &GaussianSpec,
    phi_spec: &GaussianSpec,
    sigma_values: &[f64],
    axis: SweepAxis,
    a: f64,
    retail_rate: f64,
) -> Result<Vec<VolatilityRecord>, HedgeError> {
    let mut records = Vec::with_capacity(sigma_values.len());
    for &sigma in sigma_values {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(HedgeError::InvalidParameter(format!(
                "volatility must be positive and finite, got {sigma}"
            )));
        }
        let mut psi = psi_spec.clone();
        let mut phi = phi_spec.clone();
        match axis {
            SweepAxis::Price => {
                psi.sd_log_price = sigma;
                phi.sd_log_price = sigma;
            }
            SweepAxis::Weather => {
                psi.sd_weather = sigma;
                phi.sd_weather = sigma;
            }
        }
        psi.validate()?;
        phi.validate()?;
        let model = build_model(&psi, &phi, retail_rate)?;
        let solution = solve_general(&model.system, a)?;
        let (mean, variance) =
            crate::moments::hedged_mean_variance(&model.system, &solution.x_p, &solution.x_w);
        records.push(VolatilityRecord {
            sigma,
            solution,
            price_support: model.psi.grid().prices().to_vec(),
            weather_support: model.psi.grid().weather().to_vec(),
            mean,
            variance,
        });
    }
    Ok(records)
}
