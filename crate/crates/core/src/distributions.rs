//! Scenario grids and the discrete probability measures defined on them.
//!
//! All downstream computation happens on a finite scenario set built from
//! three axes: `n` retail price levels, `l` demand (quantity) levels and `m`
//! weather-index levels. Two measures share that set:
//!
//! * [`RealWorldMeasure`], a joint table `psi(i, j, k)` over price, quantity
//!   and weather, used for expected profit and risk.
//! * [`RiskNeutralMeasure`], marginals `phi_p(i)` and `phi_w(k)` over price
//!   and weather only, used to price contingent claims at zero cost.
//!
//! Measures are either loaded from JSON tables or generated from a
//! [`GaussianSpec`]: price and quantity are lognormal (normal in log
//! coordinates), the weather index is normal and may well be negative, and
//! the three transformed coordinates carry a Gaussian coupling with pairwise
//! correlations `rho_pq`, `rho_wq` and `rho_wp`. Discretization places
//! `grid_points` equally spaced nodes spanning exactly `mu - 3 sigma` to
//! `mu + 3 sigma` per transformed axis, weights nodes by the density value
//! there, and normalizes.
//!
//! The joint table is assembled as the exact bivariate price-weather node
//! table times the conditional quantity weights per (price, weather) cell.
//! This keeps the discrete price-weather dependence identical to the
//! bivariate construction, so `rho_wp = 0` yields an exactly factorizing
//! price-weather marginal instead of one polluted by quantity-axis
//! truncation.

use serde::{Deserialize, Serialize};

use crate::error::HedgeError;
use crate::tolerances::{
    CORRELATION_MIN_DET, MEASURE_CONSTRUCTION_SUM_TOL, MEASURE_INPUT_SUM_TOL,
};

// ---------------------------------------------------------------------------
// Scenario grid
// ---------------------------------------------------------------------------

/// Finite supports for the three scenario axes.
///
/// Prices and quantities are nonnegative levels; the weather axis is an
/// index and may contain negative values. Every axis is strictly increasing.
/// Prices and weather need at least two levels so that claims written on them
/// are meaningful; a single quantity level (deterministic demand) is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGrid {
    prices: Vec<f64>,
    quantities: Vec<f64>,
    weather: Vec<f64>,
}

impl ScenarioGrid {
    /// Builds a grid after checking the axis invariants.
    pub fn new(
        prices: Vec<f64>,
        quantities: Vec<f64>,
        weather: Vec<f64>,
    ) -> Result<Self, HedgeError> {
        check_axis("prices", &prices, 2, true)?;
        check_axis("quantities", &quantities, 1, true)?;
        check_axis("weather", &weather, 2, false)?;
        Ok(Self {
            prices,
            quantities,
            weather,
        })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn quantities(&self) -> &[f64] {
        &self.quantities
    }

    pub fn weather(&self) -> &[f64] {
        &self.weather
    }

    /// Axis lengths as `(n, l, m)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.prices.len(), self.quantities.len(), self.weather.len())
    }

    /// Number of joint scenarios `n * l * m`.
    pub fn len(&self) -> usize {
        self.prices.len() * self.quantities.len() * self.weather.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_axis(
    name: &str,
    values: &[f64],
    min_len: usize,
    nonnegative: bool,
) -> Result<(), HedgeError> {
    if values.len() < min_len {
        return Err(HedgeError::InvalidGrid(format!(
            "{name} axis needs at least {min_len} levels, got {}",
            values.len()
        )));
    }
    for (idx, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(HedgeError::InvalidGrid(format!(
                "{name} axis has non-finite value at index {idx}"
            )));
        }
        if nonnegative && *v < 0.0 {
            return Err(HedgeError::InvalidGrid(format!(
                "{name} axis has negative value {v} at index {idx}"
            )));
        }
    }
    for idx in 1..values.len() {
        if values[idx] <= values[idx - 1] {
            return Err(HedgeError::InvalidGrid(format!(
                "{name} axis is not strictly increasing at index {idx} ({} then {})",
                values[idx - 1],
                values[idx]
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Real-world measure
// ---------------------------------------------------------------------------

/// Joint probability table over (price, quantity, weather) scenarios.
///
/// The table is stored row-major with weather fastest: entry `(i, j, k)`
/// lives at `(i * l + j) * m + k`. The price marginal, weather marginal and
/// price-weather 2-marginal are cached at construction because the moment
/// assembly reads them repeatedly.
#[derive(Debug, Clone, PartialEq)]
pub struct RealWorldMeasure {
    grid: ScenarioGrid,
    probs: Vec<f64>,
    psi_p: Vec<f64>,
    psi_w: Vec<f64>,
    psi_pw: Vec<f64>,
}

impl RealWorldMeasure {
    /// Builds a measure from a user-supplied table, accepting totals within
    /// [`MEASURE_INPUT_SUM_TOL`] of 1.
    pub fn new(grid: ScenarioGrid, probs: Vec<f64>) -> Result<Self, HedgeError> {
        Self::with_tolerance(grid, probs, MEASURE_INPUT_SUM_TOL)
    }

    /// Builds a measure produced by our own discretizers, which must be
    /// normalized to machine precision.
    pub(crate) fn from_normalized(
        grid: ScenarioGrid,
        probs: Vec<f64>,
    ) -> Result<Self, HedgeError> {
        Self::with_tolerance(grid, probs, MEASURE_CONSTRUCTION_SUM_TOL)
    }

    fn with_tolerance(
        grid: ScenarioGrid,
        probs: Vec<f64>,
        sum_tol: f64,
    ) -> Result<Self, HedgeError> {
        let violations = Self::validate_parts(&grid, &probs, sum_tol);
        if !violations.is_empty() {
            return Err(HedgeError::InvalidMeasure(violations.join("; ")));
        }
        let (n, l, m) = grid.dims();
        let mut psi_p = vec![0.0; n];
        let mut psi_w = vec![0.0; m];
        let mut psi_pw = vec![0.0; n * m];
        for i in 0..n {
            for j in 0..l {
                for k in 0..m {
                    let p = probs[(i * l + j) * m + k];
                    psi_p[i] += p;
                    psi_w[k] += p;
                    psi_pw[i * m + k] += p;
                }
            }
        }
        Ok(Self {
            grid,
            probs,
            psi_p,
            psi_w,
            psi_pw,
        })
    }

    /// Report-style validation of raw parts: returns every violated invariant
    /// instead of stopping at the first one. Empty means valid.
    pub fn validate_parts(grid: &ScenarioGrid, probs: &[f64], sum_tol: f64) -> Vec<String> {
        let mut violations = Vec::new();
        if probs.len() != grid.len() {
            violations.push(format!(
                "table has {} entries but the grid has {} scenarios",
                probs.len(),
                grid.len()
            ));
            return violations;
        }
        let mut total = 0.0;
        for (idx, p) in probs.iter().enumerate() {
            if !p.is_finite() {
                violations.push(format!("non-finite probability at flat index {idx}"));
                return violations;
            }
            if *p < 0.0 {
                violations.push(format!("negative probability {p} at flat index {idx}"));
            }
            total += p;
        }
        if (total - 1.0).abs() > sum_tol {
            violations.push(format!(
                "total probability sums to {total} (expected 1 within {sum_tol:e})"
            ));
        }
        violations
    }

    /// Validation report for an already constructed measure. Construction
    /// enforces these invariants, so this is empty unless the measure was
    /// built with a looser tolerance than the caller now wants to check.
    pub fn validation_report(&self) -> Vec<String> {
        Self::validate_parts(&self.grid, &self.probs, MEASURE_INPUT_SUM_TOL)
    }

    pub fn grid(&self) -> &ScenarioGrid {
        &self.grid
    }

    /// Joint probability of scenario `(i, j, k)`.
    pub fn prob(&self, i: usize, j: usize, k: usize) -> f64 {
        let (_, l, m) = self.grid.dims();
        self.probs[(i * l + j) * m + k]
    }

    /// Flat row-major table, weather fastest.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Price marginal `psi_p`.
    pub fn price_marginal(&self) -> &[f64] {
        &self.psi_p
    }

    /// Weather marginal `psi_w`.
    pub fn weather_marginal(&self) -> &[f64] {
        &self.psi_w
    }

    /// Price-weather 2-marginal `psi_pw(i, k)`.
    pub fn price_weather_marginal(&self, i: usize, k: usize) -> f64 {
        let (_, _, m) = self.grid.dims();
        self.psi_pw[i * m + k]
    }

    /// Serializes the measure as a JSON table.
    pub fn to_json(&self) -> String {
        let file = MeasureFile {
            grid: GridFile {
                prices: self.grid.prices.clone(),
                quantities: self.grid.quantities.clone(),
                weather: self.grid.weather.clone(),
            },
            probs: self.probs.clone(),
        };
        serde_json::to_string_pretty(&file).expect("measure serialization cannot fail")
    }

    /// Parses a measure from the JSON table format, validating with the
    /// user-input tolerance.
    pub fn from_json(text: &str) -> Result<Self, HedgeError> {
        let file: MeasureFile = serde_json::from_str(text)
            .map_err(|e| HedgeError::InvalidMeasure(format!("unparseable measure file: {e}")))?;
        let grid = ScenarioGrid::new(file.grid.prices, file.grid.quantities, file.grid.weather)?;
        Self::new(grid, file.probs)
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    grid: GridFile,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    prices: Vec<f64>,
    quantities: Vec<f64>,
    weather: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Risk-neutral measure
// ---------------------------------------------------------------------------

/// Pricing marginals over the price and weather supports.
///
/// Claim pricing only ever needs the two marginals, so no joint table is
/// kept. The supports are stored so that compatibility with a
/// [`RealWorldMeasure`] can be checked exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskNeutralMeasure {
    prices: Vec<f64>,
    weather: Vec<f64>,
    price_marginal: Vec<f64>,
    weather_marginal: Vec<f64>,
}

impl RiskNeutralMeasure {
    /// Builds a risk-neutral measure from user-supplied marginals.
    pub fn new(
        prices: Vec<f64>,
        weather: Vec<f64>,
        price_marginal: Vec<f64>,
        weather_marginal: Vec<f64>,
    ) -> Result<Self, HedgeError> {
        Self::with_tolerance(
            prices,
            weather,
            price_marginal,
            weather_marginal,
            MEASURE_INPUT_SUM_TOL,
        )
    }

    pub(crate) fn from_normalized(
        prices: Vec<f64>,
        weather: Vec<f64>,
        price_marginal: Vec<f64>,
        weather_marginal: Vec<f64>,
    ) -> Result<Self, HedgeError> {
        Self::with_tolerance(
            prices,
            weather,
            price_marginal,
            weather_marginal,
            MEASURE_CONSTRUCTION_SUM_TOL,
        )
    }

    fn with_tolerance(
        prices: Vec<f64>,
        weather: Vec<f64>,
        price_marginal: Vec<f64>,
        weather_marginal: Vec<f64>,
        sum_tol: f64,
    ) -> Result<Self, HedgeError> {
        check_axis("prices", &prices, 2, true)?;
        check_axis("weather", &weather, 2, false)?;
        let violations = Self::validate_parts(
            &prices,
            &weather,
            &price_marginal,
            &weather_marginal,
            sum_tol,
        );
        if !violations.is_empty() {
            return Err(HedgeError::InvalidMeasure(violations.join("; ")));
        }
        Ok(Self {
            prices,
            weather,
            price_marginal,
            weather_marginal,
        })
    }

    /// Report-style validation of raw marginals; empty means valid.
    pub fn validate_parts(
        prices: &[f64],
        weather: &[f64],
        price_marginal: &[f64],
        weather_marginal: &[f64],
        sum_tol: f64,
    ) -> Vec<String> {
        let mut violations = Vec::new();
        for (name, support, marginal) in [
            ("price", prices, price_marginal),
            ("weather", weather, weather_marginal),
        ] {
            if marginal.len() != support.len() {
                violations.push(format!(
                    "{name} marginal has {} entries but the support has {}",
                    marginal.len(),
                    support.len()
                ));
                continue;
            }
            let mut total = 0.0;
            for (idx, p) in marginal.iter().enumerate() {
                if !p.is_finite() {
                    violations.push(format!("non-finite {name} marginal entry at index {idx}"));
                    total = f64::NAN;
                    break;
                }
                if *p < 0.0 {
                    violations.push(format!("negative {name} marginal entry {p} at index {idx}"));
                }
                total += p;
            }
            if total.is_finite() && (total - 1.0).abs() > sum_tol {
                violations.push(format!(
                    "{name} marginal sums to {total} (expected 1 within {sum_tol:e})"
                ));
            }
        }
        violations
    }

    /// Validation report for an already constructed measure.
    pub fn validation_report(&self) -> Vec<String> {
        Self::validate_parts(
            &self.prices,
            &self.weather,
            &self.price_marginal,
            &self.weather_marginal,
            MEASURE_INPUT_SUM_TOL,
        )
    }

    /// Extracts the pricing marginals directly from a real-world measure,
    /// producing the "risk-neutral equals real-world" configuration exactly.
    pub fn from_real_world(psi: &RealWorldMeasure) -> Self {
        Self {
            prices: psi.grid().prices().to_vec(),
            weather: psi.grid().weather().to_vec(),
            price_marginal: psi.price_marginal().to_vec(),
            weather_marginal: psi.weather_marginal().to_vec(),
        }
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn weather(&self) -> &[f64] {
        &self.weather
    }

    /// Pricing marginal `phi_p`.
    pub fn price_marginal(&self) -> &[f64] {
        &self.price_marginal
    }

    /// Pricing marginal `phi_w`.
    pub fn weather_marginal(&self) -> &[f64] {
        &self.weather_marginal
    }

    pub fn to_json(&self) -> String {
        let file = RiskNeutralFile {
            prices: self.prices.clone(),
            weather: self.weather.clone(),
            price_marginal: self.price_marginal.clone(),
            weather_marginal: self.weather_marginal.clone(),
        };
        serde_json::to_string_pretty(&file).expect("measure serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, HedgeError> {
        let file: RiskNeutralFile = serde_json::from_str(text)
            .map_err(|e| HedgeError::InvalidMeasure(format!("unparseable measure file: {e}")))?;
        Self::new(
            file.prices,
            file.weather,
            file.price_marginal,
            file.weather_marginal,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct RiskNeutralFile {
    prices: Vec<f64>,
    weather: Vec<f64>,
    price_marginal: Vec<f64>,
    weather_marginal: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Gaussian scenario specification
// ---------------------------------------------------------------------------

/// Parameters of the lognormal price, lognormal quantity and normal weather
/// model from which scenario measures are discretized.
///
/// | field             | meaning                                    |
/// |-------------------|--------------------------------------------|
/// | `mean_log_price`  | mean of log price                          |
/// | `sd_log_price`    | standard deviation of log price            |
/// | `mean_log_quantity`, `sd_log_quantity` | same for log quantity |
/// | `mean_weather`, `sd_weather` | mean/sd of the weather index     |
/// | `rho_pq`          | correlation of log price and log quantity  |
/// | `rho_wq`          | correlation of weather and log quantity    |
/// | `rho_wp`          | correlation of weather and log price       |
/// | `grid_points`     | nodes per axis (default 100)               |
///
/// A risk-neutral spec only uses the price and weather fields plus `rho_wp`;
/// the quantity fields and `rho_pq`, `rho_wq` have neutral serde defaults so
/// pricing specs can omit them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSpec {
    pub mean_log_price: f64,
    pub sd_log_price: f64,
    #[serde(default)]
    pub mean_log_quantity: f64,
    #[serde(default = "default_unit_sd")]
    pub sd_log_quantity: f64,
    pub mean_weather: f64,
    pub sd_weather: f64,
    #[serde(default)]
    pub rho_pq: f64,
    #[serde(default)]
    pub rho_wq: f64,
    #[serde(default)]
    pub rho_wp: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

fn default_unit_sd() -> f64 {
    1.0
}

fn default_grid_points() -> usize {
    100
}

impl GaussianSpec {
    /// Checks that the parameters describe a usable Gaussian model: finite
    /// means, strictly positive standard deviations, correlations in
    /// [-1, 1] forming a positive semidefinite matrix, and at least two grid
    /// points per axis.
    pub fn validate(&self) -> Result<(), HedgeError> {
        for (name, value) in [
            ("mean_log_price", self.mean_log_price),
            ("mean_log_quantity", self.mean_log_quantity),
            ("mean_weather", self.mean_weather),
        ] {
            if !value.is_finite() {
                return Err(HedgeError::InvalidSpec(format!("{name} is not finite")));
            }
        }
        for (name, value) in [
            ("sd_log_price", self.sd_log_price),
            ("sd_log_quantity", self.sd_log_quantity),
            ("sd_weather", self.sd_weather),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(HedgeError::InvalidSpec(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        for (name, value) in [
            ("rho_pq", self.rho_pq),
            ("rho_wq", self.rho_wq),
            ("rho_wp", self.rho_wp),
        ] {
            if !value.is_finite() || value.abs() > 1.0 {
                return Err(HedgeError::InvalidSpec(format!(
                    "{name} must lie in [-1, 1], got {value}"
                )));
            }
        }
        // With unit diagonal and |rho| <= 1, positive semidefiniteness of the
        // 3x3 correlation matrix reduces to a nonnegative determinant.
        let det = self.correlation_determinant();
        if det < -CORRELATION_MIN_DET {
            return Err(HedgeError::InvalidSpec(format!(
                "correlations (rho_pq={}, rho_wq={}, rho_wp={}) are not positive semidefinite",
                self.rho_pq, self.rho_wq, self.rho_wp
            )));
        }
        if self.grid_points < 2 {
            return Err(HedgeError::InvalidSpec(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            )));
        }
        Ok(())
    }

    fn correlation_determinant(&self) -> f64 {
        1.0 + 2.0 * self.rho_pq * self.rho_wq * self.rho_wp
            - self.rho_pq * self.rho_pq
            - self.rho_wq * self.rho_wq
            - self.rho_wp * self.rho_wp
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, HedgeError> {
        serde_json::from_str(text)
            .map_err(|e| HedgeError::InvalidSpec(format!("unparseable spec file: {e}")))
    }
}

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

/// Standardized node positions: `grid_points` equally spaced values from -3
/// to 3 inclusive.
fn standard_nodes(n: usize) -> Vec<f64> {
    let step = (n - 1) as f64;
    (0..n).map(|i| -3.0 + 6.0 * i as f64 / step).collect()
}

/// Discretizes the real-world trivariate model onto its scenario grid.
///
/// Each transformed axis gets `grid_points` nodes spanning exactly
/// `mu - 3 sigma` to `mu + 3 sigma`; price and quantity nodes are then
/// exponentiated into levels. Probabilities are density values at the nodes,
/// normalized, with the price-weather block built exactly from the bivariate
/// density and quantity attached conditionally per cell.
pub fn discretize_real_world(spec: &GaussianSpec) -> Result<RealWorldMeasure, HedgeError> {
    spec.validate()?;
    let n = spec.grid_points;
    let z = standard_nodes(n);

    let prices: Vec<f64> = z
        .iter()
        .map(|zi| (spec.mean_log_price + spec.sd_log_price * zi).exp())
        .collect();
    let quantities: Vec<f64> = z
        .iter()
        .map(|zj| (spec.mean_log_quantity + spec.sd_log_quantity * zj).exp())
        .collect();
    let weather: Vec<f64> = z
        .iter()
        .map(|zk| spec.mean_weather + spec.sd_weather * zk)
        .collect();
    let grid = ScenarioGrid::new(prices, quantities, weather)?;

    let det_pw = 1.0 - spec.rho_wp * spec.rho_wp;
    if det_pw <= CORRELATION_MIN_DET {
        return Err(HedgeError::InvalidCorrelation(format!(
            "price-weather correlation {} leaves no bivariate density",
            spec.rho_wp
        )));
    }
    // Conditional law of the quantity coordinate given (price, weather):
    // normal with mean alpha * z_p + beta * z_w and variance s2.
    let alpha = (spec.rho_pq - spec.rho_wp * spec.rho_wq) / det_pw;
    let beta = (spec.rho_wq - spec.rho_wp * spec.rho_pq) / det_pw;
    let s2 = 1.0 - (alpha * spec.rho_pq + beta * spec.rho_wq);
    if s2 <= CORRELATION_MIN_DET {
        return Err(HedgeError::InvalidCorrelation(format!(
            "correlations (rho_pq={}, rho_wq={}, rho_wp={}) leave the quantity axis degenerate",
            spec.rho_pq, spec.rho_wq, spec.rho_wp
        )));
    }

    // Bivariate price-weather node weights, normalized over the plane.
    let mut pw = vec![0.0; n * n];
    let mut pw_total = 0.0;
    for (i, zp) in z.iter().enumerate() {
        for (k, zw) in z.iter().enumerate() {
            let quad = (zp * zp - 2.0 * spec.rho_wp * zp * zw + zw * zw) / det_pw;
            let w = (-0.5 * quad).exp();
            pw[i * n + k] = w;
            pw_total += w;
        }
    }

    let mut probs = vec![0.0; n * n * n];
    let mut cond = vec![0.0; n];
    for (i, zp) in z.iter().enumerate() {
        for (k, zw) in z.iter().enumerate() {
            let center = alpha * zp + beta * zw;
            // Work relative to the largest exponent so the cell never
            // underflows to an all-zero row even when the conditional mean
            // sits far outside the grid with a tiny conditional variance;
            // the shift cancels in the normalization.
            let mut peak = f64::NEG_INFINITY;
            for (j, zq) in z.iter().enumerate() {
                let dev = zq - center;
                let e = -0.5 * dev * dev / s2;
                cond[j] = e;
                peak = peak.max(e);
            }
            let mut cond_total = 0.0;
            for w in &mut cond {
                *w = (*w - peak).exp();
                cond_total += *w;
            }
            let cell = pw[i * n + k] / pw_total;
            for j in 0..n {
                probs[(i * n + j) * n + k] = cell * cond[j] / cond_total;
            }
        }
    }

    // One global renormalization absorbs accumulated rounding.
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    RealWorldMeasure::from_normalized(grid, probs)
}

/// Discretizes the risk-neutral bivariate (price, weather) model onto a
/// supplied support, typically the grid of an already discretized real-world
/// measure so that both share scenarios exactly.
pub fn discretize_risk_neutral_on(
    spec: &GaussianSpec,
    prices: &[f64],
    weather: &[f64],
) -> Result<RiskNeutralMeasure, HedgeError> {
    spec.validate()?;
    check_axis("prices", prices, 2, true)?;
    check_axis("weather", weather, 2, false)?;
    if prices.iter().any(|p| *p <= 0.0) {
        return Err(HedgeError::InvalidParameter(
            "price support must be strictly positive to take logs".to_string(),
        ));
    }
    let det = 1.0 - spec.rho_wp * spec.rho_wp;
    if det <= CORRELATION_MIN_DET {
        return Err(HedgeError::InvalidCorrelation(format!(
            "price-weather correlation {} leaves no bivariate density",
            spec.rho_wp
        )));
    }

    let zp: Vec<f64> = prices
        .iter()
        .map(|p| (p.ln() - spec.mean_log_price) / spec.sd_log_price)
        .collect();
    let zw: Vec<f64> = weather
        .iter()
        .map(|w| (w - spec.mean_weather) / spec.sd_weather)
        .collect();

    let n = prices.len();
    let m = weather.len();
    let mut price_marginal = vec![0.0; n];
    let mut weather_marginal = vec![0.0; m];
    let mut total = 0.0;
    for i in 0..n {
        for k in 0..m {
            let quad = (zp[i] * zp[i] - 2.0 * spec.rho_wp * zp[i] * zw[k] + zw[k] * zw[k]) / det;
            let w = (-0.5 * quad).exp();
            price_marginal[i] += w;
            weather_marginal[k] += w;
            total += w;
        }
    }
    if total <= 0.0 || !total.is_finite() {
        return Err(HedgeError::InvalidMeasure(
            "risk-neutral density vanishes on the supplied support".to_string(),
        ));
    }
    for v in &mut price_marginal {
        *v /= total;
    }
    for v in &mut weather_marginal {
        *v /= total;
    }
    RiskNeutralMeasure::from_normalized(
        prices.to_vec(),
        weather.to_vec(),
        price_marginal,
        weather_marginal,
    )
}

/// Discretizes the risk-neutral model on its own grid built from the spec's
/// `mu +/- 3 sigma` span, for standalone use. Pipelines that combine the
/// result with a real-world measure should use
/// [`discretize_risk_neutral_on`] with the shared supports instead.
pub fn discretize_risk_neutral(spec: &GaussianSpec) -> Result<RiskNeutralMeasure, HedgeError> {
    spec.validate()?;
    let z = standard_nodes(spec.grid_points);
    let prices: Vec<f64> = z
        .iter()
        .map(|zi| (spec.mean_log_price + spec.sd_log_price * zi).exp())
        .collect();
    let weather: Vec<f64> = z
        .iter()
        .map(|zk| spec.mean_weather + spec.sd_weather * zk)
        .collect();
    discretize_risk_neutral_on(spec, &prices, &weather)
}
