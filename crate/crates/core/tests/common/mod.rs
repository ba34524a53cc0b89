//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles deliberately avoid the library's solution path: the
//! brute-force maximizer eliminates the cost constraints with an explicit
//! null-space basis and solves the unconstrained concave quadratic, and the
//! moment oracle enumerates the scenario table directly.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mvhedge::distributions::{GaussianSpec, RealWorldMeasure, RiskNeutralMeasure, ScenarioGrid};
use mvhedge::moments::{assemble_system, profit, HedgeSystem};
use mvhedge::solver::ClaimPair;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real-world parameters of the benchmark retailer: lognormal price and
/// quantity, normal weather index, with configurable weather-price coupling.
pub fn benchmark_real_world_spec(points: usize, rho_wp: f64) -> GaussianSpec {
    GaussianSpec {
        mean_log_price: 4.15,
        sd_log_price: 0.65,
        mean_log_quantity: 7.99,
        sd_log_quantity: 0.20,
        mean_weather: 50.5,
        sd_weather: 43.5,
        rho_pq: 0.40,
        rho_wq: 0.65,
        rho_wp,
        grid_points: points,
    }
}

/// Pricing-measure parameters of the benchmark: shifted price and weather
/// locations, same volatilities.
pub fn benchmark_pricing_spec(points: usize, rho_wp: f64) -> GaussianSpec {
    GaussianSpec {
        mean_log_price: 4.40,
        sd_log_price: 0.65,
        mean_log_quantity: 0.0,
        sd_log_quantity: 1.0,
        mean_weather: 54.6,
        sd_weather: 43.5,
        rho_pq: 0.0,
        rho_wq: 0.0,
        rho_wp,
        grid_points: points,
    }
}

/// Benchmark retail rate per MWh.
pub const BENCHMARK_RETAIL_RATE: f64 = 120.0;

/// A randomly drawn discrete market instance.
pub struct RandomInstance {
    pub psi: RealWorldMeasure,
    pub phi: RiskNeutralMeasure,
    pub system: HedgeSystem,
    pub retail_rate: f64,
}

fn random_support(rng: &mut ChaCha8Rng, len: usize, start: (f64, f64), step: (f64, f64)) -> Vec<f64> {
    let mut values = Vec::with_capacity(len);
    let mut current = rng.random_range(start.0..start.1);
    for _ in 0..len {
        values.push(current);
        current += rng.random_range(step.0..step.1);
    }
    values
}

/// Draws an instance with n, m in 2..=5 prices/weather levels, 2..=4
/// quantity levels, strictly positive scenario probabilities, and a pricing
/// measure unrelated to the real-world one.
pub fn random_instance(rng: &mut ChaCha8Rng) -> RandomInstance {
    let n = rng.random_range(2..=5);
    let l = rng.random_range(2..=4);
    let m = rng.random_range(2..=5);

    let prices = random_support(rng, n, (50.0, 80.0), (5.0, 30.0));
    let quantities = random_support(rng, l, (5.0, 20.0), (2.0, 15.0));
    let weather = random_support(rng, m, (-20.0, 0.0), (5.0, 25.0));
    let grid = ScenarioGrid::new(prices, quantities, weather).expect("valid random grid");

    let mut probs: Vec<f64> = (0..grid.len())
        .map(|_| rng.random_range(0.05..1.0))
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let psi = RealWorldMeasure::new(grid, probs).expect("valid random measure");

    let price_marginal = random_marginal(rng, n);
    let weather_marginal = random_marginal(rng, m);
    let phi = RiskNeutralMeasure::new(
        psi.grid().prices().to_vec(),
        psi.grid().weather().to_vec(),
        price_marginal,
        weather_marginal,
    )
    .expect("valid random pricing measure");

    let retail_rate = rng.random_range(80.0..160.0);
    let system = assemble_system(&psi, &phi, retail_rate).expect("assembly succeeds");
    RandomInstance {
        psi,
        phi,
        system,
        retail_rate,
    }
}

/// Same instance family but with the pricing measure equal to the
/// real-world marginals.
pub fn random_self_priced_instance(rng: &mut ChaCha8Rng) -> RandomInstance {
    let base = random_instance(rng);
    let phi = RiskNeutralMeasure::from_real_world(&base.psi);
    let system = assemble_system(&base.psi, &phi, base.retail_rate).expect("assembly succeeds");
    RandomInstance {
        psi: base.psi,
        phi,
        system,
        retail_rate: base.retail_rate,
    }
}

fn random_marginal(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut values: Vec<f64> = (0..len).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = values.iter().sum();
    for v in &mut values {
        *v /= total;
    }
    values
}

// ---------------------------------------------------------------------------
// Brute-force optimizer (independent oracle)
// ---------------------------------------------------------------------------

/// Null-space basis of a single budget constraint b'x = 0: columns
/// e_i - (b_i / b_last) e_last for i < len - 1.
fn constraint_null_basis(b: &[f64]) -> DMatrix<f64> {
    let len = b.len();
    let last = b[len - 1];
    let mut z = DMatrix::zeros(len, len - 1);
    for i in 0..len - 1 {
        z[(i, i)] = 1.0;
        z[(len - 1, i)] = -b[i] / last;
    }
    z
}

/// Stacked null-space basis of both cost constraints.
pub fn feasible_basis(sys: &HedgeSystem) -> DMatrix<f64> {
    let n = sys.n_prices();
    let m = sys.n_weather();
    let zp = constraint_null_basis(sys.b_p.as_slice());
    let zw = constraint_null_basis(sys.b_w.as_slice());
    let mut z = DMatrix::zeros(n + m, n - 1 + m - 1);
    z.view_mut((0, 0), (n, n - 1)).copy_from(&zp);
    z.view_mut((n, n - 1), (m, m - 1)).copy_from(&zw);
    z
}

/// Maximizes the hedging objective by eliminating the constraints: solves
/// the reduced normal equations 2a (Z' M Z) t = Z' (d + 2a c) and lifts
/// x = Z t back. Completely independent of the library's stacked solve.
pub fn brute_force_claims(sys: &HedgeSystem, a: f64) -> ClaimPair {
    let z = feasible_basis(sys);
    let h = 2.0 * a * (z.transpose() * sys.stacked_m() * &z);
    let rhs = z.transpose() * (sys.stacked_d() + 2.0 * a * sys.stacked_c());
    let t = match h.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => h
            .full_piv_lu()
            .solve(&rhs)
            .expect("reduced system is nonsingular"),
    };
    let x = z * t;
    let n = sys.n_prices();
    let m = sys.n_weather();
    ClaimPair {
        price: x.rows(0, n).iter().copied().collect(),
        weather: x.rows(n, m).iter().copied().collect(),
    }
}

/// A random zero-cost claim pair with coefficients in [-scale, scale].
pub fn random_feasible_claim(rng: &mut ChaCha8Rng, sys: &HedgeSystem, scale: f64) -> ClaimPair {
    let z = feasible_basis(sys);
    let t = DVector::from_fn(z.ncols(), |_, _| rng.random_range(-scale..scale));
    let x = z * t;
    let n = sys.n_prices();
    let m = sys.n_weather();
    ClaimPair {
        price: x.rows(0, n).iter().copied().collect(),
        weather: x.rows(n, m).iter().copied().collect(),
    }
}

// ---------------------------------------------------------------------------
// Scenario-table moment oracle
// ---------------------------------------------------------------------------

/// Mean and variance of hedged profit by direct enumeration of the
/// scenario table, bypassing the moment system entirely.
pub fn enumerated_mean_var(
    psi: &RealWorldMeasure,
    retail_rate: f64,
    x_p: &[f64],
    x_w: &[f64],
) -> (f64, f64) {
    let grid = psi.grid();
    let (n, l, m) = grid.dims();
    let mut mean = 0.0;
    let mut second = 0.0;
    for i in 0..n {
        for j in 0..l {
            for k in 0..m {
                let value = profit(grid.prices()[i], grid.quantities()[j], retail_rate)
                    + x_p[i]
                    + x_w[k];
                let p = psi.prob(i, j, k);
                mean += p * value;
                second += p * value * value;
            }
        }
    }
    (mean, second - mean * mean)
}

/// Mean-variance utility by direct enumeration.
pub fn enumerated_utility(
    psi: &RealWorldMeasure,
    retail_rate: f64,
    x_p: &[f64],
    x_w: &[f64],
    a: f64,
) -> f64 {
    let (mean, var) = enumerated_mean_var(psi, retail_rate, x_p, x_w);
    mean - a * var
}

// ---------------------------------------------------------------------------
// Comparison helpers
// ---------------------------------------------------------------------------

/// Max absolute difference between two claim pairs, and the claim scale the
/// difference should be judged against (max(1, largest entry)).
pub fn claim_distance_and_scale(a: &ClaimPair, b: &ClaimPair) -> (f64, f64) {
    let mut dist = 0.0_f64;
    let mut scale = 1.0_f64;
    for (x, y) in a.price.iter().zip(&b.price).chain(a.weather.iter().zip(&b.weather)) {
        dist = dist.max((x - y).abs());
        scale = scale.max(x.abs()).max(y.abs());
    }
    (dist, scale)
}

/// Max absolute entry across both claims, floored at 1.
pub fn claim_scale(claims: &ClaimPair) -> f64 {
    claims
        .price
        .iter()
        .chain(&claims.weather)
        .fold(1.0_f64, |acc, v| acc.max(v.abs()))
}

/// Piecewise-linear interpolation of (xs, ys) at x; xs strictly increasing
/// and x inside [xs[0], xs[last]].
pub fn linear_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    assert!(x >= xs[0] - 1e-9 && x <= xs[xs.len() - 1] + 1e-9, "x out of range");
    if x <= xs[0] {
        return ys[0];
    }
    for i in 1..xs.len() {
        if x <= xs[i] {
            let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            return ys[i - 1] + t * (ys[i] - ys[i - 1]);
        }
    }
    ys[ys.len() - 1]
}
