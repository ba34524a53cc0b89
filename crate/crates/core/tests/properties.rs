//! Randomized invariant checks over the whole pipeline: discretized
//! measures are proper distributions, assembled moment systems have the
//! indicator-covariance structure, general solutions satisfy first-order
//! and budget conditions and split into the two funds, frontier moments
//! are affine in u and u^2 for u = 1/2a with a shared slope, profit
//! distributions and quantiles behave like an exact CDF inverse, and the
//! CSV number format round-trips within its significant-digit budget.

mod common;

use approx::assert_relative_eq;
use mvhedge::analytics::{quantiles, ProfitDistribution, Strategy as HedgeStrategy};
use mvhedge::distributions::{
    discretize_real_world, GaussianSpec, RealWorldMeasure, RiskNeutralMeasure, ScenarioGrid,
};
use mvhedge::frontier::{claims_at, frontier_sweep};
use mvhedge::moments::{assemble_system, HedgeSystem};
use mvhedge::report::{format_significant, CSV_SIGNIFICANT_DIGITS};
use mvhedge::solver::{solve_general, solve_independent, two_fund_basis, verify_foc};
use mvhedge::tolerances::{COST_RESIDUAL_TOL, INDEPENDENCE_MAX_CROSS_MOMENT};
use proptest::prelude::*;

/// Strictly increasing axis: a start value plus positive steps.
fn increasing_axis(
    len: usize,
    start: std::ops::Range<f64>,
    max_step: f64,
) -> impl Strategy<Value = Vec<f64>> {
    (start, prop::collection::vec(0.1..max_step, len - 1)).prop_map(|(first, steps)| {
        let mut axis = vec![first];
        for step in steps {
            axis.push(axis.last().unwrap() + step);
        }
        axis
    })
}

/// Positive weights normalized to sum to 1.
fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, len).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / total).collect()
    })
}

/// Raw parts of a randomly drawn hedging instance. Kept as plain vectors so
/// proptest can shrink them; [`RawInstance::system`] assembles the moments.
#[derive(Debug, Clone)]
struct RawInstance {
    prices: Vec<f64>,
    quantities: Vec<f64>,
    weather: Vec<f64>,
    probs: Vec<f64>,
    phi_price: Vec<f64>,
    phi_weather: Vec<f64>,
    retail_rate: f64,
}

fn instances() -> impl Strategy<Value = RawInstance> {
    (2usize..=4, 1usize..=3, 2usize..=4).prop_flat_map(|(n, ell, m)| {
        (
            increasing_axis(n, 40.0..90.0, 40.0),
            increasing_axis(ell, 5.0..15.0, 15.0),
            increasing_axis(m, -10.0..10.0, 20.0),
            weights(n * ell * m),
            weights(n),
            weights(m),
            80.0f64..160.0,
        )
            .prop_map(
                |(prices, quantities, weather, probs, phi_price, phi_weather, retail_rate)| {
                    RawInstance {
                        prices,
                        quantities,
                        weather,
                        probs,
                        phi_price,
                        phi_weather,
                        retail_rate,
                    }
                },
            )
    })
}

impl RawInstance {
    fn measures(&self) -> (RealWorldMeasure, RiskNeutralMeasure) {
        let grid = ScenarioGrid::new(
            self.prices.clone(),
            self.quantities.clone(),
            self.weather.clone(),
        )
        .unwrap();
        let psi = RealWorldMeasure::new(grid, self.probs.clone()).unwrap();
        let phi = RiskNeutralMeasure::new(
            self.prices.clone(),
            self.weather.clone(),
            self.phi_price.clone(),
            self.phi_weather.clone(),
        )
        .unwrap();
        (psi, phi)
    }

    fn system(&self) -> HedgeSystem {
        let (psi, phi) = self.measures();
        assemble_system(&psi, &phi, self.retail_rate).unwrap()
    }
}

fn gaussian_specs() -> impl Strategy<Value = GaussianSpec> {
    (
        2.0f64..5.0,
        0.1f64..0.9,
        4.0f64..9.0,
        0.05f64..0.5,
        -20.0f64..60.0,
        5.0f64..50.0,
        -0.7f64..0.7,
        -0.7f64..0.7,
        -0.7f64..0.7,
        3usize..=7,
    )
        .prop_map(
            |(
                mean_log_price,
                sd_log_price,
                mean_log_quantity,
                sd_log_quantity,
                mean_weather,
                sd_weather,
                rho_pq,
                rho_wq,
                rho_wp,
                grid_points,
            )| GaussianSpec {
                mean_log_price,
                sd_log_price,
                mean_log_quantity,
                sd_log_quantity,
                mean_weather,
                sd_weather,
                rho_pq,
                rho_wq,
                rho_wp,
                grid_points,
            },
        )
}

/// Sorted, deduplicated quantile levels strictly inside (0, 1).
fn level_lists() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001f64..0.999, 1..=6).prop_map(|mut levels| {
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
    })
}

proptest! {
    #[test]
    fn discretized_measure_is_a_distribution(spec in gaussian_specs()) {
        prop_assume!(spec.validate().is_ok());
        let psi = discretize_real_world(&spec).unwrap();

        let (n, ell, m) = psi.grid().dims();
        prop_assert_eq!(n, spec.grid_points);
        prop_assert_eq!(ell, spec.grid_points);
        prop_assert_eq!(m, spec.grid_points);
        for axis in [
            psi.grid().prices(),
            psi.grid().quantities(),
            psi.grid().weather(),
        ] {
            prop_assert!(axis.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!(psi.grid().prices().iter().all(|&p| p > 0.0));
        prop_assert!(psi.grid().quantities().iter().all(|&q| q > 0.0));

        let total: f64 = psi.probs().iter().sum();
        prop_assert!(psi.probs().iter().all(|&p| p >= 0.0));
        prop_assert!((total - 1.0).abs() <= 1e-12, "mass {total}");
    }

    #[test]
    fn zero_price_weather_correlation_decouples_the_blocks(
        spec in gaussian_specs(),
    ) {
        let spec = GaussianSpec { rho_wp: 0.0, ..spec };
        prop_assume!(spec.validate().is_ok());
        let psi = discretize_real_world(&spec).unwrap();
        let phi = RiskNeutralMeasure::from_real_world(&psi);
        let sys = assemble_system(&psi, &phi, 120.0).unwrap();

        let stacked = sys.stacked_m();
        let n = sys.n_prices();
        let mut max_cross = 0.0f64;
        for i in 0..n {
            for k in 0..sys.n_weather() {
                max_cross = max_cross.max(stacked[(i, n + k)].abs());
            }
        }
        prop_assert!(
            max_cross <= INDEPENDENCE_MAX_CROSS_MOMENT,
            "max |Mpw| = {max_cross:e}"
        );
        prop_assert!(solve_independent(&sys, 1.0).is_ok());
    }

    #[test]
    fn moment_system_has_indicator_covariance_structure(raw in instances()) {
        let sys = raw.system();
        let stacked = sys.stacked_m();
        let dim = sys.n_prices() + sys.n_weather();
        let scale = stacked.amax().max(1.0);

        let asymmetry = (&stacked - stacked.transpose()).amax();
        prop_assert!(asymmetry <= 1e-14 * scale, "asymmetry {asymmetry:e}");

        // Indicator vectors sum to 1, so every covariance row sums to 0 and
        // so does c = Cov(y, indicators).
        for row in 0..dim {
            let row_sum: f64 = stacked.row(row).iter().sum();
            prop_assert!(row_sum.abs() <= 1e-12 * scale, "row {row} sums to {row_sum:e}");
        }
        let c_sum: f64 = sys.stacked_c().iter().sum();
        prop_assert!(c_sum.abs() <= 1e-12 * sys.stacked_c().amax().max(1.0));

        // The budget weights are the pricing marginals, one unit per block.
        let b = sys.stacked_b();
        let b_price: f64 = b.iter().take(sys.n_prices()).sum();
        let b_weather: f64 = b.iter().skip(sys.n_prices()).sum();
        prop_assert!((b_price - 1.0).abs() <= 1e-12);
        prop_assert!((b_weather - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn covariance_quadratic_form_is_nonnegative(
        raw in instances(),
        direction in prop::collection::vec(-1.0f64..1.0, 14),
    ) {
        let sys = raw.system();
        let stacked = sys.stacked_m();
        let dim = sys.n_prices() + sys.n_weather();
        let x = nalgebra::DVector::from_iterator(
            dim,
            direction.iter().copied().take(dim),
        );
        let form = (x.transpose() * &stacked * &x)[(0, 0)];
        let floor = -1e-10 * stacked.amax().max(1.0) * x.norm_squared();
        prop_assert!(form >= floor, "x'Mx = {form:e}");
    }

    #[test]
    fn general_solution_passes_foc_and_splits_into_two_funds(
        raw in instances(),
        a in 0.05f64..20.0,
    ) {
        let sys = raw.system();
        let sol = solve_general(&sys, a).unwrap();

        let report = verify_foc(&sys, &sol);
        prop_assert!(
            report.passes(),
            "stationarity {:e}, feasibility {:e}",
            report.stationarity,
            report.feasibility
        );
        prop_assert!(sol.cost_residual_p.abs() <= COST_RESIDUAL_TOL);
        prop_assert!(sol.cost_residual_w.abs() <= COST_RESIDUAL_TOL);

        let basis = two_fund_basis(&sys).unwrap();
        let pair = claims_at(&basis, a).unwrap();
        let scale = sol
            .x_p
            .iter()
            .chain(&sol.x_w)
            .fold(1.0f64, |acc, v| acc.max(v.abs()));
        for (direct, spanned) in sol.x_p.iter().zip(&pair.price) {
            assert_relative_eq!(direct, spanned, max_relative = 1e-9, epsilon = 1e-9 * scale);
        }
        for (direct, spanned) in sol.x_w.iter().zip(&pair.weather) {
            assert_relative_eq!(direct, spanned, max_relative = 1e-9, epsilon = 1e-9 * scale);
        }
    }

    #[test]
    fn frontier_moments_share_one_slope_in_u(raw in instances()) {
        let sys = raw.system();
        let a_values = [0.25, 0.8, 2.0, 6.4];
        let points = frontier_sweep(&sys, &a_values).unwrap();
        let u: Vec<f64> = a_values.iter().map(|a| 0.5 / a).collect();

        // mean(u) = mean_inf + u g and var(u) = var_inf + u^2 g, so divided
        // differences of the mean in u and of the variance in u^2 all
        // recover the same nonnegative slope g.
        let mut slopes = Vec::new();
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                slopes.push((points[i].mean - points[j].mean) / (u[i] - u[j]));
                slopes.push(
                    (points[i].variance - points[j].variance) / (u[i] * u[i] - u[j] * u[j]),
                );
            }
        }
        let g = slopes[0];
        let tol = 1e-8 * g.abs().max(1.0);
        for slope in &slopes {
            prop_assert!((slope - g).abs() <= tol, "slopes {slopes:?}");
        }
        prop_assert!(g >= -1e-10 * g.abs().max(1.0), "negative slope {g:e}");
    }

    #[test]
    fn profit_distribution_preserves_mass_and_moments(
        pairs in (2usize..=40).prop_flat_map(|len| {
            (prop::collection::vec(-1e6f64..1e6, len), weights(len))
        }),
    ) {
        let (values, probs) = pairs;
        let direct_mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
        let direct_var: f64 = values
            .iter()
            .zip(&probs)
            .map(|(v, p)| p * (v - direct_mean).powi(2))
            .sum();
        let range = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));

        let dist = ProfitDistribution::from_outcomes(
            HedgeStrategy::NoHedge,
            values.iter().copied().zip(probs.iter().copied()).collect(),
        )
        .unwrap();

        let outcomes = dist.outcomes();
        prop_assert!(outcomes.windows(2).all(|w| w[0].value < w[1].value));
        prop_assert!(outcomes.iter().all(|o| o.probability > 0.0));
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);

        assert_relative_eq!(
            dist.mean(),
            direct_mean,
            max_relative = 1e-9,
            epsilon = 1e-9 * range.max(1.0)
        );
        assert_relative_eq!(
            dist.variance(),
            direct_var,
            max_relative = 1e-9,
            epsilon = 1e-9 * range.max(1.0).powi(2)
        );
    }

    #[test]
    fn quantiles_invert_the_cdf(
        pairs in (2usize..=40).prop_flat_map(|len| {
            (prop::collection::vec(-1e6f64..1e6, len), weights(len))
        }),
        levels in level_lists(),
    ) {
        let (values, probs) = pairs;
        let dist = ProfitDistribution::from_outcomes(
            HedgeStrategy::NoHedge,
            values.into_iter().zip(probs).collect(),
        )
        .unwrap();
        let qs = quantiles(&dist, &levels).unwrap();

        prop_assert!(qs.windows(2).all(|w| w[0] <= w[1]));
        for (&level, &q) in levels.iter().zip(&qs) {
            let idx = dist
                .outcomes()
                .iter()
                .position(|o| o.value == q)
                .expect("quantile must be an outcome value");
            let cdf_at: f64 = dist.outcomes()[..=idx].iter().map(|o| o.probability).sum();
            prop_assert!(cdf_at >= level, "cdf {cdf_at} below level {level}");
            if idx > 0 {
                let cdf_before: f64 =
                    dist.outcomes()[..idx].iter().map(|o| o.probability).sum();
                prop_assert!(cdf_before < level, "not the smallest value at {level}");
            }
        }
    }

    #[test]
    fn measure_json_round_trips(raw in instances()) {
        let (psi, phi) = raw.measures();
        prop_assert_eq!(
            RealWorldMeasure::from_json(&psi.to_json()).unwrap(),
            psi
        );
        prop_assert_eq!(
            RiskNeutralMeasure::from_json(&phi.to_json()).unwrap(),
            phi
        );
    }

    #[test]
    fn csv_numbers_keep_six_significant_digits(
        value in prop_oneof![
            -1e9f64..1e9,
            -1e-3f64..1e-3,
            Just(0.0),
        ],
    ) {
        let text = format_significant(value, CSV_SIGNIFICANT_DIGITS);
        prop_assert!(!text.contains('e') && !text.contains('E'), "{text}");
        let parsed: f64 = text.parse().unwrap();
        if value == 0.0 {
            prop_assert_eq!(parsed, 0.0);
        } else {
            let rel = ((parsed - value) / value).abs();
            prop_assert!(rel <= 5.1e-6, "{value} -> {text} (rel {rel:e})");
        }
    }
}
