//! Pipelines behind each CLI mode. Every run writes its artifacts under the
//! configured output directory and finishes with a `manifest.json` mapping
//! each relative path to its sha256 checksum, so reruns can be compared
//! byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mvhedge::analytics::{
    build_model, correlation_sweep, hedged_profit_distribution, quantiles, strategy_solution,
    volatility_sweep, ScenarioModel, Strategy, SweepAxis,
};
use mvhedge::distributions::{
    discretize_real_world, discretize_risk_neutral_on, GaussianSpec, RealWorldMeasure,
    RiskNeutralMeasure,
};
use mvhedge::frontier::{claims_at, frontier_sweep, weakly_dominates, FrontierPoint};
use mvhedge::moments::{assemble_system, hedged_mean_variance, utility_value, HedgeSystem};
use mvhedge::report::{
    claim_range, claims_csv, correlation_summary_csv, distribution_csv, format_significant,
    frontier_csv, matrix_csv, quantile_table_csv, solution_json, volatility_summary_csv,
    CSV_SIGNIFICANT_DIGITS,
};
use mvhedge::solver::{two_fund_basis, verify_foc, HedgeSolution};
use mvhedge::tolerances::{COST_RESIDUAL_TOL, FOC_RELATIVE_TOL};
use sha2::{Digest, Sha256};

use crate::config::{
    default_pricing_spec, default_real_world_spec, Mode, RunConfig, Source, DEFAULT_A_SWEEP,
    DEFAULT_GRID_POINTS, DEFAULT_QUANTILE_LEVELS, DEFAULT_RETAIL_RATE, DEFAULT_RHO_VALUES,
    DEFAULT_SIGMA_VALUES,
};
use crate::error::CliError;

const STUDY_RISK_AVERSION: f64 = 1.0;
const STUDY_RESOLUTIONS: [usize; 4] = [8, 10, 13, 17];
/// Levels checked for strategy ordering in the summary: the defaults up to
/// and including 17.5%.
const ORDERED_LEVEL_COUNT: usize = 8;
const PROXY_MATCH_RTOL: f64 = 1e-8;
const DOMINANCE_MEAN_RTOL: f64 = 1e-6;
const UTILITY_TIE_RTOL: f64 = 1e-9;

/// Runs the configured mode and returns the artifact paths, manifest last.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut sink = ArtifactSink::new(&config.output_dir)?;
    match config.mode {
        Mode::Solve => run_solve(config, &mut sink)?,
        Mode::Frontier => run_frontier(config, &mut sink)?,
        Mode::Quantiles => run_quantiles(config, &mut sink)?,
        Mode::RhoSweep => run_rho_sweep(config, &mut sink)?,
        Mode::SigmaSweep => run_sigma_sweep(config, &mut sink)?,
        Mode::ReproducePaper => reproduce_paper(config, &mut sink)?,
    }
    sink.finish()
}

// ---------------------------------------------------------------------------
// Artifact sink
// ---------------------------------------------------------------------------

struct ArtifactSink {
    root: PathBuf,
    checksums: BTreeMap<String, String>,
    written: Vec<PathBuf>,
}

impl ArtifactSink {
    fn new(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| {
            CliError::Config(format!(
                "cannot create output directory {}: {e}",
                root.display()
            ))
        })?;
        Ok(ArtifactSink {
            root: root.to_path_buf(),
            checksums: BTreeMap::new(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, relative: &str, contents: &str) -> Result<(), CliError> {
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| {
                CliError::Config(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
        let mut text = contents.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        fs::write(&path, &text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        let digest = Sha256::digest(text.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.checksums.insert(relative.to_string(), hex);
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(())
    }

    fn finish(mut self) -> Result<Vec<PathBuf>, CliError> {
        let path = self.root.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&self.checksums)
            .map_err(|e| CliError::Config(format!("cannot encode manifest: {e}")))?;
        text.push('\n');
        fs::write(&path, &text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        log::info!("wrote {}", path.display());
        self.written.push(path);
        Ok(self.written)
    }
}

// ---------------------------------------------------------------------------
// Model resolution
// ---------------------------------------------------------------------------

fn load_spec(path: &Path) -> Result<GaussianSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read spec {}: {e}", path.display())))?;
    GaussianSpec::from_json(&text)
        .map_err(|e| CliError::Config(format!("spec {}: {e}", path.display())))
}

fn resolve_model(config: &RunConfig) -> Result<ScenarioModel, CliError> {
    let grid_points = config.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    let psi = match &config.psi_source {
        None => discretize_real_world(&default_real_world_spec(0.0, grid_points))?,
        Some(Source::Spec { spec }) => {
            let mut parsed = load_spec(spec)?;
            if let Some(n) = config.grid_points {
                parsed.grid_points = n;
            }
            discretize_real_world(&parsed)?
        }
        Some(Source::Measure { measure }) => {
            let text = fs::read_to_string(measure).map_err(|e| {
                CliError::Config(format!("cannot read measure {}: {e}", measure.display()))
            })?;
            RealWorldMeasure::from_json(&text)
                .map_err(|e| CliError::Config(format!("measure {}: {e}", measure.display())))?
        }
    };
    let phi = match &config.phi_source {
        None => discretize_risk_neutral_on(
            &default_pricing_spec(0.0, grid_points),
            psi.grid().prices(),
            psi.grid().weather(),
        )?,
        Some(Source::Spec { spec }) => {
            let parsed = load_spec(spec)?;
            discretize_risk_neutral_on(&parsed, psi.grid().prices(), psi.grid().weather())?
        }
        Some(Source::Measure { measure }) => {
            let text = fs::read_to_string(measure).map_err(|e| {
                CliError::Config(format!("cannot read measure {}: {e}", measure.display()))
            })?;
            RiskNeutralMeasure::from_json(&text)
                .map_err(|e| CliError::Config(format!("measure {}: {e}", measure.display())))?
        }
    };
    let system = assemble_system(&psi, &phi, config.retail_rate)?;
    Ok(ScenarioModel {
        psi,
        phi,
        system,
        retail_rate: config.retail_rate,
    })
}

/// Specs for modes that re-discretize per setting; measure files cannot be
/// swept, so both sources must be parametric.
fn resolve_specs(
    config: &RunConfig,
    default_rho_wp: f64,
) -> Result<(GaussianSpec, GaussianSpec), CliError> {
    let grid_points = config.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    let reject = || {
        CliError::Config(
            "parameter sweeps re-discretize the model at each setting, so both sources must be \
             Gaussian specs, not measure files"
                .to_string(),
        )
    };
    let psi = match &config.psi_source {
        None => default_real_world_spec(default_rho_wp, grid_points),
        Some(Source::Spec { spec }) => {
            let mut parsed = load_spec(spec)?;
            if let Some(n) = config.grid_points {
                parsed.grid_points = n;
            }
            parsed
        }
        Some(Source::Measure { .. }) => return Err(reject()),
    };
    let phi = match &config.phi_source {
        None => default_pricing_spec(default_rho_wp, grid_points),
        Some(Source::Spec { spec }) => {
            let mut parsed = load_spec(spec)?;
            if let Some(n) = config.grid_points {
                parsed.grid_points = n;
            }
            parsed
        }
        Some(Source::Measure { .. }) => return Err(reject()),
    };
    Ok((psi, phi))
}

// ---------------------------------------------------------------------------
// Single-model modes
// ---------------------------------------------------------------------------

fn run_solve(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    let model = resolve_model(config)?;
    let grid = model.psi.grid();
    for &strategy in &config.strategies {
        let Some(sol) = strategy_solution(&model.system, strategy, config.risk_aversion)? else {
            continue;
        };
        sink.write(
            &format!("claims_{}.csv", strategy.name()),
            &claims_csv(grid.prices(), &sol.x_p, grid.weather(), &sol.x_w),
        )?;
        sink.write(
            &format!("solution_{}.json", strategy.name()),
            &solution_json(&sol)?,
        )?;
    }
    dump_matrices(config, &model.system, sink)
}

fn run_frontier(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    let model = resolve_model(config)?;
    let points = frontier_sweep(&model.system, &config.a_sweep)?;
    sink.write("frontier.csv", &frontier_csv(&points))?;
    dump_matrices(config, &model.system, sink)
}

fn run_quantiles(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    let model = resolve_model(config)?;
    let mut columns = Vec::new();
    for &strategy in &config.strategies {
        let sol = strategy_solution(&model.system, strategy, config.risk_aversion)?;
        let dist =
            hedged_profit_distribution(&model.psi, model.retail_rate, sol.as_ref(), strategy)?;
        columns.push((strategy, quantiles(&dist, &config.quantile_levels)?));
    }
    sink.write(
        "quantiles.csv",
        &quantile_table_csv(&config.quantile_levels, &columns),
    )?;
    dump_matrices(config, &model.system, sink)
}

fn dump_matrices(
    config: &RunConfig,
    sys: &HedgeSystem,
    sink: &mut ArtifactSink,
) -> Result<(), CliError> {
    if !config.dump_matrices {
        return Ok(());
    }
    sink.write("m.csv", &matrix_csv(&sys.stacked_m()))?;
    sink.write("c.csv", &vector_csv(sys.stacked_c().as_slice()))?;
    sink.write("d.csv", &vector_csv(sys.stacked_d().as_slice()))?;
    sink.write("b.csv", &vector_csv(sys.stacked_b().as_slice()))?;
    Ok(())
}

fn vector_csv(values: &[f64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// Sweep modes
// ---------------------------------------------------------------------------

fn run_rho_sweep(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    let (psi_spec, phi_spec) = resolve_specs(config, 0.0)?;
    let records = correlation_sweep(
        &psi_spec,
        &phi_spec,
        &config.rho_values,
        config.risk_aversion,
        config.retail_rate,
    )?;
    sink.write("correlation_summary.csv", &correlation_summary_csv(&records))?;
    // Supports depend only on the marginal means and sds, so one
    // discretization serves every correlation.
    let support = discretize_real_world(&psi_spec)?;
    let prices = support.grid().prices();
    let weather = support.grid().weather();
    for (i, rec) in records.iter().enumerate() {
        sink.write(
            &format!("claims_general_rho{i}.csv"),
            &claims_csv(prices, &rec.general.x_p, weather, &rec.general.x_w),
        )?;
        sink.write(
            &format!("claims_proxy_rho{i}.csv"),
            &claims_csv(prices, &rec.proxy.x_p, weather, &rec.proxy.x_w),
        )?;
    }
    Ok(())
}

fn run_sigma_sweep(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    let (psi_spec, phi_spec) = resolve_specs(config, 0.75)?;
    let records = volatility_sweep(
        &psi_spec,
        &phi_spec,
        &config.sigma_values,
        config.sigma_axis,
        config.risk_aversion,
        config.retail_rate,
    )?;
    sink.write("volatility_summary.csv", &volatility_summary_csv(&records))?;
    for (i, rec) in records.iter().enumerate() {
        sink.write(
            &format!("claims_sigma{i}.csv"),
            &claims_csv(
                &rec.price_support,
                &rec.solution.x_p,
                &rec.weather_support,
                &rec.solution.x_w,
            ),
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Benchmark-study reproduction
// ---------------------------------------------------------------------------

/// Reruns the full benchmark study on the built-in models and writes every
/// table plus a pass/fail summary. The bundle is pinned: configured sources
/// and numeric overrides are ignored so two runs are always comparable.
fn reproduce_paper(config: &RunConfig, sink: &mut ArtifactSink) -> Result<(), CliError> {
    if config.psi_source.is_some() || config.phi_source.is_some() {
        log::warn!("reproduce-paper uses the built-in benchmark models; configured sources are ignored");
    }
    let mut report = SummaryReport::default();
    independence_study(sink, &mut report).map_err(|e| e.prefixed("independence study"))?;
    general_study(sink, &mut report).map_err(|e| e.prefixed("general study"))?;
    frontier_study(sink, &mut report).map_err(|e| e.prefixed("frontier study"))?;
    rho_study(sink, &mut report).map_err(|e| e.prefixed("correlation study"))?;
    sigma_study(sink, &mut report).map_err(|e| e.prefixed("volatility study"))?;
    sink.write("summary.txt", &report.render())
}

#[derive(Default)]
struct SummaryReport {
    lines: Vec<String>,
    passed: usize,
    failed: usize,
}

impl SummaryReport {
    fn check(&mut self, label: &str, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.lines
            .push(format!("{}: {label}", if ok { "PASS" } else { "FAIL" }));
    }

    fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push_str(&format!(
            "\n\n{} checks passed, {} failed\n",
            self.passed, self.failed
        ));
        out
    }
}

/// Residual checks for one solved strategy: first-order stationarity of the
/// system it was solved against and both zero-cost constraints.
fn solution_ok(sys: &HedgeSystem, sol: &HedgeSolution, strategy: Strategy) -> bool {
    if sol.cost_residual_p.abs() > COST_RESIDUAL_TOL || sol.cost_residual_w.abs() > COST_RESIDUAL_TOL
    {
        return false;
    }
    match strategy {
        Strategy::NoHedge => true,
        Strategy::PriceAndWeather => verify_foc(sys, sol).passes(),
        Strategy::IndependenceProxy => verify_foc(&sys.independence_proxy(), sol).passes(),
        Strategy::PriceOnly | Strategy::WeatherOnly => {
            let a = sol.risk_aversion;
            let (c, d) = match strategy {
                Strategy::PriceOnly => (&sys.c_p, &sys.d_p),
                _ => (&sys.c_w, &sys.d_w),
            };
            let scale = c
                .iter()
                .zip(d.iter())
                .map(|(c, d)| (2.0 * a * c + d).abs())
                .fold(1.0_f64, f64::max);
            sol.foc_residual <= FOC_RELATIVE_TOL * scale
        }
    }
}

fn independence_study(sink: &mut ArtifactSink, report: &mut SummaryReport) -> Result<(), CliError> {
    let mut residuals_ok = true;
    let mut supports = Vec::new();
    let mut price_claims = Vec::new();
    let mut tails_n10 = Vec::new();

    for &n in &STUDY_RESOLUTIONS {
        let model = build_model(
            &default_real_world_spec(0.0, n),
            &default_pricing_spec(0.0, n),
            DEFAULT_RETAIL_RATE,
        )?;
        let sys = &model.system;
        let mut columns = Vec::new();
        let mut general = None;
        for strategy in [
            Strategy::NoHedge,
            Strategy::PriceOnly,
            Strategy::PriceAndWeather,
        ] {
            let sol = strategy_solution(sys, strategy, STUDY_RISK_AVERSION)?;
            if let Some(s) = &sol {
                residuals_ok &= solution_ok(sys, s, strategy);
            }
            let dist =
                hedged_profit_distribution(&model.psi, model.retail_rate, sol.as_ref(), strategy)?;
            sink.write(
                &format!("independence/distribution_{}_n{n}.csv", strategy.name()),
                &distribution_csv(&dist),
            )?;
            columns.push((strategy, quantiles(&dist, &DEFAULT_QUANTILE_LEVELS)?));
            if strategy == Strategy::PriceAndWeather {
                general = sol;
            }
        }
        sink.write(
            &format!("independence/quantiles_n{n}.csv"),
            &quantile_table_csv(&DEFAULT_QUANTILE_LEVELS, &columns),
        )?;

        let general = general.expect("general strategy always yields a solution");
        sink.write(
            &format!("independence/claims_n{n}.csv"),
            &claims_csv(
                model.psi.grid().prices(),
                &general.x_p,
                model.psi.grid().weather(),
                &general.x_w,
            ),
        )?;
        supports.push(model.psi.grid().prices().to_vec());
        price_claims.push(general.x_p);

        if n == 10 {
            tails_n10 = columns.into_iter().map(|(_, q)| q).collect();
        }
    }

    // Compare successive price claims as functions on the common part of
    // their supports, in the sup norm over an even 201-point grid.
    let lo = supports
        .iter()
        .map(|s| s[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = supports
        .iter()
        .map(|s| s[s.len() - 1])
        .fold(f64::INFINITY, f64::min);
    let eval: Vec<f64> = (0..=200)
        .map(|i| lo + (hi - lo) * i as f64 / 200.0)
        .collect();
    let mut convergence = String::from("pair,distance\n");
    let mut distances = Vec::new();
    for step in 0..STUDY_RESOLUTIONS.len() - 1 {
        let mut sup = 0.0_f64;
        for &p in &eval {
            let coarse = linear_interp(&supports[step], &price_claims[step], p);
            let fine = linear_interp(&supports[step + 1], &price_claims[step + 1], p);
            sup = sup.max((coarse - fine).abs());
        }
        convergence.push_str(&format!(
            "{}->{},{}\n",
            STUDY_RESOLUTIONS[step],
            STUDY_RESOLUTIONS[step + 1],
            format_significant(sup, CSV_SIGNIFICANT_DIGITS)
        ));
        distances.push(sup);
    }
    sink.write("independence/convergence.csv", &convergence)?;

    report.check(
        "price claims converge strictly as the grid refines",
        distances.windows(2).all(|pair| pair[0] > pair[1]),
    );
    let ordered = (0..ORDERED_LEVEL_COUNT).all(|row| {
        tails_n10[0][row] < tails_n10[1][row] && tails_n10[1][row] < tails_n10[2][row]
    });
    report.check(
        "left-tail quantiles order no-hedge < price-only < price-and-weather at 10 nodes",
        ordered,
    );
    report.check(
        "hedging flips the 1% quantile from loss to gain at 10 nodes",
        tails_n10[0][0] < 0.0 && tails_n10[2][0] > 0.0,
    );
    report.check(
        "first-order and zero-cost residuals hold at every independence resolution",
        residuals_ok,
    );
    Ok(())
}

fn general_study(sink: &mut ArtifactSink, report: &mut SummaryReport) -> Result<(), CliError> {
    let model = build_model(
        &default_real_world_spec(0.33, 10),
        &default_pricing_spec(0.33, 10),
        DEFAULT_RETAIL_RATE,
    )?;
    let sys = &model.system;
    let mut residuals_ok = true;
    let mut utility_csv = String::from("strategy,utility,mean,variance\n");
    let mut utilities = Vec::new();
    for strategy in [
        Strategy::NoHedge,
        Strategy::PriceAndWeather,
        Strategy::IndependenceProxy,
    ] {
        let sol = strategy_solution(sys, strategy, STUDY_RISK_AVERSION)?;
        if let Some(s) = &sol {
            residuals_ok &= solution_ok(sys, s, strategy);
        }
        let dist =
            hedged_profit_distribution(&model.psi, model.retail_rate, sol.as_ref(), strategy)?;
        sink.write(
            &format!("general/distribution_{}_n10.csv", strategy.name()),
            &distribution_csv(&dist),
        )?;
        let (x_p, x_w) = match &sol {
            Some(s) => (s.x_p.clone(), s.x_w.clone()),
            None => (vec![0.0; sys.n_prices()], vec![0.0; sys.n_weather()]),
        };
        let utility = utility_value(sys, &x_p, &x_w, STUDY_RISK_AVERSION);
        let sig = |v: f64| format_significant(v, CSV_SIGNIFICANT_DIGITS);
        utility_csv.push_str(&format!(
            "{},{},{},{}\n",
            strategy.name(),
            sig(utility),
            sig(dist.mean()),
            sig(dist.variance())
        ));
        utilities.push((strategy, utility));
    }
    sink.write("general/utility.csv", &utility_csv)?;

    let utility_of = |wanted: Strategy| {
        utilities
            .iter()
            .find(|(s, _)| *s == wanted)
            .map(|(_, u)| *u)
            .expect("strategy solved above")
    };
    report.check(
        "modeling the price-weather correlation beats the independence proxy at rho 0.33",
        utility_of(Strategy::PriceAndWeather) > utility_of(Strategy::IndependenceProxy),
    );
    report.check(
        "first-order and zero-cost residuals hold for the correlated model",
        residuals_ok,
    );
    Ok(())
}

fn frontier_study(sink: &mut ArtifactSink, report: &mut SummaryReport) -> Result<(), CliError> {
    let model = build_model(
        &default_real_world_spec(0.33, 13),
        &default_pricing_spec(0.33, 13),
        DEFAULT_RETAIL_RATE,
    )?;
    let sys = &model.system;
    let general_front = frontier_sweep(sys, &DEFAULT_A_SWEEP)?;
    sink.write("frontier/general.csv", &frontier_csv(&general_front))?;

    // Proxy frontier: claims optimized as if independent, evaluated under
    // the true system.
    let proxy_basis = two_fund_basis(&sys.independence_proxy())?;
    let mut proxy_front = Vec::with_capacity(DEFAULT_A_SWEEP.len());
    for &a in &DEFAULT_A_SWEEP {
        let claims = claims_at(&proxy_basis, a)?;
        let (mean, variance) = hedged_mean_variance(sys, &claims.price, &claims.weather);
        proxy_front.push(FrontierPoint { a, mean, variance });
    }
    sink.write("frontier/proxy.csv", &frontier_csv(&proxy_front))?;

    let mean_scale = general_front
        .iter()
        .chain(&proxy_front)
        .fold(1.0_f64, |acc, p| acc.max(p.mean.abs()));
    report.check(
        "the general frontier weakly dominates the proxy frontier at rho 0.33",
        weakly_dominates(&general_front, &proxy_front, DOMINANCE_MEAN_RTOL * mean_scale),
    );
    Ok(())
}

fn rho_study(sink: &mut ArtifactSink, report: &mut SummaryReport) -> Result<(), CliError> {
    let psi_spec = default_real_world_spec(0.0, 10);
    let phi_spec = default_pricing_spec(0.0, 10);
    let records = correlation_sweep(
        &psi_spec,
        &phi_spec,
        &DEFAULT_RHO_VALUES,
        STUDY_RISK_AVERSION,
        DEFAULT_RETAIL_RATE,
    )?;
    sink.write("rho/summary.csv", &correlation_summary_csv(&records))?;
    let support = discretize_real_world(&psi_spec)?;
    let prices = support.grid().prices();
    let weather = support.grid().weather();
    for (i, rec) in records.iter().enumerate() {
        sink.write(
            &format!("rho/claims_general_rho{i}.csv"),
            &claims_csv(prices, &rec.general.x_p, weather, &rec.general.x_w),
        )?;
        sink.write(
            &format!("rho/claims_proxy_rho{i}.csv"),
            &claims_csv(prices, &rec.proxy.x_p, weather, &rec.proxy.x_w),
        )?;
    }

    let zero = &records[0];
    let (gap, scale) = claim_gap(&zero.general, &zero.proxy);
    report.check(
        "the proxy coincides with the general solution at rho 0",
        gap <= PROXY_MATCH_RTOL * scale,
    );
    report.check(
        "the proxy never beats the general solution across the correlation sweep",
        records.iter().all(|r| {
            r.utility_general >= r.utility_proxy - UTILITY_TIE_RTOL * r.utility_general.abs().max(1.0)
        }),
    );
    Ok(())
}

fn sigma_study(sink: &mut ArtifactSink, report: &mut SummaryReport) -> Result<(), CliError> {
    let psi_spec = default_real_world_spec(0.75, 10);
    let phi_spec = default_pricing_spec(0.75, 10);
    let records = volatility_sweep(
        &psi_spec,
        &phi_spec,
        &DEFAULT_SIGMA_VALUES,
        SweepAxis::Price,
        STUDY_RISK_AVERSION,
        DEFAULT_RETAIL_RATE,
    )?;
    sink.write("sigma/summary.csv", &volatility_summary_csv(&records))?;
    for (i, rec) in records.iter().enumerate() {
        sink.write(
            &format!("sigma/claims_sigma{i}.csv"),
            &claims_csv(
                &rec.price_support,
                &rec.solution.x_p,
                &rec.weather_support,
                &rec.solution.x_w,
            ),
        )?;
    }

    let first = &records[0];
    let last = &records[records.len() - 1];
    report.check(
        "the price-claim range grows from the lowest to the highest volatility",
        claim_range(&first.solution.x_p) < claim_range(&last.solution.x_p),
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

fn claim_gap(a: &HedgeSolution, b: &HedgeSolution) -> (f64, f64) {
    let gap = a
        .x_p
        .iter()
        .zip(&b.x_p)
        .chain(a.x_w.iter().zip(&b.x_w))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max);
    let scale = a
        .x_p
        .iter()
        .chain(&a.x_w)
        .chain(&b.x_p)
        .chain(&b.x_w)
        .map(|v| v.abs())
        .fold(1.0_f64, f64::max);
    (gap, scale)
}

fn linear_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    for (pair_x, pair_y) in xs.windows(2).zip(ys.windows(2)) {
        if x <= pair_x[1] {
            let t = (x - pair_x[0]) / (pair_x[1] - pair_x[0]);
            return pair_y[0] + t * (pair_y[1] - pair_y[0]);
        }
    }
    ys[ys.len() - 1]
}
