//! Run configuration assembled from three layers: built-in defaults, an
//! optional JSON config file, and command-line flags, with flags winning
//! over the file.

use std::fs;
use std::path::{Path, PathBuf};

use mvhedge::analytics::{Strategy, SweepAxis};
use mvhedge::distributions::GaussianSpec;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_RETAIL_RATE: f64 = 120.0;
pub const DEFAULT_RISK_AVERSION: f64 = 1.0;
pub const DEFAULT_GRID_POINTS: usize = 100;
pub const DEFAULT_A_SWEEP: [f64; 5] = [0.2, 0.5, 1.0, 2.0, 5.0];
pub const DEFAULT_RHO_VALUES: [f64; 4] = [0.0, 0.13, 0.33, 0.75];
pub const DEFAULT_SIGMA_VALUES: [f64; 4] = [0.1, 0.25, 0.5, 0.72];
pub const DEFAULT_QUANTILE_LEVELS: [f64; 9] = [
    0.01, 0.025, 0.05, 0.075, 0.10, 0.125, 0.15, 0.175, 0.20,
];

/// Pipeline to run, selected by the subcommand or the file's `mode` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    Frontier,
    Quantiles,
    RhoSweep,
    SigmaSweep,
    ReproducePaper,
}

/// Where a measure comes from: a Gaussian spec file to discretize, or an
/// explicit scenario measure file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Spec { spec: PathBuf },
    Measure { measure: PathBuf },
}

/// Raw config file contents; every field optional so partial files work.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<Mode>,
    pub psi_source: Option<Source>,
    pub phi_source: Option<Source>,
    pub retail_rate: Option<f64>,
    pub risk_aversion: Option<f64>,
    pub grid_points: Option<usize>,
    pub strategies: Option<Vec<Strategy>>,
    pub output_dir: Option<PathBuf>,
    pub a_sweep: Option<Vec<f64>>,
    pub rho_values: Option<Vec<f64>>,
    pub sigma_values: Option<Vec<f64>>,
    pub sigma_axis: Option<SweepAxis>,
    pub quantile_levels: Option<Vec<f64>>,
    pub dump_matrices: Option<bool>,
}

/// Values taken from command-line flags; these win over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub risk_aversion: Option<f64>,
    pub grid_points: Option<usize>,
    pub strategies: Vec<Strategy>,
    pub output_dir: Option<PathBuf>,
    pub dump_matrices: bool,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub psi_source: Option<Source>,
    pub phi_source: Option<Source>,
    pub retail_rate: f64,
    pub risk_aversion: f64,
    /// Per-axis node count; `None` keeps each spec file's own value and
    /// means [`DEFAULT_GRID_POINTS`] for the built-in specs.
    pub grid_points: Option<usize>,
    pub strategies: Vec<Strategy>,
    pub output_dir: PathBuf,
    pub a_sweep: Vec<f64>,
    pub rho_values: Vec<f64>,
    pub sigma_values: Vec<f64>,
    pub sigma_axis: SweepAxis,
    pub quantile_levels: Vec<f64>,
    pub dump_matrices: bool,
}

impl RunConfig {
    /// Layers defaults, the optional config file, and flag overrides, then
    /// validates the result.
    pub fn load(config_path: Option<&Path>, overrides: Overrides) -> Result<Self, CliError> {
        let file = match config_path {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let mode = overrides.mode.or(file.mode).ok_or_else(|| {
            CliError::Config(
                "no mode selected: pass a subcommand or set `mode` in the config file".to_string(),
            )
        })?;
        let strategies = if !overrides.strategies.is_empty() {
            overrides.strategies
        } else {
            file.strategies.unwrap_or_else(|| Strategy::all().to_vec())
        };
        let config = RunConfig {
            mode,
            psi_source: file.psi_source,
            phi_source: file.phi_source,
            retail_rate: file.retail_rate.unwrap_or(DEFAULT_RETAIL_RATE),
            risk_aversion: overrides
                .risk_aversion
                .or(file.risk_aversion)
                .unwrap_or(DEFAULT_RISK_AVERSION),
            grid_points: overrides.grid_points.or(file.grid_points),
            strategies,
            output_dir: overrides
                .output_dir
                .or(file.output_dir)
                .unwrap_or_else(|| PathBuf::from("out")),
            a_sweep: file.a_sweep.unwrap_or_else(|| DEFAULT_A_SWEEP.to_vec()),
            rho_values: file
                .rho_values
                .unwrap_or_else(|| DEFAULT_RHO_VALUES.to_vec()),
            sigma_values: file
                .sigma_values
                .unwrap_or_else(|| DEFAULT_SIGMA_VALUES.to_vec()),
            sigma_axis: file.sigma_axis.unwrap_or(SweepAxis::Price),
            quantile_levels: file
                .quantile_levels
                .unwrap_or_else(|| DEFAULT_QUANTILE_LEVELS.to_vec()),
            dump_matrices: overrides.dump_matrices || file.dump_matrices.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.retail_rate.is_finite() || self.retail_rate <= 0.0 {
            return Err(CliError::Config(format!(
                "retail_rate must be positive and finite, got {}",
                self.retail_rate
            )));
        }
        if !self.risk_aversion.is_finite() || self.risk_aversion <= 0.0 {
            return Err(CliError::Config(format!(
                "risk_aversion must be positive and finite, got {}",
                self.risk_aversion
            )));
        }
        if let Some(n) = self.grid_points {
            if n < 2 {
                return Err(CliError::Config(format!(
                    "grid_points must be at least 2, got {n}"
                )));
            }
        }
        if self.strategies.is_empty() {
            return Err(CliError::Config("strategies must not be empty".to_string()));
        }
        check_increasing_positive("a_sweep", &self.a_sweep)?;
        if self.rho_values.is_empty() {
            return Err(CliError::Config("rho_values must not be empty".to_string()));
        }
        for &rho in &self.rho_values {
            if !rho.is_finite() || rho.abs() >= 1.0 {
                return Err(CliError::Config(format!(
                    "rho_values entries must lie strictly inside (-1, 1), got {rho}"
                )));
            }
        }
        if self.sigma_values.is_empty() {
            return Err(CliError::Config(
                "sigma_values must not be empty".to_string(),
            ));
        }
        for &sigma in &self.sigma_values {
            if !sigma.is_finite() || sigma <= 0.0 {
                return Err(CliError::Config(format!(
                    "sigma_values entries must be positive and finite, got {sigma}"
                )));
            }
        }
        if self.quantile_levels.is_empty() {
            return Err(CliError::Config(
                "quantile_levels must not be empty".to_string(),
            ));
        }
        for pair in self.quantile_levels.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(CliError::Config(
                    "quantile_levels must be strictly increasing".to_string(),
                ));
            }
        }
        for &level in &self.quantile_levels {
            if !level.is_finite() || level <= 0.0 || level >= 1.0 {
                return Err(CliError::Config(format!(
                    "quantile_levels entries must lie strictly inside (0, 1), got {level}"
                )));
            }
        }
        Ok(())
    }
}

fn check_increasing_positive(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Config(format!("{name} must not be empty")));
    }
    for &v in values {
        if !v.is_finite() || v <= 0.0 {
            return Err(CliError::Config(format!(
                "{name} entries must be positive and finite, got {v}"
            )));
        }
    }
    for pair in values.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(CliError::Config(format!(
                "{name} must be strictly increasing"
            )));
        }
    }
    Ok(())
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

/// Built-in real-world market model: lognormal spot price and demand with a
/// normally distributed weather index; demand is correlated with both the
/// price and the weather.
pub fn default_real_world_spec(rho_wp: f64, grid_points: usize) -> GaussianSpec {
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
        grid_points,
    }
}

/// Built-in pricing model matching the real-world one up to shifted price
/// and weather means (positive market prices of risk).
pub fn default_pricing_spec(rho_wp: f64, grid_points: usize) -> GaussianSpec {
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
        grid_points,
    }
}
