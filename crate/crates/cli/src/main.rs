use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use mvhedge::analytics::Strategy;
use mvhedge_cli::config::{Mode, Overrides, RunConfig};
use mvhedge_cli::error::CliError;
use mvhedge_cli::runner;

/// Optimal zero-cost price and weather hedging for an energy retailer.
#[derive(Parser)]
#[command(name = "mvhedge", version)]
struct Cli {
    /// JSON config file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Risk-aversion coefficient.
    #[arg(long, global = true)]
    risk_aversion: Option<f64>,

    /// Nodes per marginal axis when discretizing parametric specs.
    #[arg(long, global = true)]
    grid_points: Option<usize>,

    /// Strategy to include (repeatable); defaults to all strategies.
    #[arg(long = "strategy", value_name = "STRATEGY", global = true)]
    strategies: Vec<String>,

    /// Directory the artifacts and manifest are written to.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Also write the assembled moment system (m, c, d, b).
    #[arg(long, global = true)]
    dump_matrices: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the optimal claims under each strategy.
    Solve,
    /// Sweep hedged mean and variance across risk aversions.
    Frontier,
    /// Tabulate hedged-profit quantiles per strategy.
    Quantiles,
    /// Re-discretize and solve across price-weather correlations.
    SweepRho,
    /// Re-discretize and solve across volatilities.
    SweepSigma,
    /// Rerun the full benchmark study and write a pass/fail summary.
    ReproducePaper,
}

impl Command {
    fn mode(&self) -> Mode {
        match self {
            Command::Solve => Mode::Solve,
            Command::Frontier => Mode::Frontier,
            Command::Quantiles => Mode::Quantiles,
            Command::SweepRho => Mode::RhoSweep,
            Command::SweepSigma => Mode::SigmaSweep,
            Command::ReproducePaper => Mode::ReproducePaper,
        }
    }
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute() -> Result<(), CliError> {
    let cli = Cli::parse();
    init_logging()?;
    let mut strategies = Vec::with_capacity(cli.strategies.len());
    for token in &cli.strategies {
        strategies.push(Strategy::from_str(token).map_err(|e| CliError::Config(e.to_string()))?);
    }
    let overrides = Overrides {
        mode: cli.command.as_ref().map(Command::mode),
        risk_aversion: cli.risk_aversion,
        grid_points: cli.grid_points,
        strategies,
        output_dir: cli.output_dir,
        dump_matrices: cli.dump_matrices,
    };
    let config = RunConfig::load(cli.config.as_deref(), overrides)?;
    let artifacts = runner::run(&config)?;
    println!(
        "wrote {} artifacts under {}",
        artifacts.len(),
        config.output_dir.display()
    );
    Ok(())
}

fn init_logging() -> Result<(), CliError> {
    let level = match std::env::var("HEDGE_LOG_LEVEL") {
        Ok(value) => match value.as_str() {
            "error" => log::LevelFilter::Error,
            "warn" => log::LevelFilter::Warn,
            "info" => log::LevelFilter::Info,
            "debug" => log::LevelFilter::Debug,
            other => {
                return Err(CliError::Config(format!(
                    "invalid HEDGE_LOG_LEVEL {other:?}; expected error, warn, info, or debug"
                )));
            }
        },
        Err(_) => log::LevelFilter::Warn,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init()
        .ok();
    Ok(())
}
