//! `thetapress` — pressure computations for finite nonautonomous systems.
//!
//! Subcommands: `pressure` (theta sweep to CSV + SVG), `classical`
//! (spanning/separated ladders), `measure` (measure-theoretic pressures
//! and variational checks), `verify` (the structural check suite), and
//! `schema` (prints the config schema). Log verbosity is controlled by
//! the `THETAPRESS_LOG` environment variable.

mod commands;
mod emit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{AppError, Overrides};

#[derive(Parser)]
#[command(name = "thetapress", version, about = "theta-intermediate topological pressures for finite nonautonomous systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (JSON; see `thetapress schema`)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the configured cover solver
    #[arg(long, global = true, value_enum)]
    solver: Option<SolverArg>,

    /// Override the bisection tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads (results are identical for any value)
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Override the random seed
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Theta-sweep pressure profiles: alpha_ladder.csv, profiles.csv, pressure_vs_theta.svg
    Pressure,
    /// Classical spanning/separated pressure ladders: classical.csv
    Classical,
    /// Measure-theoretic pressures and variational checks: measure.csv
    Measure,
    /// Run the structural check suite: verify_report.json, exit 1 on hard failures
    Verify,
    /// Print the JSON configuration schema
    Schema,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    Greedy,
    Auto,
}

impl From<SolverArg> for thetapress_core::SolverKind {
    fn from(a: SolverArg) -> Self {
        match a {
            SolverArg::Exact => thetapress_core::SolverKind::Exact,
            SolverArg::Greedy => thetapress_core::SolverKind::Greedy,
            SolverArg::Auto => thetapress_core::SolverKind::Auto,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("THETAPRESS_LOG", "warn"),
    )
    .init();
    let cli = Cli::parse();

    if matches!(cli.command, Command::Schema) {
        commands::cmd_schema();
        return ExitCode::SUCCESS;
    }

    let Some(config_path) = cli.config.as_deref() else {
        eprintln!("configuration error: --config PATH is required for this command");
        return ExitCode::from(2);
    };
    let overrides = Overrides {
        out: cli.out.clone(),
        solver: cli.solver.map(Into::into),
        tol: cli.tol,
        jobs: cli.jobs,
        seed: cli.seed,
    };
    let run = match commands::prepare(config_path, overrides) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let result = match cli.command {
        Command::Pressure => commands::cmd_pressure(&run),
        Command::Classical => commands::cmd_classical(&run),
        Command::Measure => commands::cmd_measure(&run),
        Command::Verify => commands::cmd_verify(&run),
        Command::Schema => unreachable!("handled above"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
