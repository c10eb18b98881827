//! Command-line front end: simulate datasets, fit either estimator,
//! reproduce the simulation study, export plot-ready curves, and score
//! stored curves.
//!
//! Exit codes: 0 success, 2 validation error, 3 estimation failure, 4 I/O.

mod commands;
mod error;
mod io;
mod spec_args;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "patience",
    version,
    about = "Failure-time estimation from exact, right-censored, and left-censored observations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic dataset and write it as CSV plus a metadata sidecar.
    Simulate(commands::simulate::SimulateArgs),
    /// Fit a dataset file with the parametric or nonparametric estimator.
    Fit(commands::fit::FitArgs),
    /// Run the two-setting MSE study and write its summary table.
    #[command(name = "reproduce-table1")]
    ReproduceTable1(commands::table1::Table1Args),
    /// Export per-replication estimated and true survival curves.
    Curves(commands::curves::CurvesArgs),
    /// Integrated squared error of a stored curve against a reference model.
    #[command(name = "eval-mse")]
    EvalMse(commands::eval_mse::EvalMseArgs),
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("PATIENCE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring PATIENCE_THREADS={raw} (want a positive integer)"),
        }
    }
}

fn main() {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::ReproduceTable1(args) => commands::table1::run(args),
        Command::Curves(args) => commands::curves::run(args),
        Command::EvalMse(args) => commands::eval_mse::run(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
