//! `patience eval-mse`: integrated squared error of a stored curve against
//! a reference model.

use crate::commands::fit::parse_truth;
use crate::commands::simulate::{load_file_config, require};
use crate::error::{CliError, Result};
use crate::io::{atomic_write, curve_from_csv, format_f64, read_to_string};
use clap::Args;
use patience_core::evaluation::mse;
use patience_core::SurvivalCurve;
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct EvalMseArgs {
    /// Config file (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Curve CSV (header starting `t,survival`).
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Reference distribution, e.g. exp:4 or weibull:4:2.
    #[arg(long)]
    pub truth: Option<String>,
    /// Optional output file; the value is always printed to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    curve: Option<PathBuf>,
    truth: Option<String>,
    out: Option<PathBuf>,
}

pub fn run(args: &EvalMseArgs) -> Result<()> {
    let file: FileConfig = load_file_config(&args.config)?;
    let curve_path = require(args.curve.clone().or(file.curve), "curve")?;
    let truth = parse_truth(&require(args.truth.clone().or(file.truth), "truth")?)?;
    let out = args.out.clone().or(file.out);

    let (grid, survival) = curve_from_csv(&read_to_string(&curve_path)?)?;
    let tau = grid.last().copied().unwrap_or(0.0);
    let curve = SurvivalCurve::tabulated(grid, survival, tau)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let value = mse(&curve, &truth)?;

    println!("mse {}", format_f64(value));
    if let Some(path) = out {
        atomic_write(&path, &format!("mse\n{}\n", format_f64(value)))?;
    }
    Ok(())
}
