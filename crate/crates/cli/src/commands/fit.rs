//! `patience fit`: fit one dataset file, parametrically or nonparametrically.

use crate::commands::simulate::{load_file_config, require, sidecar_path};
use crate::error::{CliError, Result};
use crate::io::{atomic_write, curve_to_csv_with_extras, dataset_from_csv, read_to_string};
use crate::spec_args::{parse_bandwidth, parse_boundary, parse_distribution, parse_family, parse_kernel};
use clap::{Args, ValueEnum};
use patience_core::dist::Family;
use patience_core::nonparametric::{estimate_survival, estimation_window, KernelSpec};
use patience_core::parametric::{bootstrap_patience_ci, fit_two_stage, BootstrapCi, FitResult};
use patience_core::simulate::linspace;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Parametric,
    Nonparametric,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Config file (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dataset CSV produced by `simulate` (or equivalent).
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Output path: JSON for parametric, CSV for nonparametric.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Patience-time family for the parametric fit.
    #[arg(long)]
    pub patience_family: Option<String>,
    /// Waiting-time family for the parametric fit.
    #[arg(long)]
    pub waiting_family: Option<String>,
    /// Bootstrap resample count for an interval on the patience parameters.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Bootstrap confidence level.
    #[arg(long)]
    pub level: Option<f64>,
    /// Bootstrap seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Kernel for the nonparametric fit: epanechnikov or gaussian.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Bandwidth: auto or a positive number.
    #[arg(long)]
    pub bandwidth: Option<String>,
    /// Boundary handling at zero: reflection or none.
    #[arg(long)]
    pub boundary: Option<String>,
    /// Number of evaluation grid points.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Upper grid end; defaults to the data's estimation window.
    #[arg(long)]
    pub grid_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    data: Option<PathBuf>,
    method: Option<String>,
    out: Option<PathBuf>,
    patience_family: Option<String>,
    waiting_family: Option<String>,
    bootstrap: Option<usize>,
    level: Option<f64>,
    seed: Option<u64>,
    kernel: Option<String>,
    bandwidth: Option<String>,
    boundary: Option<String>,
    grid_points: Option<usize>,
    grid_max: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ParametricOutput<'a> {
    data: String,
    n: usize,
    category_counts: [usize; 3],
    #[serde(flatten)]
    fit: &'a FitResult,
    bootstrap: Option<&'a BootstrapCi>,
}

#[derive(Debug, Serialize)]
struct NonparametricMeta<'a> {
    data: String,
    n: usize,
    category_counts: [usize; 3],
    tau: f64,
    method: &'a patience_core::nonparametric::CurveMethod,
    excluded: &'a [f64],
}

pub fn run(args: &FitArgs) -> Result<()> {
    let file: FileConfig = load_file_config(&args.config)?;
    let data_path = require(args.data.clone().or(file.data), "data")?;
    let method = match (args.method, file.method.as_deref()) {
        (Some(m), _) => m,
        (None, Some("parametric")) => Method::Parametric,
        (None, Some("nonparametric")) => Method::Nonparametric,
        (None, Some(other)) => {
            return Err(CliError::validation(format!(
                "method must be parametric or nonparametric, got `{other}`"
            )))
        }
        (None, None) => return Err(CliError::validation("missing required value `method`")),
    };
    let out = require(args.out.clone().or(file.out), "out")?;

    let data = dataset_from_csv(&read_to_string(&data_path)?)?;

    match method {
        Method::Parametric => {
            let patience_family = args
                .patience_family
                .clone()
                .or(file.patience_family)
                .map_or(Ok(Family::Exponential), |s| {
                    parse_family(&s).map_err(CliError::validation)
                })?;
            let waiting_family = args
                .waiting_family
                .clone()
                .or(file.waiting_family)
                .map_or(Ok(Family::Exponential), |s| {
                    parse_family(&s).map_err(CliError::validation)
                })?;
            let fit = fit_two_stage(&data, patience_family, waiting_family)?;
            let bootstrap = match args.bootstrap.or(file.bootstrap) {
                Some(b) => Some(bootstrap_patience_ci(
                    &data,
                    patience_family,
                    waiting_family,
                    b,
                    args.level.or(file.level).unwrap_or(0.95),
                    args.seed.or(file.seed).unwrap_or(0),
                )?),
                None => None,
            };
            let output = ParametricOutput {
                data: data_path.display().to_string(),
                n: data.n(),
                category_counts: data.category_counts(),
                fit: &fit,
                bootstrap: bootstrap.as_ref(),
            };
            let json = serde_json::to_string_pretty(&output)
                .map_err(|e| CliError::Io(format!("serializing fit: {e}")))?;
            atomic_write(&out, &(json + "\n"))?;
            println!(
                "parametric fit: gamma {:?}, theta {:?} -> {}",
                fit.gamma,
                fit.theta,
                out.display()
            );
        }
        Method::Nonparametric => {
            let kernel = KernelSpec::new(
                args.kernel
                    .clone()
                    .or(file.kernel)
                    .map_or(Ok(patience_core::nonparametric::Kernel::Epanechnikov), |s| {
                        parse_kernel(&s).map_err(CliError::validation)
                    })?,
                args.bandwidth
                    .clone()
                    .or(file.bandwidth)
                    .map_or(Ok(patience_core::nonparametric::Bandwidth::Auto), |s| {
                        parse_bandwidth(&s).map_err(CliError::validation)
                    })?,
                args.boundary
                    .clone()
                    .or(file.boundary)
                    .map_or(Ok(patience_core::nonparametric::Boundary::Reflection), |s| {
                        parse_boundary(&s).map_err(CliError::validation)
                    })?,
            )?;
            let grid_points = args.grid_points.or(file.grid_points).unwrap_or(200);
            if grid_points < 2 {
                return Err(CliError::validation("grid-points must be at least 2"));
            }
            let tau = estimation_window(&data);
            let grid_max = args.grid_max.or(file.grid_max).unwrap_or(tau);
            let grid = linspace(0.0, grid_max, grid_points);
            let curve = estimate_survival(&data, &kernel, &grid)?;

            atomic_write(&out, &curve_to_csv_with_extras(&curve))?;
            let meta = NonparametricMeta {
                data: data_path.display().to_string(),
                n: data.n(),
                category_counts: data.category_counts(),
                tau: curve.tau(),
                method: curve.method(),
                excluded: curve.excluded(),
            };
            let json = serde_json::to_string_pretty(&meta)
                .map_err(|e| CliError::Io(format!("serializing metadata: {e}")))?;
            atomic_write(&sidecar_path(&out), &(json + "\n"))?;
            println!(
                "nonparametric fit on {} grid points over [0, {:.6}] -> {}",
                curve.grid().len(),
                curve.tau(),
                out.display()
            );
        }
    }
    Ok(())
}

/// Parse a `truth` flag shared by evaluation commands.
pub fn parse_truth(raw: &str) -> Result<patience_core::DistributionSpec> {
    parse_distribution(raw).map_err(CliError::validation)
}
