//! `patience simulate`: draw one synthetic dataset and write it with a
//! metadata sidecar.

use crate::error::{CliError, Result};
use crate::io::{atomic_write, dataset_to_csv, read_to_string};
use crate::spec_args::{parse_distribution, parse_reporting};
use clap::Args;
use patience_core::model::{Dataset, ReportingPolicy};
use patience_core::simulate::{simulate_dataset, SimulationConfig};
use patience_core::DistributionSpec;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Config file (TOML); flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Patience-time distribution, e.g. exp:4 or weibull:4:2.
    #[arg(long)]
    pub patience: Option<String>,
    /// Waiting-time distribution, e.g. exp:10.
    #[arg(long)]
    pub waiting: Option<String>,
    /// Reporting policy, e.g. exp-decay:12, exp-rise:12, constant:0.5.
    #[arg(long)]
    pub reporting: Option<String>,
    /// Sample size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replication index to draw (its own random stream).
    #[arg(long)]
    pub replication: Option<u64>,
    /// Output CSV path; a `<out>.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    patience: Option<String>,
    waiting: Option<String>,
    reporting: Option<String>,
    n: Option<usize>,
    seed: Option<u64>,
    replication: Option<u64>,
    out: Option<PathBuf>,
}

pub fn load_file_config<T: serde::de::DeserializeOwned + Default>(
    path: &Option<PathBuf>,
) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let raw = read_to_string(p)?;
            toml::from_str(&raw)
                .map_err(|e| CliError::validation(format!("{}: {e}", p.display())))
        }
    }
}

pub fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::validation(format!("missing required value `{flag}`")))
}

#[derive(Debug, Serialize)]
struct SimulateMeta<'a> {
    patience: &'a DistributionSpec,
    waiting: &'a DistributionSpec,
    reporting: &'a ReportingPolicy,
    n: usize,
    seed: u64,
    replication: u64,
    category_counts: [usize; 3],
}

pub fn resolve_config(args: &SimulateArgs) -> Result<(SimulationConfig, u64, PathBuf)> {
    let file: FileConfig = load_file_config(&args.config)?;
    let patience = parse_distribution(
        &require(args.patience.clone().or(file.patience), "patience")?,
    )
    .map_err(CliError::validation)?;
    let waiting = parse_distribution(&require(args.waiting.clone().or(file.waiting), "waiting")?)
        .map_err(CliError::validation)?;
    let reporting =
        parse_reporting(&require(args.reporting.clone().or(file.reporting), "reporting")?)
            .map_err(CliError::validation)?;
    let n = require(args.n.or(file.n), "n")?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let replication = args.replication.or(file.replication).unwrap_or(0);
    let out = require(args.out.clone().or(file.out), "out")?;
    let config = SimulationConfig::new(patience, waiting, reporting, n, seed, 1)?;
    Ok((config, replication, out))
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let (config, replication, out) = resolve_config(args)?;
    let data: Dataset = simulate_dataset(&config, replication);

    atomic_write(&out, &dataset_to_csv(&data))?;
    let meta = SimulateMeta {
        patience: &config.patience,
        waiting: &config.waiting,
        reporting: &config.reporting,
        n: config.n,
        seed: config.seed,
        replication,
        category_counts: data.category_counts(),
    };
    let meta_path = sidecar_path(&out);
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| CliError::Io(format!("serializing metadata: {e}")))?;
    atomic_write(&meta_path, &(json + "\n"))?;
    println!(
        "wrote {} observations to {} (categories {:?})",
        data.n(),
        out.display(),
        data.category_counts()
    );
    Ok(())
}

pub fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}
