//! Synthetic data generation and replicated experiments.
//!
//! Reproducibility contract: every replication draws from its own ChaCha
//! stream keyed by `(seed, replication index)`, so results do not depend on
//! execution order or the number of worker threads.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::evaluation::{self, MseSummary};
use crate::model::{Dataset, Observation, Reporting, ReportingPolicy};
use crate::nonparametric::{self, KernelSpec, SurvivalCurve};
use crate::parametric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Everything needed to regenerate an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Patience-time distribution (the estimand).
    pub patience: DistributionSpec,
    /// Waiting-time distribution (the censoring mechanism).
    pub waiting: DistributionSpec,
    /// Announcement probability.
    pub reporting: ReportingPolicy,
    pub n: usize,
    pub seed: u64,
    pub replications: usize,
}

impl SimulationConfig {
    pub fn new(
        patience: DistributionSpec,
        waiting: DistributionSpec,
        reporting: ReportingPolicy,
        n: usize,
        seed: u64,
        replications: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig {
                reason: "sample size must be at least 1".to_string(),
            });
        }
        if replications == 0 {
            return Err(Error::InvalidConfig {
                reason: "replication count must be at least 1".to_string(),
            });
        }
        Ok(SimulationConfig {
            patience,
            waiting,
            reporting,
            n,
            seed,
            replications,
        })
    }
}

/// SplitMix64 round; used to derive independent sub-seeds from a master seed.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one replication: same seed, per-replication ChaCha stream.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Draws the latent triple: patience `T ~ f`, waiting `W ~ g` independent,
/// and the would-report flag `B ~ Bernoulli(q(T))`.
pub fn draw_latent<Q: Reporting, R: Rng + ?Sized>(
    patience: &DistributionSpec,
    waiting: &DistributionSpec,
    reporting: &Q,
    rng: &mut R,
) -> (f64, f64, bool) {
    let t = patience.sample_one(rng);
    let w = waiting.sample_one(rng);
    let b = rng.random::<f64>() < reporting.q(t);
    (t, w, b)
}

/// Collapses a latent triple onto the recorded data: `delta = 1{T < W}`,
/// `y = delta * B`, `u = y*T + (1-y)*W`.
pub fn observe(t: f64, w: f64, b: bool) -> Observation {
    let delta = t < w;
    let y = delta && b;
    let u = if y { t } else { w };
    Observation::new(u, delta, y).expect("mechanism output always satisfies invariants")
}

/// One synthetic dataset for the given replication index.
pub fn simulate_dataset(config: &SimulationConfig, replication: u64) -> Dataset {
    let mut rng = replication_rng(config.seed, replication);
    let obs = (0..config.n)
        .map(|_| {
            let (t, w, b) = draw_latent(&config.patience, &config.waiting, &config.reporting, &mut rng);
            observe(t, w, b)
        })
        .collect();
    Dataset::new(obs).expect("n >= 1 by construction")
}

/// Estimators the replication harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    /// Two-stage MLE under an Exponential working model; survival
    /// `exp(-theta_hat * t)`.
    Parametric,
    /// Kernel plug-in estimator.
    Nonparametric,
    /// The true survival curve; a zero-MSE control.
    Oracle,
}

impl EstimatorKind {
    pub fn id(self) -> &'static str {
        match self {
            EstimatorKind::Parametric => "parametric",
            EstimatorKind::Nonparametric => "nonparametric",
            EstimatorKind::Oracle => "oracle",
        }
    }
}

/// Grid resolution used when an estimator needs an evaluation grid.
pub const DEFAULT_GRID_POINTS: usize = 200;

pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    let step = (b - a) / (points - 1) as f64;
    (0..points)
        .map(|i| if i == points - 1 { b } else { a + step * i as f64 })
        .collect()
}

/// Fits one estimator to one dataset and returns its survival curve.
pub fn fit_estimator(
    kind: EstimatorKind,
    data: &Dataset,
    config: &SimulationConfig,
    kernel: &KernelSpec,
    grid_points: usize,
) -> Result<SurvivalCurve> {
    match kind {
        EstimatorKind::Parametric => {
            let fit = parametric::fit_two_stage(
                data,
                crate::dist::Family::Exponential,
                crate::dist::Family::Exponential,
            )?;
            if !fit.gamma_converged || !fit.theta_converged {
                return Err(Error::EstimationFailure {
                    stage: "two-stage",
                    detail: "optimizer did not converge".to_string(),
                });
            }
            let tau = nonparametric::estimation_window(data);
            Ok(SurvivalCurve::from_fitted_spec(
                fit.patience_spec()?,
                &linspace(0.0, tau, grid_points),
                tau,
            ))
        }
        EstimatorKind::Nonparametric => {
            let tau = nonparametric::estimation_window(data);
            let grid = linspace(0.0, tau, grid_points);
            nonparametric::estimate_survival(data, kernel, &grid)
        }
        EstimatorKind::Oracle => {
            let tau = nonparametric::estimation_window(data);
            Ok(SurvivalCurve::from_true_spec(
                config.patience,
                &linspace(0.0, tau, grid_points),
                tau,
            ))
        }
    }
}

/// Runs every estimator on every replication and aggregates the MSE against
/// the true patience distribution. Per-replicate failures are excluded from
/// the aggregates and surfaced in the summary.
pub fn run_replications(
    config: &SimulationConfig,
    estimators: &[EstimatorKind],
    kernel: &KernelSpec,
) -> Result<Vec<MseSummary>> {
    let per_rep: Vec<Vec<Result<f64>>> = (0..config.replications as u64)
        .into_par_iter()
        .map(|rep| {
            let data = simulate_dataset(config, rep);
            estimators
                .iter()
                .map(|&kind| {
                    let curve = fit_estimator(kind, &data, config, kernel, DEFAULT_GRID_POINTS)?;
                    evaluation::mse(&curve, &config.patience)
                })
                .collect()
        })
        .collect();

    let summaries = estimators
        .iter()
        .enumerate()
        .map(|(j, &kind)| {
            let mut values = Vec::with_capacity(config.replications);
            let mut failures = 0usize;
            for rep in &per_rep {
                match &rep[j] {
                    Ok(v) => values.push(*v),
                    Err(_) => failures += 1,
                }
            }
            MseSummary::from_values(kind.id(), config.n, &values, config.replications, failures)
        })
        .collect();
    Ok(summaries)
}
