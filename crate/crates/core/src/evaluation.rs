//! Accuracy metrics and the replicated-experiment harness.

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::model::ReportingPolicy;
use crate::nonparametric::{KernelSpec, SurvivalCurve};
use crate::simulate::{self, derive_seed, EstimatorKind, SimulationConfig};
use serde::{Deserialize, Serialize};

/// Number of quasi-random draws behind the MSE integral.
pub const MSE_DRAWS: usize = 100_000;

/// Integrated squared error of a survival curve against the true model,
/// `int (S_hat(t) - S_0(t))^2 f_0(t) dt`.
///
/// Evaluated as an average over a midpoint-stratified quasi-random sample
/// `t_k = Q_0((k + 1/2)/N)`, which makes the metric deterministic. The curve
/// extends as a constant beyond its window, so draws past `tau` see its last
/// value.
pub fn mse(curve: &SurvivalCurve, f0: &DistributionSpec) -> Result<f64> {
    if curve.grid().is_empty() {
        return Err(Error::EmptyCurve);
    }
    let n = MSE_DRAWS;
    let mut sum = 0.0;
    for k in 0..n {
        let p = (k as f64 + 0.5) / n as f64;
        let t = f0.quantile(p);
        let d = curve.eval(t) - f0.survival(t);
        sum += d * d;
    }
    Ok(sum / n as f64)
}

/// Least-squares slope of `log(error)` on `log(n)`.
pub fn rate_slope(errors: &[f64], ns: &[usize]) -> Result<f64> {
    if errors.len() != ns.len() || errors.len() < 4 {
        return Err(Error::InvalidMetricInput {
            reason: format!(
                "need at least 4 matched (n, error) pairs, got {} and {}",
                ns.len(),
                errors.len()
            ),
        });
    }
    if errors.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
        return Err(Error::InvalidMetricInput {
            reason: "errors must be positive and finite".to_string(),
        });
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|&e| e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Ok(sxy / sxx)
}

/// Aggregated mean-square errors of one estimator at one sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseSummary {
    pub estimator: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub replications: usize,
    pub failures: usize,
}

impl MseSummary {
    pub fn from_values(
        estimator: &str,
        n: usize,
        values: &[f64],
        replications: usize,
        failures: usize,
    ) -> Self {
        let k = values.len() as f64;
        let mean = if values.is_empty() {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / k
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if sorted.is_empty() {
            f64::NAN
        } else if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
        };
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        MseSummary {
            estimator: estimator.to_string(),
            n,
            mean,
            median,
            sd,
            replications,
            failures,
        }
    }
}

/// The two simulation settings of the study: exponential patience (well
/// specified for the exponential working model) and Weibull patience
/// (misspecified), both against exponential waiting and decaying reporting.
pub fn study_setting(setting: u8) -> Result<(DistributionSpec, DistributionSpec, ReportingPolicy)> {
    let waiting = DistributionSpec::exponential(10.0)?;
    let reporting = ReportingPolicy::exp_decay(12.0)?;
    let patience = match setting {
        1 => DistributionSpec::exponential(4.0)?,
        2 => DistributionSpec::weibull(4.0, 2.0)?,
        other => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown setting {other}; expected 1 or 2"),
            })
        }
    };
    Ok((patience, waiting, reporting))
}

pub const TABLE_SAMPLE_SIZES: [usize; 5] = [100, 200, 500, 1000, 2000];

/// Runs both settings over the study's sample-size ladder, fitting the
/// parametric and nonparametric estimators on shared replicate datasets.
/// Returns one summary grid per setting. Deterministic given `seed`.
pub fn table1_harness(replications: usize, seed: u64) -> Result<[Vec<MseSummary>; 2]> {
    let kernel = KernelSpec::default();
    let estimators = [EstimatorKind::Parametric, EstimatorKind::Nonparametric];
    let mut grids: [Vec<MseSummary>; 2] = [Vec::new(), Vec::new()];
    for (i, setting) in [1u8, 2u8].into_iter().enumerate() {
        let (patience, waiting, reporting) = study_setting(setting)?;
        for (j, &n) in TABLE_SAMPLE_SIZES.iter().enumerate() {
            let cell_seed = derive_seed(seed, (setting as u64) << 32 | j as u64);
            let config =
                SimulationConfig::new(patience, waiting, reporting, n, cell_seed, replications)?;
            grids[i].extend(simulate::run_replications(&config, &estimators, &kernel)?);
        }
    }
    Ok(grids)
}
