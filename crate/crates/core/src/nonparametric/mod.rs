//! Nonparametric estimation of the patience-time survival function.
//!
//! The plug-in estimator combines empirical category probabilities, kernel
//! estimates of the two observed conditional densities, and the
//! counting-process estimate of the reporting sub-CDF:
//!
//! `F_hat(t) = (p3 r3(t) + p1 r1(t) A_hat(t)) / (p3 r3(t) + p1 r1(t))`.

mod kernel;
mod km;
mod pava;
mod step;

pub use kernel::{kernel_density, silverman_bandwidth, Bandwidth, Boundary, Kernel, KernelDensity, KernelSpec};
pub use km::kaplan_meier_waiting;
pub use pava::isotonic_nondecreasing;
pub use step::{
    at_risk, counting_process, estimation_window, reporting_cdf_estimate, ReportingCdfEstimate,
    StepCurve,
};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::model::{Category, Dataset};
use serde::{Deserialize, Serialize};

/// How a survival curve was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum CurveMethod {
    /// Kernel plug-in estimate; records the resolved bandwidths.
    KernelPlugin {
        kernel: Kernel,
        boundary: Boundary,
        bandwidth_served: f64,
        bandwidth_silent: f64,
    },
    /// Survival of a fitted parametric model; evaluated analytically.
    FittedParametric { spec: DistributionSpec },
    /// The true model used to generate data; evaluated analytically.
    TrueParametric { spec: DistributionSpec },
    KaplanMeier,
    /// Values read from a file or supplied directly.
    Tabulated,
}

/// A survival estimate on a time grid over `[0, tau]`.
///
/// Grid-backed curves evaluate by right-continuous step interpolation and
/// extend as constants outside the grid; parametric-backed curves evaluate
/// their survival function exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    grid: Vec<f64>,
    survival: Vec<f64>,
    /// Unmonotonized plug-in values, when the method produces them.
    survival_raw: Option<Vec<f64>>,
    /// `A_hat` at the grid, when the method produces it.
    reporting_cdf: Option<Vec<f64>>,
    /// Grid times dropped because the plug-in denominator vanished.
    excluded: Vec<f64>,
    tau: f64,
    method: CurveMethod,
}

impl SurvivalCurve {
    fn validate_grid(grid: &[f64], survival: &[f64]) -> Result<()> {
        if grid.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if grid.len() != survival.len() {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "grid and survival lengths differ: {} vs {}",
                    grid.len(),
                    survival.len()
                ),
            });
        }
        for w in grid.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidConfig {
                    reason: format!("grid must be strictly increasing: {} then {}", w[0], w[1]),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn new_step(
        grid: Vec<f64>,
        survival: Vec<f64>,
        tau: f64,
        method: CurveMethod,
    ) -> Result<Self> {
        Self::validate_grid(&grid, &survival)?;
        Ok(SurvivalCurve {
            grid,
            survival,
            survival_raw: None,
            reporting_cdf: None,
            excluded: Vec::new(),
            tau,
            method,
        })
    }

    /// A curve of stored values with step evaluation.
    pub fn tabulated(grid: Vec<f64>, survival: Vec<f64>, tau: f64) -> Result<Self> {
        Self::new_step(grid, survival, tau, CurveMethod::Tabulated)
    }

    /// The survival of a fitted parametric spec, evaluated analytically.
    pub fn from_fitted_spec(spec: DistributionSpec, grid: &[f64], tau: f64) -> Self {
        SurvivalCurve {
            grid: grid.to_vec(),
            survival: grid.iter().map(|&t| spec.survival(t)).collect(),
            survival_raw: None,
            reporting_cdf: None,
            excluded: Vec::new(),
            tau,
            method: CurveMethod::FittedParametric { spec },
        }
    }

    /// The true survival curve of a known model.
    pub fn from_true_spec(spec: DistributionSpec, grid: &[f64], tau: f64) -> Self {
        SurvivalCurve {
            grid: grid.to_vec(),
            survival: grid.iter().map(|&t| spec.survival(t)).collect(),
            survival_raw: None,
            reporting_cdf: None,
            excluded: Vec::new(),
            tau,
            method: CurveMethod::TrueParametric { spec },
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.method {
            CurveMethod::FittedParametric { spec } | CurveMethod::TrueParametric { spec } => {
                spec.survival(t)
            }
            _ => match self.grid.partition_point(|&x| x <= t) {
                0 => self.survival[0],
                k => self.survival[k - 1],
            },
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    pub fn survival_raw(&self) -> Option<&[f64]> {
        self.survival_raw.as_deref()
    }

    pub fn reporting_cdf(&self) -> Option<&[f64]> {
        self.reporting_cdf.as_deref()
    }

    pub fn excluded(&self) -> &[f64] {
        &self.excluded
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn method(&self) -> &CurveMethod {
        &self.method
    }
}

/// Empirical category probabilities `(p1, p2, p3)`.
///
/// `p1` and `p3` are the exact count ratios the plug-in estimator uses;
/// `p2` is defined as the complement so the triple sums to 1 exactly.
pub fn empirical_category_probs(data: &Dataset) -> (f64, f64, f64) {
    let [n1, _, n3] = data.category_counts();
    let n = data.n() as f64;
    let p1 = n1 as f64 / n;
    let p3 = n3 as f64 / n;
    (p1, 1.0 - p1 - p3, p3)
}

/// The plug-in formula with all inputs supplied by the caller. Returns
/// `None` when the denominator vanishes.
pub fn plugin_cdf(p1: f64, r1_t: f64, p3: f64, r3_t: f64, a_t: f64) -> Option<f64> {
    let denom = p3 * r3_t + p1 * r1_t;
    if denom <= 0.0 {
        return None;
    }
    Some((p3 * r3_t + p1 * r1_t * a_t) / denom)
}

/// Kernel plug-in estimate of the patience-time survival on `grid`.
///
/// The grid must stay inside the estimation window `[0, tau]`. The raw
/// plug-in CDF is clamped to `[0, 1]` and monotonized by pool-adjacent
/// violators; both the monotonized and raw survival values are returned.
/// Grid points where the plug-in denominator vanishes are dropped from the
/// curve and reported via [`SurvivalCurve::excluded`].
pub fn estimate_survival(
    data: &Dataset,
    kernel: &KernelSpec,
    grid: &[f64],
) -> Result<SurvivalCurve> {
    if grid.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if grid[0] < 0.0 {
        return Err(Error::InvalidConfig {
            reason: format!("grid times must be nonnegative, got {}", grid[0]),
        });
    }
    let tau = estimation_window(data);
    if let Some(&t) = grid.last() {
        if t > tau {
            return Err(Error::WindowExceeded { t, tau });
        }
    }

    let served = data.times_in(Category::Served);
    if served.is_empty() {
        return Err(Error::InsufficientData {
            category: Category::Served,
        });
    }
    let silent = data.times_in(Category::SilentLeave);
    if silent.is_empty() {
        return Err(Error::InsufficientData {
            category: Category::SilentLeave,
        });
    }

    let (p1, _, p3) = empirical_category_probs(data);
    let kde_served = KernelDensity::fit(&served, kernel)?;
    let kde_silent = KernelDensity::fit(&silent, kernel)?;
    let a_hat = ReportingCdfEstimate::fit(data);

    let mut kept_grid = Vec::with_capacity(grid.len());
    let mut raw_cdf = Vec::with_capacity(grid.len());
    let mut excluded = Vec::new();
    for &t in grid {
        let r1 = kde_served.eval(t);
        let r3 = kde_silent.eval(t);
        let a = a_hat.value_at(t)?;
        match plugin_cdf(p1, r1, p3, r3, a) {
            Some(f) => {
                kept_grid.push(t);
                raw_cdf.push(f.clamp(0.0, 1.0));
            }
            None => excluded.push(t),
        }
    }
    if kept_grid.is_empty() {
        return Err(Error::EmptyCurve);
    }

    let mono_cdf = isotonic_nondecreasing(&raw_cdf);
    let survival: Vec<f64> = mono_cdf.iter().map(|f| 1.0 - f).collect();
    let survival_raw: Vec<f64> = raw_cdf.iter().map(|f| 1.0 - f).collect();
    let reporting_cdf: Vec<f64> = kept_grid.iter().map(|&t| a_hat.sub_cdf().eval(t)).collect();

    Ok(SurvivalCurve {
        grid: kept_grid,
        survival,
        survival_raw: Some(survival_raw),
        reporting_cdf: Some(reporting_cdf),
        excluded,
        tau,
        method: CurveMethod::KernelPlugin {
            kernel: kernel.kernel,
            boundary: kernel.boundary,
            bandwidth_served: kde_served.bandwidth(),
            bandwidth_silent: kde_silent.bandwidth(),
        },
    })
}
