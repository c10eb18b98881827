//! Estimation of a failure-time distribution from survival data that mixes
//! exact, right-censored, and left-censored observations.
//!
//! The motivating data are patients waiting for service: some are served
//! (waiting time observed, patience right-censored), some leave and say so
//! (patience observed), and some leave silently (absence discovered at call
//! time, patience left-censored). The crate provides
//!
//! - the observation model and its population identities ([`model`]),
//! - a two-stage parametric MLE ([`parametric`]),
//! - a kernel plug-in estimator built on a counting-process estimate of the
//!   reporting sub-CDF ([`nonparametric`]),
//! - a reproducible simulation harness and MSE metrics ([`simulate`],
//!   [`evaluation`]).

pub mod dist;
pub mod error;
pub mod evaluation;
pub mod model;
pub mod nonparametric;
pub mod parametric;
pub mod quad;
pub mod simulate;

pub use dist::{DistributionSpec, Family};
pub use error::{Error, Result};
pub use model::{Category, Dataset, Observation, Reporting, ReportingPolicy};
pub use nonparametric::{KernelSpec, StepCurve, SurvivalCurve};
pub use parametric::{BootstrapCi, FitResult};
pub use simulate::{EstimatorKind, SimulationConfig};
