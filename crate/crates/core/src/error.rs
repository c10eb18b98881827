//! Crate-wide error type.

use crate::model::Category;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// An observation with delta = 0 and y = 1 cannot arise from the recording
    /// mechanism: a reported departure implies the departure happened first.
    #[error("invalid observation: {reason}")]
    InvalidObservation { reason: String },

    #[error("dataset must contain at least one observation")]
    EmptyDataset,

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    /// A category carries zero probability under the supplied model, so the
    /// corresponding conditional density is undefined.
    #[error("model degeneracy: category {category:?} has probability {prob:.3e}")]
    ModelDegeneracy { category: Category, prob: f64 },

    #[error("insufficient data: no observations in category {category:?}")]
    InsufficientData { category: Category },

    #[error("empty sample passed to density estimator")]
    EmptySample,

    #[error("evaluation time {t} exceeds the estimation window [0, {tau}]")]
    WindowExceeded { t: f64, tau: f64 },

    #[error(
        "quadrature did not converge on [{a}, {b}]: best estimate {estimate:.6e}, \
         error bound {error_bound:.3e} > tolerance {tol:.3e}"
    )]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        error_bound: f64,
        tol: f64,
    },

    #[error("estimation failure in {stage}: {detail}")]
    EstimationFailure { stage: &'static str, detail: String },

    #[error("bootstrap failed: {failures} of {resamples} resamples did not converge")]
    BootstrapFailure { failures: usize, resamples: usize },

    #[error("empty survival curve")]
    EmptyCurve,

    #[error("invalid metric input: {reason}")]
    InvalidMetricInput { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
