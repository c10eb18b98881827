//! Two-stage parametric estimation.
//!
//! Stage 1 fits the waiting-time parameters by the full likelihood, whose
//! waiting part is free of the patience parameters and of the reporting
//! function: served and silent-leave patients contribute `log g(u)`,
//! reported departures contribute `log S_g(u)`. Stage 2 fits the patience
//! parameters by the partial likelihood of the served category with the
//! stage-1 estimate plugged in.

mod simplex;

pub use simplex::{maximize, SimplexResult};

use crate::dist::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::model::{Category, Dataset};
use crate::quad;
use crate::simulate::replication_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative simplex diameter at which optimization stops.
const SIMPLEX_TOL: f64 = 1e-8;
/// Initial simplex step in log-parameter space.
const SIMPLEX_STEP: f64 = 0.25;
const MAX_ITER: usize = 4000;
/// Positivity floor for boundary-hitting patience rates.
const RATE_FLOOR: f64 = 1e-8;
/// Tolerance for the stage-2 normalizing integral; it sits inside a log in
/// an optimizer loop, so it is tighter than the model-level tolerance.
const NORMALIZER_TOL: f64 = 1e-10;

/// Observations in a canonical order so likelihood sums (and therefore the
/// fitted values) are invariant to dataset permutation bit for bit.
fn canonical_triples(data: &Dataset) -> Vec<(f64, bool, bool)> {
    let mut v: Vec<(f64, bool, bool)> = data.iter().map(|o| (o.u(), o.delta(), o.y())).collect();
    v.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    v
}

fn waiting_loglik_sorted(triples: &[(f64, bool, bool)], g: &DistributionSpec) -> f64 {
    triples
        .iter()
        .map(|&(u, delta, y)| {
            if delta && y {
                g.log_survival(u)
            } else {
                g.log_pdf(u)
            }
        })
        .sum()
}

/// Full log-likelihood in the waiting-time parameters. Terms involving the
/// patience distribution and the reporting function are additive constants
/// and are dropped. Returns `-inf` when a density vanishes at a data point.
pub fn waiting_loglik(data: &Dataset, g: &DistributionSpec) -> f64 {
    waiting_loglik_sorted(&canonical_triples(data), g)
}

/// `int_0^inf g(s) S_f(s) ds`, the stage-2 normalizer. Closed form when both
/// families are exponential, adaptive quadrature otherwise.
pub fn partial_normalizer(f: &DistributionSpec, g: &DistributionSpec) -> Result<f64> {
    if let (
        DistributionSpec::Exponential { rate: theta },
        DistributionSpec::Exponential { rate: gamma },
    ) = (f, g)
    {
        return Ok(gamma / (gamma + theta));
    }
    // tail beyond the horizon is bounded by S_g there
    let horizon = g.survival_horizon(1e-13);
    quad::integrate(|s| g.pdf(s) * f.survival(s), 0.0, horizon, NORMALIZER_TOL)
}

fn served_times_sorted(data: &Dataset) -> Vec<f64> {
    let mut v = data.times_in(Category::Served);
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn partial_loglik_sorted(
    served_u: &[f64],
    f: &DistributionSpec,
    g: &DistributionSpec,
) -> Result<f64> {
    if served_u.is_empty() {
        return Err(Error::InsufficientData {
            category: Category::Served,
        });
    }
    let log_norm = partial_normalizer(f, g)?.ln();
    Ok(served_u
        .iter()
        .map(|&u| g.log_pdf(u) + f.log_survival(u) - log_norm)
        .sum())
}

/// Partial log-likelihood of the served category in the patience parameters,
/// with the waiting-time estimate plugged in.
pub fn patience_partial_loglik(
    data: &Dataset,
    f: &DistributionSpec,
    g_hat: &DistributionSpec,
) -> Result<f64> {
    partial_loglik_sorted(&served_times_sorted(data), f, g_hat)
}

/// Stage-1 fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaitingFit {
    pub spec: DistributionSpec,
    /// Sandwich standard errors, one per parameter.
    pub stderr: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Stage-2 fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatienceFit {
    pub spec: DistributionSpec,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    /// The optimizer ran into the positivity floor; the reported value is
    /// the floor, not an interior maximum.
    pub at_boundary: bool,
}

fn exponential_waiting_closed_form(triples: &[(f64, bool, bool)]) -> Result<f64> {
    let events = triples.iter().filter(|&&(_, d, y)| !(d && y)).count();
    let total_u: f64 = triples.iter().map(|t| t.0).sum();
    if events == 0 || total_u <= 0.0 {
        return Err(Error::EstimationFailure {
            stage: "waiting-mle",
            detail: format!(
                "degenerate data: {events} density terms, total recorded time {total_u}"
            ),
        });
    }
    Ok(events as f64 / total_u)
}

/// Multi-start simplex maximization over log-parameters. Starts at the
/// supplied guess and at half/double of it.
fn maximize_log_params<F: Fn(&DistributionSpec) -> f64>(
    family: Family,
    guess: &[f64],
    objective: F,
) -> SimplexResult {
    let log_guess: Vec<f64> = guess.iter().map(|p| p.ln()).collect();
    let obj = |lp: &[f64]| {
        let params: Vec<f64> = lp.iter().map(|v| v.exp()).collect();
        match DistributionSpec::from_params(family, &params) {
            Ok(spec) => objective(&spec),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut best: Option<SimplexResult> = None;
    for shift in [0.5f64.ln(), 0.0, 2.0f64.ln()] {
        let start: Vec<f64> = log_guess.iter().map(|v| v + shift).collect();
        let r = maximize(obj, &start, SIMPLEX_STEP, SIMPLEX_TOL, MAX_ITER);
        let better = match &best {
            None => true,
            Some(b) => (r.converged && !b.converged) || (r.converged == b.converged && r.fx > b.fx),
        };
        if better {
            best = Some(r);
        }
    }
    best.expect("at least one start")
}

/// Stage-1 MLE of the waiting-time parameters. Exponential uses the closed
/// form `events / sum(u)`; Weibull maximizes numerically.
pub fn fit_waiting_mle(data: &Dataset, family: Family) -> Result<WaitingFit> {
    let triples = canonical_triples(data);
    match family {
        Family::Exponential => {
            let rate = exponential_waiting_closed_form(&triples)?;
            let spec = DistributionSpec::exponential(rate)?;
            Ok(WaitingFit {
                stderr: waiting_sandwich_stderr(&triples, &spec),
                loglik: waiting_loglik_sorted(&triples, &spec),
                spec,
                converged: true,
                iterations: 0,
            })
        }
        Family::Weibull => {
            let rate_guess = exponential_waiting_closed_form(&triples)?;
            let r = maximize_log_params(family, &[rate_guess, 1.0], |spec| {
                waiting_loglik_sorted(&triples, spec)
            });
            if !r.fx.is_finite() {
                return Err(Error::EstimationFailure {
                    stage: "waiting-mle",
                    detail: "likelihood unbounded or undefined at every start".to_string(),
                });
            }
            let params: Vec<f64> = r.x.iter().map(|v| v.exp()).collect();
            let spec = DistributionSpec::from_params(family, &params)?;
            Ok(WaitingFit {
                stderr: waiting_sandwich_stderr(&triples, &spec),
                loglik: r.fx,
                spec,
                converged: r.converged,
                iterations: r.iterations,
            })
        }
    }
}

/// Stage-1 MLE forced through the generic optimizer (used to cross-check
/// the closed form).
pub fn fit_waiting_mle_numeric(data: &Dataset, family: Family) -> Result<WaitingFit> {
    let triples = canonical_triples(data);
    let rate_guess = exponential_waiting_closed_form(&triples)?;
    let guess = match family {
        Family::Exponential => vec![rate_guess],
        Family::Weibull => vec![rate_guess, 1.0],
    };
    let r = maximize_log_params(family, &guess, |spec| waiting_loglik_sorted(&triples, spec));
    let params: Vec<f64> = r.x.iter().map(|v| v.exp()).collect();
    let spec = DistributionSpec::from_params(family, &params)?;
    Ok(WaitingFit {
        stderr: waiting_sandwich_stderr(&triples, &spec),
        loglik: r.fx,
        spec,
        converged: r.converged,
        iterations: r.iterations,
    })
}

/// Stage-2 MLE of the patience parameters given the stage-1 estimate.
pub fn fit_patience_partial_mle(
    data: &Dataset,
    family: Family,
    g_hat: &DistributionSpec,
) -> Result<PatienceFit> {
    let served = served_times_sorted(data);
    if served.is_empty() {
        return Err(Error::InsufficientData {
            category: Category::Served,
        });
    }
    let n1 = served.len() as f64;
    let s1: f64 = served.iter().sum();
    // rate of the served-time distribution; subtract the waiting rate when
    // that gives a usable positive starting value
    let served_rate = n1 / s1;
    let rate_guess = match g_hat {
        DistributionSpec::Exponential { rate } if served_rate - rate > 1e-6 => served_rate - rate,
        _ => served_rate,
    };
    let guess = match family {
        Family::Exponential => vec![rate_guess],
        Family::Weibull => vec![rate_guess, 1.0],
    };
    let r = maximize_log_params(family, &guess, |spec| {
        partial_loglik_sorted(&served, spec, g_hat).unwrap_or(f64::NEG_INFINITY)
    });

    let mut params: Vec<f64> = r.x.iter().map(|v| v.exp()).collect();
    let mut at_boundary = false;
    if params[0] <= RATE_FLOOR * 10.0 {
        params[0] = RATE_FLOOR;
        at_boundary = true;
    }
    let spec = DistributionSpec::from_params(family, &params)?;
    let loglik = partial_loglik_sorted(&served, &spec, g_hat)?;
    Ok(PatienceFit {
        spec,
        loglik,
        converged: r.converged && !at_boundary,
        iterations: r.iterations,
        at_boundary,
    })
}

/// Combined result of the two stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub waiting_family: Family,
    pub patience_family: Family,
    /// Waiting-time parameters (rate, or rate and shape).
    pub gamma: Vec<f64>,
    pub gamma_stderr: Option<Vec<f64>>,
    /// Patience-time parameters.
    pub theta: Vec<f64>,
    pub loglik_full: f64,
    pub loglik_partial: f64,
    pub gamma_converged: bool,
    pub theta_converged: bool,
    pub gamma_iterations: usize,
    pub theta_iterations: usize,
    pub theta_at_boundary: bool,
}

impl FitResult {
    pub fn waiting_spec(&self) -> Result<DistributionSpec> {
        DistributionSpec::from_params(self.waiting_family, &self.gamma)
    }

    pub fn patience_spec(&self) -> Result<DistributionSpec> {
        DistributionSpec::from_params(self.patience_family, &self.theta)
    }
}

/// Runs both stages.
pub fn fit_two_stage(
    data: &Dataset,
    patience_family: Family,
    waiting_family: Family,
) -> Result<FitResult> {
    let waiting = fit_waiting_mle(data, waiting_family)?;
    let patience = fit_patience_partial_mle(data, patience_family, &waiting.spec)?;
    Ok(FitResult {
        waiting_family,
        patience_family,
        gamma: waiting.spec.params(),
        gamma_stderr: Some(waiting.stderr),
        theta: patience.spec.params(),
        loglik_full: waiting.loglik,
        loglik_partial: patience.loglik,
        gamma_converged: waiting.converged,
        theta_converged: patience.converged,
        gamma_iterations: waiting.iterations,
        theta_iterations: patience.iterations,
        theta_at_boundary: patience.at_boundary,
    })
}

// ---------------------------------------------------------------------------
// Sandwich variance for the stage-1 estimator
// ---------------------------------------------------------------------------

/// Per-observation score contribution of the waiting likelihood.
fn waiting_term(u: f64, delta: bool, y: bool, g: &DistributionSpec) -> f64 {
    if delta && y {
        g.log_survival(u)
    } else {
        g.log_pdf(u)
    }
}

/// Sandwich `(P psi_dot)^{-1} P psi psi^T (P psi_dot)^{-1} / n`.
///
/// Exponential uses the analytic score `psi = (1 - delta*y)/gamma - u`;
/// Weibull differentiates the per-observation term numerically.
fn waiting_sandwich_stderr(triples: &[(f64, bool, bool)], g: &DistributionSpec) -> Vec<f64> {
    let n = triples.len() as f64;
    match *g {
        DistributionSpec::Exponential { rate } => {
            let mut a = 0.0; // mean of psi_dot
            let mut b = 0.0; // mean of psi^2
            for &(u, delta, y) in triples {
                let dens = if delta && y { 0.0 } else { 1.0 };
                let psi = dens / rate - u;
                a += -dens / (rate * rate);
                b += psi * psi;
            }
            a /= n;
            b /= n;
            if a == 0.0 {
                return vec![f64::NAN];
            }
            vec![(b / (a * a) / n).sqrt()]
        }
        DistributionSpec::Weibull { rate, shape } => {
            let params = [rate, shape];
            let h = [1e-5 * (1.0 + rate), 1e-5 * (1.0 + shape)];
            let term = |p: &[f64; 2], u: f64, d: bool, y: bool| {
                let spec = DistributionSpec::Weibull {
                    rate: p[0],
                    shape: p[1],
                };
                waiting_term(u, d, y, &spec)
            };
            let mut a = [[0.0f64; 2]; 2];
            let mut b = [[0.0f64; 2]; 2];
            for &(u, delta, y) in triples {
                let mut psi = [0.0f64; 2];
                for j in 0..2 {
                    let mut hi = params;
                    let mut lo = params;
                    hi[j] += h[j];
                    lo[j] -= h[j];
                    psi[j] = (term(&hi, u, delta, y) - term(&lo, u, delta, y)) / (2.0 * h[j]);
                }
                for j in 0..2 {
                    for k in 0..2 {
                        b[j][k] += psi[j] * psi[k];
                        let mut pp = params;
                        let mut pm = params;
                        let mut mp = params;
                        let mut mm = params;
                        pp[j] += h[j];
                        pp[k] += h[k];
                        pm[j] += h[j];
                        pm[k] -= h[k];
                        mp[j] -= h[j];
                        mp[k] += h[k];
                        mm[j] -= h[j];
                        mm[k] -= h[k];
                        a[j][k] += (term(&pp, u, delta, y) - term(&pm, u, delta, y)
                            - term(&mp, u, delta, y)
                            + term(&mm, u, delta, y))
                            / (4.0 * h[j] * h[k]);
                    }
                }
            }
            for j in 0..2 {
                for k in 0..2 {
                    a[j][k] /= n;
                    b[j][k] /= n;
                }
            }
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det == 0.0 {
                return vec![f64::NAN, f64::NAN];
            }
            let inv = [
                [a[1][1] / det, -a[0][1] / det],
                [-a[1][0] / det, a[0][0] / det],
            ];
            // V = inv * b * inv^T
            let mut v = [[0.0f64; 2]; 2];
            for j in 0..2 {
                for k in 0..2 {
                    for s in 0..2 {
                        for t in 0..2 {
                            v[j][k] += inv[j][s] * b[s][t] * inv[k][t];
                        }
                    }
                }
            }
            vec![(v[0][0] / n).sqrt(), (v[1][1] / n).sqrt()]
        }
    }
}

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    /// Per-parameter percentile bounds for the patience parameters.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    pub resamples: usize,
    pub failures: usize,
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Nonparametric bootstrap percentile interval for the patience parameters,
/// refitting both stages on each resample. Deterministic given `seed`; fails
/// when more than 5% of resamples do not produce a converged fit.
pub fn bootstrap_patience_ci(
    data: &Dataset,
    patience_family: Family,
    waiting_family: Family,
    resamples: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapCi> {
    if resamples < 100 {
        return Err(Error::InvalidConfig {
            reason: format!("bootstrap needs at least 100 resamples, got {resamples}"),
        });
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(Error::InvalidConfig {
            reason: format!("confidence level must lie in (0, 1), got {level}"),
        });
    }
    let n = data.n();
    let obs = data.observations();

    let fits: Vec<Option<Vec<f64>>> = (0..resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = replication_rng(seed, b);
            let resample: Vec<_> = (0..n).map(|_| obs[rng.random_range(0..n)]).collect();
            let data = Dataset::new(resample).ok()?;
            let fit = fit_two_stage(&data, patience_family, waiting_family).ok()?;
            (fit.gamma_converged && fit.theta_converged).then_some(fit.theta)
        })
        .collect();

    let failures = fits.iter().filter(|f| f.is_none()).count();
    if failures * 20 > resamples {
        return Err(Error::BootstrapFailure {
            failures,
            resamples,
        });
    }

    let dim = patience_family.dim();
    let alpha = 1.0 - level;
    let mut lower = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut vals: Vec<f64> = fits.iter().flatten().map(|t| t[j]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lower.push(percentile(&vals, alpha / 2.0));
        upper.push(percentile(&vals, 1.0 - alpha / 2.0));
    }
    Ok(BootstrapCi {
        lower,
        upper,
        level,
        resamples,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Observation, ReportingPolicy};
    use crate::simulate::{simulate_dataset, SimulationConfig};

    fn obs(u: f64, delta: bool, y: bool) -> Observation {
        Observation::new(u, delta, y).unwrap()
    }

    fn setting1(n: usize, seed: u64) -> Dataset {
        let c = SimulationConfig::new(
            DistributionSpec::exponential(4.0).unwrap(),
            DistributionSpec::exponential(10.0).unwrap(),
            ReportingPolicy::exp_decay(12.0).unwrap(),
            n,
            seed,
            1,
        )
        .unwrap();
        simulate_dataset(&c, 0)
    }

    #[test]
    fn single_served_observation_loglik_shape() {
        // one served patient at u = 1: loglik = log(gamma) - gamma, max at 1
        let data = Dataset::new(vec![obs(1.0, false, false)]).unwrap();
        let at = |gamma: f64| {
            waiting_loglik(&data, &DistributionSpec::exponential(gamma).unwrap())
        };
        assert!((at(1.0) - (-1.0)).abs() < 1e-12);
        assert!(at(1.0) > at(0.9));
        assert!(at(1.0) > at(1.1));
        let fit = fit_waiting_mle(&data, Family::Exponential).unwrap();
        assert_eq!(fit.spec.params(), vec![1.0]);
    }

    #[test]
    fn single_reported_observation_is_pure_survival_term() {
        // one reported departure at u = 1: loglik = -gamma, decreasing
        let data = Dataset::new(vec![obs(1.0, true, true)]).unwrap();
        let at = |gamma: f64| {
            waiting_loglik(&data, &DistributionSpec::exponential(gamma).unwrap())
        };
        assert!((at(2.0) - (-2.0)).abs() < 1e-12);
        assert!(at(0.5) > at(1.0));
        // no density terms at all: the closed form must refuse
        assert!(fit_waiting_mle(&data, Family::Exponential).is_err());
    }

    #[test]
    fn closed_form_is_one_over_u_for_one_served_patient() {
        let data = Dataset::new(vec![obs(2.0, false, false)]).unwrap();
        let fit = fit_waiting_mle(&data, Family::Exponential).unwrap();
        assert_eq!(fit.spec.params(), vec![0.5]);
    }

    #[test]
    fn closed_form_agrees_with_numeric_optimizer() {
        let data = setting1(500, 7);
        let closed = fit_waiting_mle(&data, Family::Exponential).unwrap();
        let numeric = fit_waiting_mle_numeric(&data, Family::Exponential).unwrap();
        assert!(numeric.converged);
        let a = closed.spec.params()[0];
        let b = numeric.spec.params()[0];
        assert!(((a - b) / a).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn waiting_rate_recovered_within_sandwich_bands() {
        // 3-sigma coverage of the true rate 10 across seeds
        let mut hits = 0;
        let seeds = 200;
        for seed in 0..seeds {
            let data = setting1(2000, seed);
            let fit = fit_waiting_mle(&data, Family::Exponential).unwrap();
            let rate = fit.spec.params()[0];
            let se = fit.stderr[0];
            if (rate - 10.0).abs() <= 3.0 * se {
                hits += 1;
            }
        }
        assert!(hits * 100 >= seeds * 99, "{hits}/{seeds}");
    }

    #[test]
    fn partial_loglik_exp_pair_matches_closed_form_maximizer() {
        let data = setting1(2000, 23);
        let g_hat = fit_waiting_mle(&data, Family::Exponential).unwrap().spec;
        let fit = fit_patience_partial_mle(&data, Family::Exponential, &g_hat).unwrap();
        assert!(fit.converged);

        let served = data.times_in(Category::Served);
        let closed = served.len() as f64 / served.iter().sum::<f64>() - g_hat.params()[0];
        let rel = ((fit.spec.params()[0] - closed) / closed).abs();
        assert!(rel < 1e-5, "{} vs {closed}", fit.spec.params()[0]);
    }

    #[test]
    fn patience_rate_near_truth_in_well_specified_model() {
        let data = setting1(2000, 31);
        let fit = fit_two_stage(&data, Family::Exponential, Family::Exponential).unwrap();
        assert!((fit.theta[0] - 4.0).abs() < 0.8, "{:?}", fit.theta);
        assert!((fit.gamma[0] - 10.0).abs() < 0.8, "{:?}", fit.gamma);
    }

    #[test]
    fn partial_loglik_finite_at_vanishing_patience_rate() {
        let data = setting1(200, 2);
        let g_hat = DistributionSpec::exponential(10.0).unwrap();
        let tiny = DistributionSpec::exponential(1e-12).unwrap();
        let ll = patience_partial_loglik(&data, &tiny, &g_hat).unwrap();
        assert!(ll.is_finite());
    }

    #[test]
    fn no_served_observations_is_an_error() {
        let data = Dataset::new(vec![obs(0.3, true, true), obs(0.4, true, false)]).unwrap();
        let g_hat = DistributionSpec::exponential(10.0).unwrap();
        assert!(matches!(
            fit_patience_partial_mle(&data, Family::Exponential, &g_hat),
            Err(Error::InsufficientData { .. })
        ));
        assert!(patience_partial_loglik(
            &data,
            &DistributionSpec::exponential(1.0).unwrap(),
            &g_hat
        )
        .is_err());
    }

    #[test]
    fn negative_implied_rate_hits_positivity_floor() {
        // served times much longer than the waiting-rate scale force the
        // implied patience rate negative
        let mut v = vec![obs(10.0, false, false)];
        v.extend((0..9).map(|_| obs(0.1, true, false)));
        let data = Dataset::new(v).unwrap();
        let g_hat = fit_waiting_mle(&data, Family::Exponential).unwrap().spec;
        let served_rate = 1.0 / 10.0;
        assert!(served_rate < g_hat.params()[0]);
        let fit = fit_patience_partial_mle(&data, Family::Exponential, &g_hat).unwrap();
        assert!(fit.at_boundary);
        assert!(!fit.converged);
        assert_eq!(fit.spec.params()[0], RATE_FLOOR);
    }

    #[test]
    fn scores_vanish_at_the_optimum() {
        let data = setting1(1500, 41);
        let n = data.n() as f64;
        let fit = fit_two_stage(&data, Family::Exponential, Family::Exponential).unwrap();
        let eps = 1e-6;

        let g = |rate: f64| waiting_loglik(&data, &DistributionSpec::exponential(rate).unwrap());
        let score_g = (g(fit.gamma[0] + eps) - g(fit.gamma[0] - eps)) / (2.0 * eps);
        assert!(score_g.abs() < 1e-4 * n, "{score_g}");

        let g_hat = fit.waiting_spec().unwrap();
        let f = |rate: f64| {
            patience_partial_loglik(&data, &DistributionSpec::exponential(rate).unwrap(), &g_hat)
                .unwrap()
        };
        let score_f = (f(fit.theta[0] + eps) - f(fit.theta[0] - eps)) / (2.0 * eps);
        assert!(score_f.abs() < 1e-4 * n, "{score_f}");
    }

    #[test]
    fn loglik_is_permutation_invariant() {
        let data = setting1(300, 3);
        let mut shuffled = data.observations().to_vec();
        shuffled.reverse();
        shuffled.swap(10, 200);
        let shuffled = Dataset::new(shuffled).unwrap();
        let g = DistributionSpec::exponential(9.0).unwrap();
        let f = DistributionSpec::exponential(3.5).unwrap();
        assert_eq!(
            waiting_loglik(&data, &g).to_bits(),
            waiting_loglik(&shuffled, &g).to_bits()
        );
        assert_eq!(
            patience_partial_loglik(&data, &f, &g).unwrap().to_bits(),
            patience_partial_loglik(&shuffled, &f, &g).unwrap().to_bits()
        );
    }

    #[test]
    fn weibull_waiting_fit_recovers_exponential_data() {
        // Weibull nests the exponential at shape 1
        let data = setting1(3000, 53);
        let fit = fit_waiting_mle(&data, Family::Weibull).unwrap();
        assert!(fit.converged);
        let p = fit.spec.params();
        assert!((p[0] - 10.0).abs() < 1.0, "{p:?}");
        assert!((p[1] - 1.0).abs() < 0.15, "{p:?}");
        assert_eq!(fit.stderr.len(), 2);
        assert!(fit.stderr.iter().all(|s| s.is_finite() && *s > 0.0));
    }

    #[test]
    fn bootstrap_is_deterministic_and_validates_input() {
        let data = setting1(300, 61);
        let a = bootstrap_patience_ci(&data, Family::Exponential, Family::Exponential, 100, 0.95, 9)
            .unwrap();
        let b = bootstrap_patience_ci(&data, Family::Exponential, Family::Exponential, 100, 0.95, 9)
            .unwrap();
        assert_eq!(a, b);
        assert!(a.lower[0] < a.upper[0]);
        assert_eq!(a.failures, 0);
        assert!(
            bootstrap_patience_ci(&data, Family::Exponential, Family::Exponential, 50, 0.95, 9)
                .is_err()
        );
    }

    #[test]
    fn bootstrap_fails_on_degenerate_data() {
        // no served patients: every resample fails stage 2
        let v: Vec<Observation> = (0..50)
            .map(|i| obs(0.1 + i as f64 * 0.01, true, i % 2 == 0))
            .collect();
        let data = Dataset::new(v).unwrap();
        assert!(bootstrap_patience_ci(
            &data,
            Family::Exponential,
            Family::Exponential,
            100,
            0.95,
            1
        )
        .is_err());
    }
}
