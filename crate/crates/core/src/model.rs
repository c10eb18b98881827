//! The observation model: recorded triples, patient categories, category
//! sub-densities, and the population identities the estimators target.
//!
//! A recorded time `U` is either the patience time `T` (reported departures)
//! or the (virtual) waiting time `W` (everyone else), `U = Y*T + (1-Y)*W`.
//! Three categories arise: served patients (`delta = 0`), reported departures
//! (`delta = 1, y = 1`), and silent departures (`delta = 1, y = 0`).

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::quad;
use serde::{Deserialize, Serialize};

/// Truncation point for improper integrals: both survival functions are
/// below this at the chosen horizon, so the discarded tail is negligible.
const TAIL_EPS: f64 = 1e-12;
/// Absolute tolerance for model-level quadrature.
pub const QUAD_TOL: f64 = 1e-8;
/// Category probabilities below this are treated as degenerate.
const PROB_FLOOR: f64 = 1e-12;

/// Patient category, determined by `(delta, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Category {
    /// Got service; patience time right-censored by the waiting time.
    Served,
    /// Left and reported it; patience time observed.
    ReportedLeave,
    /// Left silently; patience time left-censored by the virtual waiting time.
    SilentLeave,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::Served,
        Category::ReportedLeave,
        Category::SilentLeave,
    ];

    /// 1-based index, matching the conventional C1/C2/C3 labels.
    pub fn index(self) -> usize {
        match self {
            Category::Served => 1,
            Category::ReportedLeave => 2,
            Category::SilentLeave => 3,
        }
    }
}

/// One recorded triple `(u, delta, y)`.
///
/// Construction enforces the mechanism invariant `y = 1 => delta = 1`:
/// a reported departure is necessarily a departure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    u: f64,
    delta: bool,
    y: bool,
}

impl Observation {
    pub fn new(u: f64, delta: bool, y: bool) -> Result<Self> {
        if !u.is_finite() || u < 0.0 {
            return Err(Error::InvalidObservation {
                reason: format!("recorded time must be finite and nonnegative, got {u}"),
            });
        }
        if y && !delta {
            return Err(Error::InvalidObservation {
                reason: "delta=0 with y=1 is impossible: a reported departure implies departure"
                    .to_string(),
            });
        }
        Ok(Observation { u, delta, y })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn delta(&self) -> bool {
        self.delta
    }

    pub fn y(&self) -> bool {
        self.y
    }

    pub fn category(&self) -> Category {
        match (self.delta, self.y) {
            (false, _) => Category::Served,
            (true, true) => Category::ReportedLeave,
            (true, false) => Category::SilentLeave,
        }
    }
}

/// An ordered sample of observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    observations: Vec<Observation>,
}

impl Dataset {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Dataset { observations })
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observation> {
        self.observations.iter()
    }

    /// Counts `[n1, n2, n3]` by category.
    pub fn category_counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for obs in &self.observations {
            counts[obs.category().index() - 1] += 1;
        }
        counts
    }

    /// Recorded times of the observations in `category`, in dataset order.
    pub fn times_in(&self, category: Category) -> Vec<f64> {
        self.observations
            .iter()
            .filter(|o| o.category() == category)
            .map(|o| o.u)
            .collect()
    }
}

/// The announcement probability `q(t) = pr(report | patience time = t)`.
pub trait Reporting {
    fn q(&self, t: f64) -> f64;
}

/// The reporting shapes exercised by the simulation study, in a form that
/// serializes cleanly. Arbitrary `q` functions are accepted in-process via
/// the [`Reporting`] impl for closures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportingPolicy {
    /// `q(t) = exp(-c t)`: early leavers report, late ones drift away.
    ExpDecay { c: f64 },
    /// `q(t) = 1 - exp(-c t)`.
    ExpRise { c: f64 },
    /// `q(t) = p`.
    Constant { p: f64 },
}

impl ReportingPolicy {
    pub fn exp_decay(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "decay coefficient must be finite and nonnegative",
            });
        }
        Ok(ReportingPolicy::ExpDecay { c })
    }

    pub fn exp_rise(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "rise coefficient must be finite and nonnegative",
            });
        }
        Ok(ReportingPolicy::ExpRise { c })
    }

    pub fn constant(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "constant reporting probability must lie in [0, 1]",
            });
        }
        Ok(ReportingPolicy::Constant { p })
    }
}

impl Reporting for ReportingPolicy {
    fn q(&self, t: f64) -> f64 {
        match *self {
            ReportingPolicy::ExpDecay { c } => (-c * t).exp(),
            ReportingPolicy::ExpRise { c } => 1.0 - (-c * t).exp(),
            ReportingPolicy::Constant { p } => p,
        }
    }
}

impl<F: Fn(f64) -> f64> Reporting for F {
    fn q(&self, t: f64) -> f64 {
        self(t)
    }
}

impl std::fmt::Display for ReportingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ReportingPolicy::ExpDecay { c } => write!(f, "exp-decay(c={c})"),
            ReportingPolicy::ExpRise { c } => write!(f, "exp-rise(c={c})"),
            ReportingPolicy::Constant { p } => write!(f, "constant(p={p})"),
        }
    }
}

/// Truncation horizon: the time where both survivals are below `TAIL_EPS`.
pub fn integration_horizon(f: &DistributionSpec, g: &DistributionSpec) -> f64 {
    f.survival_horizon(TAIL_EPS).max(g.survival_horizon(TAIL_EPS))
}

/// Sub-density `h_i(t) = d/dt pr(U <= t, C = i)` for patience distribution
/// `f`, waiting distribution `g`, and reporting function `q`:
///
/// - served: `h1(t) = g(t) * S_f(t)`
/// - reported: `h2(t) = q(t) * f(t) * S_g(t)`
/// - silent: `h3(t) = g(t) * int_0^t (1 - q(x)) f(x) dx`
pub fn sub_density<Q: Reporting>(
    category: Category,
    t: f64,
    f: &DistributionSpec,
    g: &DistributionSpec,
    q: &Q,
) -> Result<f64> {
    match category {
        Category::Served => Ok(g.pdf(t) * f.survival(t)),
        Category::ReportedLeave => Ok(q.q(t) * f.pdf(t) * g.survival(t)),
        Category::SilentLeave => {
            let inner = quad::integrate(|x| (1.0 - q.q(x)) * f.pdf(x), 0.0, t, QUAD_TOL)?;
            Ok(g.pdf(t) * inner.max(0.0))
        }
    }
}

/// `pr(C = i)`, by quadrature of the sub-density over the truncated line.
pub fn category_probability<Q: Reporting>(
    category: Category,
    f: &DistributionSpec,
    g: &DistributionSpec,
    q: &Q,
) -> Result<f64> {
    let horizon = integration_horizon(f, g);
    let p = quad::integrate(
        |t| sub_density(category, t, f, g, q).unwrap_or(f64::NAN),
        0.0,
        horizon,
        QUAD_TOL,
    )?;
    if !p.is_finite() {
        return Err(Error::QuadratureNonConvergence {
            a: 0.0,
            b: horizon,
            estimate: p,
            error_bound: f64::INFINITY,
            tol: QUAD_TOL,
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Density of the recorded time `U` given the category, `h_i / pr(C = i)`.
pub fn conditional_density<Q: Reporting>(
    category: Category,
    t: f64,
    f: &DistributionSpec,
    g: &DistributionSpec,
    q: &Q,
) -> Result<f64> {
    let p = category_probability(category, f, g, q)?;
    if p < PROB_FLOOR {
        return Err(Error::ModelDegeneracy { category, prob: p });
    }
    Ok(sub_density(category, t, f, g, q)? / p)
}

/// The reporting sub-CDF `A(t) = int_0^t q(s) f(s) ds = pr(T <= t, Y = 1)`.
pub fn reporting_sub_cdf<Q: Reporting>(t: f64, f: &DistributionSpec, q: &Q) -> Result<f64> {
    let v = quad::integrate(|s| q.q(s) * f.pdf(s), 0.0, t, QUAD_TOL)?;
    Ok(v.max(0.0))
}

/// Reconstructs `F(t)` from the population quantities the nonparametric
/// estimator plugs in:
///
/// `F(t) = (p3 r3(t) + p1 r1(t) A(t)) / (p3 r3(t) + p1 r1(t))`.
///
/// This is the identity the plug-in estimator rests on; it must agree with
/// `f.cdf(t)` for every valid model.
pub fn population_cdf_reconstruction<Q: Reporting>(
    t: f64,
    f: &DistributionSpec,
    g: &DistributionSpec,
    q: &Q,
) -> Result<f64> {
    let p1 = category_probability(Category::Served, f, g, q)?;
    let p3 = category_probability(Category::SilentLeave, f, g, q)?;
    if p1 < PROB_FLOOR {
        return Err(Error::ModelDegeneracy {
            category: Category::Served,
            prob: p1,
        });
    }
    if p3 < PROB_FLOOR {
        return Err(Error::ModelDegeneracy {
            category: Category::SilentLeave,
            prob: p3,
        });
    }
    let r1 = sub_density(Category::Served, t, f, g, q)? / p1;
    let r3 = sub_density(Category::SilentLeave, t, f, g, q)? / p3;
    let a = reporting_sub_cdf(t, f, q)?;
    let denom = p3 * r3 + p1 * r1;
    if denom <= 0.0 {
        return Err(Error::ModelDegeneracy {
            category: Category::Served,
            prob: denom,
        });
    }
    Ok((p3 * r3 + p1 * r1 * a) / denom)
}
