//! Counting-process machinery: empirical at-risk and event fractions, and
//! the cumulative-hazard-style estimator of the reporting sub-CDF
//! `A(t) = pr(T <= t, Y = 1)`.

use crate::error::{Error, Result};
use crate::model::{Category, Dataset};
use serde::{Deserialize, Serialize};

/// Right-continuous step function with finitely many jumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCurve {
    initial: f64,
    times: Vec<f64>,
    values: Vec<f64>,
}

impl StepCurve {
    /// `jumps` must be sorted by strictly increasing time; `values[i]` is the
    /// level on `[times[i], times[i+1])`.
    pub fn new(initial: f64, jumps: Vec<(f64, f64)>) -> Result<Self> {
        for w in jumps.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidConfig {
                    reason: format!("step times must be strictly increasing: {} then {}", w[0].0, w[1].0),
                });
            }
        }
        let (times, values) = jumps.into_iter().unzip();
        Ok(StepCurve {
            initial,
            times,
            values,
        })
    }

    pub fn constant(value: f64) -> Self {
        StepCurve {
            initial: value,
            times: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.times.partition_point(|&x| x <= t) {
            0 => self.initial,
            k => self.values[k - 1],
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }
}

/// Empirical fraction of reported departures by time `t`:
/// `n^{-1} sum y_i delta_i 1{u_i <= t}`. Right-continuous, nondecreasing.
pub fn counting_process(data: &Dataset, t: f64) -> f64 {
    let hits = data
        .iter()
        .filter(|o| o.y() && o.delta() && o.u() <= t)
        .count();
    hits as f64 / data.n() as f64
}

/// Empirical at-risk fraction `n^{-1} sum 1{u_i >= t}`. Left-continuous,
/// nonincreasing.
pub fn at_risk(data: &Dataset, t: f64) -> f64 {
    let hits = data.iter().filter(|o| o.u() >= t).count();
    hits as f64 / data.n() as f64
}

/// Minimum at-risk count the estimation window must keep, `max(5, 0.01 n)`,
/// capped at `n`.
fn risk_floor_count(n: usize) -> usize {
    let frac = (0.01 * n as f64).ceil() as usize;
    frac.max(5).min(n)
}

/// Upper end of the estimation window: the largest `t` whose at-risk
/// fraction still meets the floor, i.e. the m-th largest recorded time.
pub fn estimation_window(data: &Dataset) -> f64 {
    let mut us: Vec<f64> = data.iter().map(|o| o.u()).collect();
    us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = risk_floor_count(data.n());
    us[us.len() - m]
}

/// The estimator of the reporting sub-CDF, `A_hat = 1 - exp(-D_hat)`, where
/// `D_hat(t)` sums `(d_k/n) / Y_hat(s_k)` over distinct reported-departure
/// times `s_k <= t` (tied events aggregated into one jump).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportingCdfEstimate {
    cumulative: StepCurve,
    sub_cdf: StepCurve,
    tau: f64,
}

impl ReportingCdfEstimate {
    pub fn fit(data: &Dataset) -> Self {
        let n = data.n();
        let mut us: Vec<f64> = data.iter().map(|o| o.u()).collect();
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut events: Vec<f64> = data
            .iter()
            .filter(|o| o.category() == Category::ReportedLeave)
            .map(|o| o.u())
            .collect();
        events.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut d_jumps = Vec::new();
        let mut a_jumps = Vec::new();
        let mut cum = 0.0;
        let mut i = 0;
        while i < events.len() {
            let s = events[i];
            let mut ties = 1;
            while i + ties < events.len() && events[i + ties] == s {
                ties += 1;
            }
            // at-risk count #{u >= s}
            let at_risk_count = n - us.partition_point(|&x| x < s);
            cum += ties as f64 / at_risk_count as f64;
            d_jumps.push((s, cum));
            a_jumps.push((s, 1.0 - (-cum).exp()));
            i += ties;
        }

        ReportingCdfEstimate {
            cumulative: StepCurve::new(0.0, d_jumps).expect("event times deduplicated"),
            sub_cdf: StepCurve::new(0.0, a_jumps).expect("event times deduplicated"),
            tau: estimation_window(data),
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `D_hat` as a step curve.
    pub fn cumulative(&self) -> &StepCurve {
        &self.cumulative
    }

    /// `A_hat` as a step curve.
    pub fn sub_cdf(&self) -> &StepCurve {
        &self.sub_cdf
    }

    /// `A_hat(t)`; evaluation is restricted to the window `[0, tau]`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if t > self.tau {
            return Err(Error::WindowExceeded { t, tau: self.tau });
        }
        Ok(self.sub_cdf.eval(t))
    }
}

/// Convenience wrapper: fit and evaluate at one time.
pub fn reporting_cdf_estimate(data: &Dataset, t: f64) -> Result<f64> {
    ReportingCdfEstimate::fit(data).value_at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Observation;

    fn toy_dataset() -> Dataset {
        Dataset::new(vec![
            Observation::new(0.5, false, false).unwrap(),
            Observation::new(0.1, true, true).unwrap(),
            Observation::new(0.2, true, false).unwrap(),
            Observation::new(0.3, false, false).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn step_curve_is_right_continuous() {
        let s = StepCurve::new(0.0, vec![(1.0, 0.5), (2.0, 0.8)]).unwrap();
        assert_eq!(s.eval(0.99), 0.0);
        assert_eq!(s.eval(1.0), 0.5);
        assert_eq!(s.eval(1.5), 0.5);
        assert_eq!(s.eval(2.0), 0.8);
        assert_eq!(s.eval(10.0), 0.8);
    }

    #[test]
    fn step_curve_rejects_unsorted_times() {
        assert!(StepCurve::new(0.0, vec![(1.0, 0.5), (1.0, 0.8)]).is_err());
    }

    #[test]
    fn counting_and_at_risk_fractions() {
        let data = toy_dataset();
        assert_eq!(counting_process(&data, 0.15), 0.25);
        assert_eq!(at_risk(&data, 0.15), 0.75);
        assert_eq!(counting_process(&data, 0.0), 0.0);
        assert_eq!(at_risk(&data, 0.0), 1.0);
        // beyond the last observation
        assert_eq!(counting_process(&data, 1.0), 0.25);
        assert_eq!(at_risk(&data, 1.0), 0.0);
        // at-risk includes ties at t
        assert_eq!(at_risk(&data, 0.5), 0.25);
    }

    #[test]
    fn no_reported_leaves_means_zero_curve() {
        let data = Dataset::new(vec![
            Observation::new(0.5, false, false).unwrap(),
            Observation::new(0.2, true, false).unwrap(),
        ])
        .unwrap();
        let est = ReportingCdfEstimate::fit(&data);
        assert_eq!(est.value_at(est.tau()).unwrap(), 0.0);
        assert!(est.sub_cdf().times().is_empty());
    }

    #[test]
    fn single_reported_observation_hand_check() {
        // one reported departure at u = 1: D_hat(1) = 1, A_hat = 1 - e^{-1}
        let data = Dataset::new(vec![Observation::new(1.0, true, true).unwrap()]).unwrap();
        let est = ReportingCdfEstimate::fit(&data);
        assert_eq!(est.tau(), 1.0);
        assert_eq!(est.cumulative().eval(1.0), 1.0);
        let a = est.value_at(1.0).unwrap();
        assert!((a - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!(matches!(
            est.value_at(1.5),
            Err(Error::WindowExceeded { .. })
        ));
    }

    #[test]
    fn ties_are_aggregated() {
        // two reported departures at the same time share one jump with the
        // at-risk count evaluated once
        let data = Dataset::new(vec![
            Observation::new(0.5, true, true).unwrap(),
            Observation::new(0.5, true, true).unwrap(),
            Observation::new(0.9, false, false).unwrap(),
        ])
        .unwrap();
        let est = ReportingCdfEstimate::fit(&data);
        assert_eq!(est.cumulative().times().len(), 1);
        assert_eq!(est.cumulative().eval(0.5), 2.0 / 3.0);
    }

    #[test]
    fn estimator_is_order_invariant() {
        let data = toy_dataset();
        let mut rev: Vec<Observation> = data.observations().to_vec();
        rev.reverse();
        let shuffled = Dataset::new(rev).unwrap();
        assert_eq!(
            ReportingCdfEstimate::fit(&data),
            ReportingCdfEstimate::fit(&shuffled)
        );
    }

    #[test]
    fn window_uses_risk_floor() {
        // n = 12: floor count = max(5, 1) = 5 -> 5th largest of 0.1..1.2
        let obs: Vec<Observation> = (1..=12)
            .map(|i| Observation::new(i as f64 / 10.0, false, false).unwrap())
            .collect();
        let data = Dataset::new(obs).unwrap();
        assert!((estimation_window(&data) - 0.8).abs() < 1e-12);
    }
}
