//! Kaplan-Meier estimator for the waiting-time survival.
//!
//! The waiting time is observed for served and silent-leave patients
//! (`u = w`) and right-censored for reported departures (`u = t < w`).

use crate::error::Result;
use crate::model::{Category, Dataset};

use super::{CurveMethod, SurvivalCurve};

/// Product-limit estimator of the waiting-time survival `S_g`.
///
/// Ties follow the standard convention: events at a time are processed
/// before censorings at the same time. Between censoring times the running
/// product telescopes, so levels are computed as a single ratio per segment;
/// with no censored observations at all this reduces to exact count ratios
/// and the estimator equals the empirical survival of `u` bit for bit.
pub fn kaplan_meier_waiting(data: &Dataset) -> Result<SurvivalCurve> {
    let n = data.n();
    // (time, is_event) with events = observed waiting times
    let mut points: Vec<(f64, bool)> = data
        .iter()
        .map(|o| (o.u(), o.category() != Category::ReportedLeave))
        .collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut grid = Vec::new();
    let mut survival = Vec::new();

    // segment state: level entering the segment and at-risk count at entry
    let mut seg_level = 1.0f64;
    let mut seg_risk = n;
    let mut seg_events = 0usize;
    let mut at_risk = n;

    let mut i = 0;
    while i < points.len() {
        let t = points[i].0;
        let mut events = 0usize;
        let mut censored = 0usize;
        while i < points.len() && points[i].0 == t {
            if points[i].1 {
                events += 1;
            } else {
                censored += 1;
            }
            i += 1;
        }
        if events > 0 {
            seg_events += events;
            let level = seg_level * (seg_risk - seg_events) as f64 / seg_risk as f64;
            grid.push(t);
            survival.push(level);
        }
        at_risk -= events + censored;
        if censored > 0 {
            // close the segment after the censorings leave the risk set
            seg_level = seg_level * (seg_risk - seg_events) as f64 / seg_risk as f64;
            seg_risk = at_risk;
            seg_events = 0;
        }
    }

    // anchor at (0, 1) unless an event fell exactly on 0
    if grid.first().is_none_or(|&t| t > 0.0) {
        grid.insert(0, 0.0);
        survival.insert(0, 1.0);
    }

    let tau = grid.last().copied().unwrap_or(0.0);
    SurvivalCurve::new_step(grid, survival, tau, CurveMethod::KaplanMeier)
}
