//! File formats: dataset CSV, survival-curve CSV, JSON sidecars.
//!
//! Numbers are written with 17 significant digits so a round trip through
//! the file recovers every f64 bit for bit. All writes go through a
//! temp-file-and-rename so readers never observe partial output.

use crate::error::{CliError, Result};
use patience_core::model::{Dataset, Observation};
use std::io::Write;
use std::path::Path;

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn bit(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Atomically write `contents` to `path`.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub const DATASET_HEADER: &str = "u,delta,y";

pub fn dataset_to_csv(data: &Dataset) -> String {
    let mut out = String::with_capacity(32 * (data.n() + 1));
    out.push_str(DATASET_HEADER);
    out.push('\n');
    for obs in data.iter() {
        out.push_str(&format_f64(obs.u()));
        out.push(',');
        out.push_str(bit(obs.delta()));
        out.push(',');
        out.push_str(bit(obs.y()));
        out.push('\n');
    }
    out
}

fn parse_bit(raw: &str, line: usize, field: &str) -> Result<bool> {
    match raw {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(CliError::validation(format!(
            "line {line}: {field} must be 0 or 1, got `{other}`"
        ))),
    }
}

/// Parse a dataset CSV, reporting the offending line on any violation.
pub fn dataset_from_csv(contents: &str) -> Result<Dataset> {
    let mut lines = contents.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == DATASET_HEADER => {}
        Some((_, header)) => {
            return Err(CliError::validation(format!(
                "line 1: expected header `{DATASET_HEADER}`, got `{header}`"
            )))
        }
        None => return Err(CliError::validation("empty dataset file")),
    }

    let mut observations = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let row = raw.trim_end();
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::validation(format!(
                "line {line}: expected 3 fields, got {}",
                fields.len()
            )));
        }
        let u: f64 = fields[0].parse().map_err(|_| {
            CliError::validation(format!("line {line}: u must be a number, got `{}`", fields[0]))
        })?;
        let delta = parse_bit(fields[1], line, "delta")?;
        let y = parse_bit(fields[2], line, "y")?;
        let obs = Observation::new(u, delta, y)
            .map_err(|e| CliError::validation(format!("line {line}: {e}")))?;
        observations.push(obs);
    }
    Dataset::new(observations).map_err(|e| CliError::validation(e.to_string()))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub const CURVE_HEADER: &str = "t,survival,survival_raw,a_hat";

/// Curve CSV with the estimator's companion columns: monotonized survival,
/// raw plug-in survival, and the reporting sub-CDF estimate.
pub fn curve_to_csv_with_extras(curve: &patience_core::SurvivalCurve) -> String {
    let survival = curve.survival();
    let raw = curve.survival_raw().unwrap_or(survival);
    let a_hat = curve.reporting_cdf();
    let mut out = String::with_capacity(80 * (survival.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for (i, &t) in curve.grid().iter().enumerate() {
        let a = a_hat.map_or(f64::NAN, |v| v[i]);
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_f64(t),
            format_f64(survival[i]),
            format_f64(raw[i]),
            format_f64(a)
        ));
    }
    out
}

/// Read the `t,survival` columns of a curve CSV back into memory.
pub fn curve_from_csv(contents: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut grid = Vec::new();
    let mut survival = Vec::new();
    for (idx, raw) in contents.lines().enumerate() {
        let row = raw.trim_end();
        if idx == 0 {
            if !row.starts_with("t,survival") {
                return Err(CliError::validation(format!(
                    "line 1: expected a curve header starting with `t,survival`, got `{row}`"
                )));
            }
            continue;
        }
        if row.is_empty() {
            continue;
        }
        let mut fields = row.split(',');
        let t: f64 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::validation(format!("line {}: bad t value", idx + 1)))?;
        let s: f64 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::validation(format!("line {}: bad survival value", idx + 1)))?;
        grid.push(t);
        survival.push(s);
    }
    Ok((grid, survival))
}
