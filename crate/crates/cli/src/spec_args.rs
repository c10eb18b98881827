//! Compact string syntax for model components, shared by flags and config
//! files: `exp:4`, `weibull:4:2`, `exp-decay:12`, `exp-rise:12`,
//! `constant:0.5`, `auto` / `0.05`.

use patience_core::dist::{DistributionSpec, Family};
use patience_core::model::ReportingPolicy;
use patience_core::nonparametric::{Bandwidth, Boundary, Kernel};

fn parse_number(raw: &str, what: &str) -> Result<f64, String> {
    raw.parse::<f64>()
        .map_err(|_| format!("{what}: `{raw}` is not a number"))
}

pub fn parse_distribution(s: &str) -> Result<DistributionSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["exp", rate] | ["exponential", rate] => {
            DistributionSpec::exponential(parse_number(rate, "rate")?).map_err(|e| e.to_string())
        }
        ["weibull", rate, shape] => DistributionSpec::weibull(
            parse_number(rate, "rate")?,
            parse_number(shape, "shape")?,
        )
        .map_err(|e| e.to_string()),
        _ => Err(format!(
            "`{s}` is not a distribution; expected exp:RATE or weibull:RATE:SHAPE"
        )),
    }
}

pub fn parse_reporting(s: &str) -> Result<ReportingPolicy, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["exp-decay", c] => {
            ReportingPolicy::exp_decay(parse_number(c, "c")?).map_err(|e| e.to_string())
        }
        ["exp-rise", c] => {
            ReportingPolicy::exp_rise(parse_number(c, "c")?).map_err(|e| e.to_string())
        }
        ["constant", p] => {
            ReportingPolicy::constant(parse_number(p, "p")?).map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "`{s}` is not a reporting policy; expected exp-decay:C, exp-rise:C, or constant:P"
        )),
    }
}

pub fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "exp" | "exponential" => Ok(Family::Exponential),
        "weibull" => Ok(Family::Weibull),
        _ => Err(format!("`{s}` is not a family; expected exponential or weibull")),
    }
}

pub fn parse_kernel(s: &str) -> Result<Kernel, String> {
    match s {
        "epanechnikov" => Ok(Kernel::Epanechnikov),
        "gaussian" => Ok(Kernel::Gaussian),
        _ => Err(format!("`{s}` is not a kernel; expected epanechnikov or gaussian")),
    }
}

pub fn parse_bandwidth(s: &str) -> Result<Bandwidth, String> {
    if s == "auto" {
        return Ok(Bandwidth::Auto);
    }
    let h = parse_number(s, "bandwidth")?;
    if h <= 0.0 || !h.is_finite() {
        return Err(format!("bandwidth must be positive, got {h}"));
    }
    Ok(Bandwidth::Fixed(h))
}

pub fn parse_boundary(s: &str) -> Result<Boundary, String> {
    match s {
        "reflection" => Ok(Boundary::Reflection),
        "none" => Ok(Boundary::None),
        _ => Err(format!("`{s}` is not a boundary rule; expected reflection or none")),
    }
}
