//! Kernel density estimation on the nonnegative half-line.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Epanechnikov,
    Gaussian,
}

impl Kernel {
    fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Epanechnikov => {
                if u.abs() < 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
            Kernel::Gaussian => {
                const INV_SQRT_2PI: f64 = 0.3989422804014327;
                INV_SQRT_2PI * (-0.5 * u * u).exp()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    Auto,
    Fixed(f64),
}

/// Boundary handling at 0. Both conditional densities here live on
/// `[0, inf)` with positive mass near 0, where a plain kernel loses half its
/// weight; reflection restores it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Reflection,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kernel: Kernel,
    pub bandwidth: Bandwidth,
    pub boundary: Boundary,
}

impl KernelSpec {
    pub fn new(kernel: Kernel, bandwidth: Bandwidth, boundary: Boundary) -> Result<Self> {
        if let Bandwidth::Fixed(h) = bandwidth {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "bandwidth",
                    value: h,
                    reason: "must be finite and positive",
                });
            }
        }
        Ok(KernelSpec {
            kernel,
            bandwidth,
            boundary,
        })
    }
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec {
            kernel: Kernel::Epanechnikov,
            bandwidth: Bandwidth::Auto,
            boundary: Boundary::Reflection,
        }
    }
}

/// Linear-interpolation quantile of a sorted slice.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Silverman's rule of thumb, `0.9 min(sd, IQR/1.34) m^{-1/5}`, with the
/// usual fallback chain for degenerate spreads.
pub fn silverman_bandwidth(sorted: &[f64]) -> f64 {
    let m = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / m;
    let sd = if sorted.len() > 1 {
        (sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    let mut spread = sd.min(iqr / 1.34);
    if spread <= 0.0 {
        spread = sd;
    }
    if spread <= 0.0 {
        spread = sorted[0].abs();
    }
    if spread <= 0.0 {
        spread = 1.0;
    }
    0.9 * spread * m.powf(-0.2)
}

/// A kernel density fitted to one sample. Construction sorts the sample, so
/// evaluation is invariant to the input order bit for bit.
#[derive(Debug, Clone)]
pub struct KernelDensity {
    xs: Vec<f64>,
    bandwidth: f64,
    kernel: Kernel,
    boundary: Boundary,
}

impl KernelDensity {
    pub fn fit(sample: &[f64], spec: &KernelSpec) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut xs = sample.to_vec();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let bandwidth = match spec.bandwidth {
            Bandwidth::Fixed(h) => h,
            Bandwidth::Auto => silverman_bandwidth(&xs),
        };
        Ok(KernelDensity {
            xs,
            bandwidth,
            kernel: spec.kernel,
            boundary: spec.boundary,
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn eval(&self, t: f64) -> f64 {
        let h = self.bandwidth;
        let mut sum = 0.0;
        for &x in &self.xs {
            sum += self.kernel.eval((t - x) / h);
            if self.boundary == Boundary::Reflection {
                sum += self.kernel.eval((t + x) / h);
            }
        }
        sum / (self.xs.len() as f64 * h)
    }
}

/// One-shot density value at `t`.
pub fn kernel_density(sample: &[f64], spec: &KernelSpec, t: f64) -> Result<f64> {
    Ok(KernelDensity::fit(sample, spec)?.eval(t))
}
