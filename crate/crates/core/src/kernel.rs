//! Smoothing kernels and bandwidth rules for the exposure variable.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScreenError};

/// Kernel family used for the exposure weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// `K(v) = 0.75 (1 - v^2)` on `|v| <= 1`.
    #[default]
    Epanechnikov,
}

impl KernelFamily {
    /// The unscaled kernel `K(v)`.
    #[inline]
    pub fn density(self, v: f64) -> f64 {
        match self {
            KernelFamily::Epanechnikov => {
                if v.abs() <= 1.0 {
                    0.75 * (1.0 - v * v)
                } else {
                    0.0
                }
            }
        }
    }

    /// The scaled kernel `K_h(t) = K(t / h) / h`.
    #[inline]
    pub fn weight(self, t: f64, h: f64) -> f64 {
        self.density(t / h) / h
    }
}

/// How the bandwidth `h` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum BandwidthRule {
    /// A fixed bandwidth.
    Fixed { h: f64 },
    /// `h = scale * n^(-exponent)`.
    Rate { scale: f64, exponent: f64 },
    /// `h = 1.06 * sd(u) * n^(-1/5)`; see [`default_bandwidth`].
    #[default]
    Silverman,
}

impl BandwidthRule {
    pub fn fixed(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(ScreenError::InvalidBandwidth(format!(
                "h must be positive, got {h}"
            )));
        }
        Ok(BandwidthRule::Fixed { h })
    }

    /// Rate rule `scale * n^(-exponent)`. For a second-order kernel the
    /// exponent must lie in the open interval `(1/8, 1/4)`.
    pub fn rate(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(ScreenError::InvalidBandwidth(format!(
                "rate scale must be positive, got {scale}"
            )));
        }
        if !(exponent > 0.125 && exponent < 0.25) {
            return Err(ScreenError::InvalidBandwidth(format!(
                "rate exponent must lie in (1/8, 1/4), got {exponent}"
            )));
        }
        Ok(BandwidthRule::Rate { scale, exponent })
    }
}

/// Kernel family plus bandwidth rule.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub rule: BandwidthRule,
}

impl KernelSpec {
    pub fn fixed(h: f64) -> Result<Self> {
        Ok(Self {
            family: KernelFamily::Epanechnikov,
            rule: BandwidthRule::fixed(h)?,
        })
    }

    /// Resolves the rule against an exposure sample.
    pub fn bandwidth_for(&self, u: ArrayView1<'_, f64>) -> Result<f64> {
        let h = match self.rule {
            BandwidthRule::Fixed { h } => h,
            BandwidthRule::Rate { scale, exponent } => scale * (u.len() as f64).powf(-exponent),
            BandwidthRule::Silverman => default_bandwidth(u)?,
        };
        if !(h.is_finite() && h > 0.0) {
            return Err(ScreenError::InvalidBandwidth(format!(
                "resolved bandwidth {h} is not positive"
            )));
        }
        Ok(h)
    }
}

/// `K_h(t)` for the given family and a concrete bandwidth.
#[inline]
pub fn kernel_weight(t: f64, family: KernelFamily, h: f64) -> f64 {
    family.weight(t, h)
}

/// Sample standard deviation with the `n - 1` denominator.
pub fn sample_sd(v: ArrayView1<'_, f64>) -> f64 {
    let n = v.len();
    if n < 2 {
        return 0.0;
    }
    let mean = v.sum() / n as f64;
    let ss: f64 = v.iter().map(|&a| (a - mean) * (a - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Rule-of-thumb bandwidth `1.06 * sd(u) * n^(-1/5)`.
pub fn default_bandwidth(u: ArrayView1<'_, f64>) -> Result<f64> {
    let n = u.len();
    if n < 2 {
        return Err(ScreenError::TooFewObservations { min: 2, found: n });
    }
    if u.iter().all(|&v| v == u[0]) {
        return Err(ScreenError::ConstantExposure);
    }
    let sd = sample_sd(u);
    if sd == 0.0 || !sd.is_finite() {
        return Err(ScreenError::ConstantExposure);
    }
    Ok(1.06 * sd * (n as f64).powf(-0.2))
}
