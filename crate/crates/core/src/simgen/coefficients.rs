use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Number of active predictors in every scenario.
pub const ACTIVE_COUNT: usize = 5;

/// 1-based active indices at `p = 1000`.
pub const REFERENCE_ACTIVE: [usize; ACTIVE_COUNT] = [2, 100, 400, 600, 1000];

/// Varying-coefficient functions attached to the active predictors.
///
/// Slot `s` refers to the `s`-th active predictor in ascending index order,
/// i.e. the predictor at [`REFERENCE_ACTIVE`]`[s]` when `p = 1000`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientProfile {
    /// `beta_2(u) = 2 I(u > 0.4)`, `beta_100(u) = 1 + u`,
    /// `beta_400(u) = (2 - 3u)^2`, `beta_600(u) = 2 sin(2 pi u)`,
    /// `beta_1000(u) = exp{u / (u + 1)}`.
    #[default]
    Varying,
    /// Every coefficient is zero.
    Null,
}

impl CoefficientProfile {
    pub fn beta(self, slot: usize, u: f64) -> f64 {
        match self {
            CoefficientProfile::Null => 0.0,
            CoefficientProfile::Varying => match slot {
                0 => {
                    if u > 0.4 {
                        2.0
                    } else {
                        0.0
                    }
                }
                1 => 1.0 + u,
                2 => (2.0 - 3.0 * u).powi(2),
                3 => 2.0 * (2.0 * PI * u).sin(),
                4 => (u / (u + 1.0)).exp(),
                _ => 0.0,
            },
        }
    }

    /// All five coefficients at `u`.
    pub fn betas(self, u: f64) -> [f64; ACTIVE_COUNT] {
        std::array::from_fn(|s| self.beta(s, u))
    }
}
