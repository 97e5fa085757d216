//! Monte Carlo scenarios: AR-correlated Gaussian predictors, an exposure
//! derived from a latent Gaussian coordinate, and six varying-coefficient
//! response models.

mod coefficients;
mod sampling;

use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array1, ArrayView1};
use rand::Rng;
use rand_distr::{Bernoulli, Cauchy, Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::DataSet;
use crate::error::{Result, ScreenError};

pub use coefficients::{CoefficientProfile, ACTIVE_COUNT, REFERENCE_ACTIVE};
pub use sampling::{derive_seed, make_exposure, normal_cdf, sample_ar_gaussian, seeded_rng};

/// Upper bound on the log-mean before Poisson sampling.
pub const POISSON_LOG_MEAN_MAX: f64 = 30.0;

/// Upper bound on the exponent in the exponential response models, keeping
/// heavy-tailed draws finite.
pub const EXP_RESPONSE_ARG_MAX: f64 = 100.0;

/// Response model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Logistic varying-coefficient model.
    Ex1Case1,
    /// Poisson varying-coefficient model.
    Ex1Case2,
    /// `Y = exp(eta) + e`, `e ~ t(1)`.
    Ex2Case1,
    /// `Y = exp(eta + e)`, `e ~ t(1)`.
    Ex2Case2,
    /// Additive nonlinear model with `t(1)` noise.
    Ex2Case3,
    /// Heteroscedastic model where `X_600` drives the noise scale.
    Ex2Case4,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Ex1Case1,
        Scenario::Ex1Case2,
        Scenario::Ex2Case1,
        Scenario::Ex2Case2,
        Scenario::Ex2Case3,
        Scenario::Ex2Case4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Ex1Case1 => "ex1case1",
            Scenario::Ex1Case2 => "ex1case2",
            Scenario::Ex2Case1 => "ex2case1",
            Scenario::Ex2Case2 => "ex2case2",
            Scenario::Ex2Case3 => "ex2case3",
            Scenario::Ex2Case4 => "ex2case4",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = ScreenError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "");
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == key)
            .ok_or_else(|| ScreenError::UnsupportedScenario(s.to_string()))
    }
}

/// Where the latent exposure coordinate sits in the joint AR block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExposurePosition {
    /// Coordinate `p + 1`, most correlated with `X_p`.
    #[default]
    Last,
    /// Coordinate 1, most correlated with `X_1`.
    First,
}

/// A data-generating process and its true active set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    /// 0-based active indices, ascending.
    pub active_set: Vec<usize>,
    pub seed: u64,
    #[serde(default)]
    pub exposure_position: ExposurePosition,
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario, n: usize, p: usize, rho: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            scenario,
            n,
            p,
            rho,
            active_set: scaled_active_set(p)?,
            seed,
            exposure_position: ExposurePosition::Last,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `n = 200`, `p = 1000`, `rho = 0.5`.
    pub fn reference(scenario: Scenario, seed: u64) -> Self {
        Self::new(scenario, 200, 1000, 0.5, seed).expect("reference dimensions are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(ScreenError::InvalidScenario(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(ScreenError::InvalidScenario(format!(
                "rho must lie in [0, 1), got {}",
                self.rho
            )));
        }
        if self.active_set.len() != ACTIVE_COUNT {
            return Err(ScreenError::InvalidScenario(format!(
                "active set must have {ACTIVE_COUNT} entries"
            )));
        }
        if self.active_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScreenError::InvalidScenario(
                "active set must be strictly ascending".into(),
            ));
        }
        if self.active_set.iter().any(|&k| k >= self.p) {
            return Err(ScreenError::InvalidScenario(format!(
                "active index exceeds p = {}",
                self.p
            )));
        }
        Ok(())
    }

    /// The same scenario with the seed for replication `index`.
    pub fn for_replication(&self, index: u64) -> Self {
        Self {
            seed: derive_seed(self.seed, index),
            ..self.clone()
        }
    }
}

/// Active set for `p` predictors: the reference indices scaled by `p / 1000`,
/// rounded, and pushed apart so they stay distinct. Returned 0-based.
pub fn scaled_active_set(p: usize) -> Result<Vec<usize>> {
    if p < ACTIVE_COUNT {
        return Err(ScreenError::InvalidScenario(format!(
            "p must be at least {ACTIVE_COUNT}, got {p}"
        )));
    }
    let mut out: Vec<usize> = Vec::with_capacity(ACTIVE_COUNT);
    for (slot, &reference) in REFERENCE_ACTIVE.iter().enumerate() {
        let scaled = (reference as f64 * p as f64 / 1000.0).round() as usize;
        // Leave room for the slots still to be placed.
        let ceiling = p - (ACTIVE_COUNT - 1 - slot);
        let mut one_based = scaled.clamp(1, ceiling);
        if let Some(&prev) = out.last() {
            one_based = one_based.max(prev + 2);
        }
        out.push(one_based - 1);
    }
    Ok(out)
}

/// One simulated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub data: DataSet,
    pub scenario: ScenarioSpec,
    /// Draws whose exponent hit an overflow guard.
    pub clamped: usize,
}

/// Simulates one dataset; a pure function of `spec`.
pub fn generate(spec: &ScenarioSpec) -> Result<Replication> {
    generate_with_profile(spec, CoefficientProfile::Varying)
}

pub fn generate_with_profile(
    spec: &ScenarioSpec,
    profile: CoefficientProfile,
) -> Result<Replication> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let mut rng = seeded_rng(spec.seed);
    let z = sample_ar_gaussian(n, p + 1, spec.rho, &mut rng);
    let (x, latent) = match spec.exposure_position {
        ExposurePosition::Last => (z.slice(s![.., ..p]).to_owned(), z.column(p).to_owned()),
        ExposurePosition::First => (z.slice(s![.., 1..]).to_owned(), z.column(0).to_owned()),
    };
    let u = make_exposure(latent.view());

    let mut clamped = 0;
    let mut y = Array1::zeros(n);
    for i in 0..n {
        let (value, hit) = draw_response(
            spec.scenario,
            profile,
            x.row(i),
            &spec.active_set,
            u[i],
            &mut rng,
        );
        y[i] = value;
        clamped += usize::from(hit);
    }
    let data = DataSet::new(x, y, u)?;
    Ok(Replication {
        data,
        scenario: spec.clone(),
        clamped,
    })
}

/// Draws one response given a predictor row and exposure value. The flag
/// reports whether an overflow guard was applied.
pub fn draw_response<R: Rng + ?Sized>(
    scenario: Scenario,
    profile: CoefficientProfile,
    x: ArrayView1<'_, f64>,
    active: &[usize],
    u: f64,
    rng: &mut R,
) -> (f64, bool) {
    let b = profile.betas(u);
    let xa: [f64; ACTIVE_COUNT] = std::array::from_fn(|s| x[active[s]]);
    let eta: f64 = b.iter().zip(&xa).map(|(b, x)| b * x).sum();
    let cauchy = || Cauchy::new(0.0, 1.0).expect("unit scale");

    match scenario {
        Scenario::Ex1Case1 => {
            let prob = 1.0 / (1.0 + (-eta).exp());
            let hit = Bernoulli::new(prob)
                .expect("probability in [0, 1]")
                .sample(rng);
            (f64::from(u8::from(hit)), false)
        }
        Scenario::Ex1Case2 => {
            let hit = eta > POISSON_LOG_MEAN_MAX;
            let lambda = eta.min(POISSON_LOG_MEAN_MAX).exp();
            let count = if lambda > 0.0 {
                Poisson::new(lambda)
                    .expect("finite positive mean")
                    .sample(rng)
            } else {
                0.0
            };
            (count, hit)
        }
        Scenario::Ex2Case1 => {
            let e: f64 = cauchy().sample(rng);
            let (arg, hit) = guard(eta);
            (arg.exp() + e, hit)
        }
        Scenario::Ex2Case2 => {
            let e: f64 = cauchy().sample(rng);
            let (arg, hit) = guard(eta + e);
            (arg.exp(), hit)
        }
        Scenario::Ex2Case3 => {
            let e: f64 = cauchy().sample(rng);
            let truncated = if xa[2] < 2.0 { xa[2] } else { 0.0 };
            let y = b[0] * xa[0].exp()
                + b[1] * xa[1].powi(3)
                + 2.0 * b[2] * truncated
                + b[3] * xa[3]
                + 1.5 * b[4] * xa[4]
                + e;
            (y, false)
        }
        Scenario::Ex2Case4 => {
            let e: f64 = rng.sample(StandardNormal);
            let mean = b[0] * xa[0] + b[1] * xa[1] + b[2] * xa[2] + b[4] * xa[4];
            (mean + 2.0 * (b[3] * xa[3]).exp() * e, false)
        }
    }
}

fn guard(arg: f64) -> (f64, bool) {
    if arg > EXP_RESPONSE_ARG_MAX {
        (EXP_RESPONSE_ARG_MAX, true)
    } else {
        (arg, false)
    }
}
