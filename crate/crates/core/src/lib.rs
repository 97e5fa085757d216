//! Model-free conditional feature screening with exposure variables.
//!
//! The crate ranks ultrahigh-dimensional predictors by the C-SIRS utility,
//! the averaged squared conditional correlation between each predictor and
//! the response indicator process given an exposure variable, and provides
//! the SIRS, DC-SIS and CC-SIS baselines, varying-coefficient simulation
//! scenarios, and replication-level evaluation criteria.
//!
//! Predictor indices are 0-based throughout the library.

pub mod baselines;
pub mod csirs;
pub mod data;
pub mod error;
pub mod kernel;
pub mod metrics;
pub mod moments;
pub mod ranking;
pub mod simgen;

pub use baselines::{ccsis_utility_all, dcsis_utility_all, sirs_utility_all};
pub use csirs::{csirs_all, csirs_utility, DEFAULT_EPS};
pub use data::DataSet;
pub use error::{Result, ScreenError};
pub use kernel::{default_bandwidth, kernel_weight, BandwidthRule, KernelFamily, KernelSpec};
pub use metrics::{aggregate, min_model_size, rank_of, EvaluationMetrics, DEFAULT_QUANTILE_LEVELS};
pub use moments::{build_moment_table, ConditionalMomentTable};
pub use ranking::{rank_and_select, submodel_size, Method, ScreeningResult, UtilityVector};
pub use simgen::{generate, Replication, Scenario, ScenarioSpec};

/// Computes utilities for several methods on one dataset, building the
/// kernel table at most once.
pub struct Screener<'a> {
    data: &'a DataSet,
    table: Option<ConditionalMomentTable>,
    eps: f64,
}

impl<'a> Screener<'a> {
    /// Resolves the bandwidth and builds the shared table.
    pub fn new(data: &'a DataSet, spec: &KernelSpec, eps: f64) -> Result<Self> {
        let table = build_moment_table(data, spec)?;
        Ok(Self {
            data,
            table: Some(table),
            eps,
        })
    }

    /// A screener for methods that never smooth over the exposure.
    pub fn unconditional(data: &'a DataSet) -> Self {
        Self {
            data,
            table: None,
            eps: DEFAULT_EPS,
        }
    }

    /// The resolved bandwidth, if a table was built.
    pub fn bandwidth(&self) -> Option<f64> {
        self.table.as_ref().map(ConditionalMomentTable::bandwidth)
    }

    pub fn utilities(&self, method: Method) -> Result<UtilityVector> {
        let table = || {
            self.table.as_ref().ok_or_else(|| {
                ScreenError::InvalidBandwidth(format!("{method} needs a kernel table"))
            })
        };
        match method {
            Method::Csirs => csirs::csirs_all_with_table(self.data, table()?, self.eps),
            Method::Ccsis => baselines::ccsis_utility_all_with_table(self.data, table()?, self.eps),
            Method::Sirs => Ok(sirs_utility_all(self.data)),
            Method::Dcsis => Ok(dcsis_utility_all(self.data)),
        }
    }
}
