//! Conditional sure independence ranking and screening (C-SIRS).
//!
//! For predictor `k` the utility is the average over response thresholds
//! `y_l` and exposure points `u_j` of the squared conditional correlation
//! between `X_k` and `I(Y <= y_l)` given `u_j`, with every conditional moment
//! estimated by Nadaraya–Watson smoothing over the exposure.
//!
//! Per predictor the work is `O(n^2)`: for each `u_j`, one pass over the
//! observations in ascending-`y` order accumulates the kernel-weighted,
//! locally centred predictor, and the prefix sum at each threshold position
//! is the local covariance numerator for every `l` tied at that position.

use ndarray::ArrayView1;
use rayon::prelude::*;

use crate::data::DataSet;
use crate::error::{Result, ScreenError};
use crate::kernel::KernelSpec;
use crate::moments::{build_moment_table, ConditionalMomentTable};
use crate::ranking::{Method, UtilityVector};

/// Local variances at or below this contribute nothing.
pub const DEFAULT_EPS: f64 = 1e-12;

/// C-SIRS utility of predictor `k` (0-based).
pub fn csirs_utility(
    data: &DataSet,
    k: usize,
    table: &ConditionalMomentTable,
    eps: f64,
) -> Result<f64> {
    if k >= data.p() {
        return Err(ScreenError::IndexOutOfRange {
            index: k,
            p: data.p(),
        });
    }
    if table.n() != data.n() {
        return Err(ScreenError::TableMismatch {
            table: table.n(),
            data: data.n(),
        });
    }
    Ok(utility_for_column(data.column(k), table, eps))
}

/// C-SIRS utilities for every predictor against one shared table.
pub fn csirs_all(data: &DataSet, spec: &KernelSpec, eps: f64) -> Result<UtilityVector> {
    let table = build_moment_table(data, spec)?;
    csirs_all_with_table(data, &table, eps)
}

pub fn csirs_all_with_table(
    data: &DataSet,
    table: &ConditionalMomentTable,
    eps: f64,
) -> Result<UtilityVector> {
    if table.n() != data.n() {
        return Err(ScreenError::TableMismatch {
            table: table.n(),
            data: data.n(),
        });
    }
    let omega = (0..data.p())
        .into_par_iter()
        .map(|k| utility_for_column(data.column(k), table, eps))
        .collect();
    Ok(UtilityVector::new(Method::Csirs, omega))
}

fn utility_for_column(
    column: ArrayView1<'_, f64>,
    table: &ConditionalMomentTable,
    eps: f64,
) -> f64 {
    let n = table.n();
    let order = table.order();
    let xs: Vec<f64> = order.iter().map(|&i| column[i]).collect();
    let mut prefix = vec![0.0; n];
    let mut acc = 0.0;

    for j in 0..n {
        let weights = table.weights_row(j);
        let total = table.total_weight(j);

        let mut s1 = 0.0;
        for (w, x) in weights.iter().zip(&xs) {
            s1 += w * x;
        }
        let mean = s1 / total;

        let mut running = 0.0;
        let mut s2 = 0.0;
        for ((w, x), slot) in weights.iter().zip(&xs).zip(prefix.iter_mut()) {
            let d = x - mean;
            running += w * d;
            s2 += w * d * d;
            *slot = running;
        }
        let var_x = (s2 / total).max(0.0);
        if var_x <= eps {
            continue;
        }

        let mut local = 0.0;
        for &(r, mult) in table.thresholds() {
            let cdf = table.sorted_cdf(j, r);
            let var_ind = (cdf * (1.0 - cdf)).max(0.0);
            if var_ind <= eps {
                continue;
            }
            // Subtracting running * cdf corrects for rounding in the local mean.
            let cov = (prefix[r] - running * cdf) / total;
            let term = (cov * cov / (var_x * var_ind)).min(1.0);
            local += mult as f64 * term;
        }
        acc += local;
    }
    acc / (n as f64 * n as f64)
}
