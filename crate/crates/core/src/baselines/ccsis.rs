use ndarray::ArrayView1;
use rayon::prelude::*;

use crate::data::DataSet;
use crate::error::{Result, ScreenError};
use crate::kernel::KernelSpec;
use crate::moments::{build_moment_table, ConditionalMomentTable};
use crate::ranking::{Method, UtilityVector};

/// Conditional correlation screening: the mean over exposure points `u_j` of
/// the squared Nadaraya–Watson conditional Pearson correlation between `X_k`
/// and the raw response.
pub fn ccsis_utility_all(data: &DataSet, spec: &KernelSpec, eps: f64) -> Result<UtilityVector> {
    let table = build_moment_table(data, spec)?;
    ccsis_utility_all_with_table(data, &table, eps)
}

pub fn ccsis_utility_all_with_table(
    data: &DataSet,
    table: &ConditionalMomentTable,
    eps: f64,
) -> Result<UtilityVector> {
    let n = data.n();
    if table.n() != n {
        return Err(ScreenError::TableMismatch {
            table: table.n(),
            data: n,
        });
    }
    let order = table.order();
    let ys: Vec<f64> = order.iter().map(|&i| data.y()[i]).collect();

    // Local mean and variance of y at every exposure point.
    let local_y: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let weights = table.weights_row(j);
            let total = table.total_weight(j);
            let mean = weights.iter().zip(&ys).map(|(w, y)| w * y).sum::<f64>() / total;
            let var = weights
                .iter()
                .zip(&ys)
                .map(|(w, y)| w * (y - mean) * (y - mean))
                .sum::<f64>()
                / total;
            (mean, var.max(0.0))
        })
        .collect();

    let omega = (0..data.p())
        .into_par_iter()
        .map(|k| column_utility(data.column(k), table, &ys, &local_y, eps))
        .collect();
    Ok(UtilityVector::new(Method::Ccsis, omega))
}

fn column_utility(
    column: ArrayView1<'_, f64>,
    table: &ConditionalMomentTable,
    ys: &[f64],
    local_y: &[(f64, f64)],
    eps: f64,
) -> f64 {
    let n = table.n();
    let xs: Vec<f64> = table.order().iter().map(|&i| column[i]).collect();
    let mut acc = 0.0;
    for (j, &(my, var_y)) in local_y.iter().enumerate() {
        if var_y <= eps {
            continue;
        }
        let weights = table.weights_row(j);
        let total = table.total_weight(j);
        let mx = weights.iter().zip(&xs).map(|(w, x)| w * x).sum::<f64>() / total;
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for ((w, x), y) in weights.iter().zip(&xs).zip(ys) {
            let dx = x - mx;
            sxx += w * dx * dx;
            sxy += w * dx * (y - my);
        }
        let var_x = (sxx / total).max(0.0);
        if var_x <= eps {
            continue;
        }
        let cov = sxy / total;
        acc += (cov * cov / (var_x * var_y)).min(1.0);
    }
    acc / n as f64
}
