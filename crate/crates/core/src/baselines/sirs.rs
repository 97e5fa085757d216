use rayon::prelude::*;

use crate::data::{ascending_order, upper_positions, DataSet};
use crate::kernel::sample_sd;
use crate::ranking::{Method, UtilityVector};

/// Unconditional SIRS utilities: the mean over thresholds `y_l` of
/// `(n^-1 sum_i x~_ik I(y_i <= y_l))^2`, with each column standardized to
/// sample mean 0 and variance 1. The exposure is ignored; constant columns
/// score 0.
pub fn sirs_utility_all(data: &DataSet) -> UtilityVector {
    let n = data.n();
    let y = data.y();
    let order = ascending_order(y);
    let upper = upper_positions(y, &order);
    let mut counts = vec![0usize; n];
    for &r in &upper {
        counts[r] += 1;
    }

    let omega = (0..data.p())
        .into_par_iter()
        .map(|k| {
            let col = data.column(k);
            let sd = sample_sd(col);
            if sd == 0.0 || !sd.is_finite() {
                return 0.0;
            }
            let mean = col.sum() / n as f64;
            let nf = n as f64;
            let mut running = 0.0;
            let mut acc = 0.0;
            for (r, &i) in order.iter().enumerate() {
                running += (col[i] - mean) / sd;
                if counts[r] > 0 {
                    let rho = running / nf;
                    acc += counts[r] as f64 * rho * rho;
                }
            }
            acc / nf
        })
        .collect();
    UtilityVector::new(Method::Sirs, omega)
}
