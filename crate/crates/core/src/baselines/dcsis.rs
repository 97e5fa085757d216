use ndarray::{Array2, ArrayView1};
use rayon::prelude::*;

use crate::csirs::DEFAULT_EPS;
use crate::data::DataSet;
use crate::ranking::{Method, UtilityVector};

/// Squared sample distance correlation between each predictor and the
/// response, V-statistic form. The exposure is ignored.
pub fn dcsis_utility_all(data: &DataSet) -> UtilityVector {
    let b = double_centered(data.y());
    let var_y = mean_product(&b, &b);
    let omega = (0..data.p())
        .into_par_iter()
        .map(|k| {
            if var_y <= DEFAULT_EPS {
                return 0.0;
            }
            let a = double_centered(data.column(k));
            let var_x = mean_product(&a, &a);
            if var_x <= DEFAULT_EPS {
                return 0.0;
            }
            let cov = mean_product(&a, &b);
            (cov / (var_x * var_y).sqrt()).clamp(0.0, 1.0)
        })
        .collect();
    UtilityVector::new(Method::Dcsis, omega)
}

/// `A_ij = a_ij - a_i. - a_.j + a_..` for `a_ij = |v_i - v_j|`.
fn double_centered(v: ArrayView1<'_, f64>) -> Array2<f64> {
    let n = v.len();
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| (v[i] - v[j]).abs());
    // The distance matrix is symmetric, so row means double as column means.
    let means: Vec<f64> = a.rows().into_iter().map(|r| r.sum() / n as f64).collect();
    let grand = means.iter().sum::<f64>() / n as f64;
    for ((i, j), e) in a.indexed_iter_mut() {
        *e = *e - means[i] - means[j] + grand;
    }
    a
}

fn mean_product(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let n = a.nrows() as f64;
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<f64>() / (n * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn identical_variables_have_unit_dcor() {
        let y = array![0.3, -1.2, 2.5, 0.8, 0.0, 1.1];
        let x = Array2::from_shape_fn((6, 1), |(i, _)| y[i]);
        let data = DataSet::new(x, y, array![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let omega = dcsis_utility_all(&data);
        assert!((omega.omega[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_predictor_scores_zero() {
        let x = Array2::from_elem((5, 1), 2.0);
        let data = DataSet::new(
            x,
            array![1.0, 2.0, 0.0, 5.0, 3.0],
            array![0.1, 0.2, 0.3, 0.4, 0.5],
        )
        .unwrap();
        assert_eq!(dcsis_utility_all(&data).omega[0], 0.0);
    }
}
