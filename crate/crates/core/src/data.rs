use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Result, ScreenError};

/// An observed sample of `(x_i, y_i, u_i)` triplets.
///
/// Row `i` of `x`, `y[i]` and `u[i]` belong to the same observation. All
/// entries are finite, `n >= 2` and `p >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    x: Array2<f64>,
    y: Array1<f64>,
    u: Array1<f64>,
}

impl DataSet {
    pub fn new(x: Array2<f64>, y: Array1<f64>, u: Array1<f64>) -> Result<Self> {
        let (n, p) = x.dim();
        if y.len() != n || u.len() != n {
            return Err(ScreenError::DimensionMismatch(format!(
                "x has {n} rows, y has {}, u has {}",
                y.len(),
                u.len()
            )));
        }
        if n < 2 {
            return Err(ScreenError::TooFewObservations { min: 2, found: n });
        }
        if p == 0 {
            return Err(ScreenError::NoPredictors);
        }
        for (row, xs) in x.outer_iter().enumerate() {
            if xs.iter().any(|v| !v.is_finite()) {
                return Err(ScreenError::NonFinite {
                    field: "x".into(),
                    row,
                });
            }
        }
        if let Some(row) = y.iter().position(|v| !v.is_finite()) {
            return Err(ScreenError::NonFinite {
                field: "y".into(),
                row,
            });
        }
        if let Some(row) = u.iter().position(|v| !v.is_finite()) {
            return Err(ScreenError::NonFinite {
                field: "u".into(),
                row,
            });
        }
        Ok(Self { x, y, u })
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of predictors.
    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView1<'_, f64> {
        self.y.view()
    }

    pub fn u(&self) -> ArrayView1<'_, f64> {
        self.u.view()
    }

    pub fn column(&self, k: usize) -> ArrayView1<'_, f64> {
        self.x.column(k)
    }

    /// Returns a copy with the response replaced.
    pub fn with_response(&self, y: Array1<f64>) -> Result<Self> {
        Self::new(self.x.clone(), y, self.u.clone())
    }

    /// Returns a copy with the exposure replaced.
    pub fn with_exposure(&self, u: Array1<f64>) -> Result<Self> {
        Self::new(self.x.clone(), self.y.clone(), u)
    }

    /// Returns a copy with the predictor matrix replaced.
    pub fn with_predictors(&self, x: Array2<f64>) -> Result<Self> {
        Self::new(x, self.y.clone(), self.u.clone())
    }

    pub fn into_parts(self) -> (Array2<f64>, Array1<f64>, Array1<f64>) {
        (self.x, self.y, self.u)
    }
}

/// Indices `0..n` sorted by ascending `y`, ties broken by index.
pub(crate) fn ascending_order(y: ArrayView1<'_, f64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
    order
}

/// For every observation `l`, the position in `order` of the last element
/// with `y <= y[l]`. `order` must come from [`ascending_order`].
pub(crate) fn upper_positions(y: ArrayView1<'_, f64>, order: &[usize]) -> Vec<usize> {
    let n = order.len();
    let mut upper = vec![0; n];
    let mut start = 0;
    while start < n {
        let value = y[order[start]];
        let mut end = start;
        while end + 1 < n && y[order[end + 1]] == value {
            end += 1;
        }
        for &i in &order[start..=end] {
            upper[i] = end;
        }
        start = end + 1;
    }
    upper
}
