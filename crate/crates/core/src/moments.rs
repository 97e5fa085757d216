//! Nadaraya–Watson weights and the conditional indicator-CDF table shared by
//! every predictor.

use ndarray::{Array1, Array2, ArrayView1};

use crate::data::{ascending_order, upper_positions, DataSet};
use crate::error::{Result, ScreenError};
use crate::kernel::{KernelFamily, KernelSpec};

/// Precomputed exposure weights and `E{I(Y <= y_l) | u_j}` estimates.
///
/// Observations are stored in ascending-`y` order so that the indicator
/// `I(y_i <= y_l)` selects a prefix. For exposure point `j`, row `j` of the
/// weight matrix holds `K_h(u_i - u_j)` for `i` walked in that order, and the
/// cumulative row holds its running sums. The last running sum is `n * fhat[j]`
/// and the running sum at the last position tied with `y_l` is
/// `n * gind[l][j]`, so the CDF entry for the maximal response is exactly 1.
#[derive(Debug, Clone)]
pub struct ConditionalMomentTable {
    family: KernelFamily,
    bandwidth: f64,
    /// Observation indices sorted by ascending y (ties by index).
    order: Vec<usize>,
    /// `rank[i]` is the position of observation `i` in `order`.
    rank: Vec<usize>,
    /// For each observation `l`, the last sorted position with `y <= y_l`.
    upper: Vec<usize>,
    /// Distinct values of `upper` with the number of `l` mapping onto each.
    thresholds: Vec<(usize, usize)>,
    /// `[j, r]` = `K_h(u_{order[r]} - u_j)`.
    sorted_weights: Array2<f64>,
    /// `[j, r]` = running sum of `sorted_weights[j, ..=r]`.
    cumulative: Array2<f64>,
}

impl ConditionalMomentTable {
    /// Builds the table for a concrete bandwidth. Accepts any `n >= 1`.
    pub fn from_parts(
        y: ArrayView1<'_, f64>,
        u: ArrayView1<'_, f64>,
        family: KernelFamily,
        bandwidth: f64,
    ) -> Result<Self> {
        let n = y.len();
        if u.len() != n {
            return Err(ScreenError::DimensionMismatch(format!(
                "y has {n} entries, u has {}",
                u.len()
            )));
        }
        if n == 0 {
            return Err(ScreenError::TooFewObservations { min: 1, found: 0 });
        }
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(ScreenError::InvalidBandwidth(format!(
                "h must be positive, got {bandwidth}"
            )));
        }

        let order = ascending_order(y);
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let upper = upper_positions(y, &order);
        let mut counts = vec![0usize; n];
        for &r in &upper {
            counts[r] += 1;
        }
        let thresholds = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (r, c))
            .collect();

        let mut sorted_weights = Array2::zeros((n, n));
        let mut cumulative = Array2::zeros((n, n));
        for j in 0..n {
            let uj = u[j];
            let mut running = 0.0;
            for (r, &i) in order.iter().enumerate() {
                let w = family.weight(u[i] - uj, bandwidth);
                sorted_weights[[j, r]] = w;
                running += w;
                cumulative[[j, r]] = running;
            }
        }

        Ok(Self {
            family,
            bandwidth,
            order,
            rank,
            upper,
            thresholds,
            sorted_weights,
            cumulative,
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    /// `K_h(u_i - u_j)`.
    pub fn w(&self, i: usize, j: usize) -> f64 {
        self.sorted_weights[[j, self.rank[i]]]
    }

    /// Kernel density estimate `fhat(u_j) = n^-1 sum_i K_h(u_i - u_j)`.
    pub fn fhat(&self, j: usize) -> f64 {
        self.total_weight(j) / self.n() as f64
    }

    /// `ghat(y_l | u_j) = n^-1 sum_i K_h(u_i - u_j) I(y_i <= y_l)`.
    pub fn gind(&self, l: usize, j: usize) -> f64 {
        self.cumulative[[j, self.upper[l]]] / self.n() as f64
    }

    /// Nadaraya–Watson estimate of `E{I(Y <= y_l) | u_j}`.
    pub fn cdf(&self, l: usize, j: usize) -> f64 {
        self.sorted_cdf(j, self.upper[l])
    }

    /// The full `[l, j]` CDF matrix.
    pub fn cdf_matrix(&self) -> Array2<f64> {
        let n = self.n();
        Array2::from_shape_fn((n, n), |(l, j)| self.cdf(l, j))
    }

    /// The `fhat` vector.
    pub fn fhat_vector(&self) -> Array1<f64> {
        Array1::from_shape_fn(self.n(), |j| self.fhat(j))
    }

    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn thresholds(&self) -> &[(usize, usize)] {
        &self.thresholds
    }

    pub(crate) fn weights_row(&self, j: usize) -> ArrayView1<'_, f64> {
        self.sorted_weights.row(j)
    }

    #[inline]
    pub(crate) fn total_weight(&self, j: usize) -> f64 {
        self.cumulative[[j, self.n() - 1]]
    }

    #[inline]
    pub(crate) fn sorted_cdf(&self, j: usize, r: usize) -> f64 {
        self.cumulative[[j, r]] / self.total_weight(j)
    }
}

/// Builds the table for a dataset, resolving the bandwidth from `spec`.
pub fn build_moment_table(data: &DataSet, spec: &KernelSpec) -> Result<ConditionalMomentTable> {
    let h = spec.bandwidth_for(data.u())?;
    ConditionalMomentTable::from_parts(data.y(), data.u(), spec.family, h)
}
