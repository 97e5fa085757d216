use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

/// Draws `n` rows of an AR(1) Gaussian vector of length `dim`: unit
/// variance and `corr(Z_a, Z_b) = rho^|a - b|`.
pub fn sample_ar_gaussian<R: Rng + ?Sized>(
    n: usize,
    dim: usize,
    rho: f64,
    rng: &mut R,
) -> Array2<f64> {
    let innovation = (1.0 - rho * rho).sqrt();
    let mut z = Array2::zeros((n, dim));
    for mut row in z.rows_mut() {
        let mut prev = 0.0;
        for (a, slot) in row.iter_mut().enumerate() {
            let e: f64 = rng.sample(StandardNormal);
            prev = if a == 0 {
                e
            } else {
                rho * prev + innovation * e
            };
            *slot = prev;
        }
    }
    z
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `u_i = Phi(z_i)`, kept strictly inside `(0, 1)`.
pub fn make_exposure(z: ArrayView1<'_, f64>) -> Array1<f64> {
    const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
    z.mapv(|v| normal_cdf(v).clamp(f64::MIN_POSITIVE, BELOW_ONE))
}

/// Seed for replication `index` of a study seeded with `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

/// The generator used for every simulated replication.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
