//! Direct nested-loop transcriptions of each estimator, used only as test
//! oracles. Nothing here shares code with the library's computation paths.

#![allow(dead_code)]

use ndarray::{ArrayView1, ArrayView2};

use super::dd::Dd;

fn epanechnikov_kh(t: f64, h: f64) -> f64 {
    let v = t / h;
    if v.abs() <= 1.0 {
        0.75 * (1.0 - v * v) / h
    } else {
        0.0
    }
}

fn ind(a: f64, b: f64) -> f64 {
    if a <= b {
        1.0
    } else {
        0.0
    }
}

/// C-SIRS utilities, O(n^3 p), every conditional moment recomputed from its
/// defining ratio of n^-1 weighted sums. Accumulation is in double-double so
/// the uncentred variance formulas do not cancel.
pub fn csirs(
    x: ArrayView2<'_, f64>,
    y: ArrayView1<'_, f64>,
    u: ArrayView1<'_, f64>,
    h: f64,
    eps: f64,
) -> Vec<f64> {
    let (n, p) = x.dim();
    let nf = Dd::new(n as f64);
    let mut out = vec![0.0; p];
    for k in 0..p {
        let mut total = Dd::ZERO;
        for l in 0..n {
            for j in 0..n {
                let mut f = Dd::ZERO;
                let mut ex = Dd::ZERO;
                let mut ex2 = Dd::ZERO;
                let mut ei = Dd::ZERO;
                let mut ei2 = Dd::ZERO;
                let mut exi = Dd::ZERO;
                for i in 0..n {
                    let w = Dd::new(epanechnikov_kh(u[i] - u[j], h));
                    let xi = Dd::new(x[[i, k]]);
                    let ii = Dd::new(ind(y[i], y[l]));
                    f = f + w / nf;
                    ex = ex + w * xi / nf;
                    ex2 = ex2 + w * xi * xi / nf;
                    ei = ei + w * ii / nf;
                    ei2 = ei2 + w * ii * ii / nf;
                    exi = exi + w * xi * ii / nf;
                }
                let (ex, ex2, ei, ei2, exi) = (ex / f, ex2 / f, ei / f, ei2 / f, exi / f);
                let cov = exi - ex * ei;
                let var_x = (ex2 - ex * ex).max0();
                let var_i = (ei2 - ei * ei).max0();
                if var_x.to_f64() > eps && var_i.to_f64() > eps {
                    total = total + cov * cov / (var_x * var_i);
                }
            }
        }
        out[k] = (total / (nf * nf)).to_f64();
    }
    out
}

/// SIRS utilities with columns standardized by sample mean and sd.
pub fn sirs(x: ArrayView2<'_, f64>, y: ArrayView1<'_, f64>) -> Vec<f64> {
    let (n, p) = x.dim();
    let nf = n as f64;
    (0..p)
        .map(|k| {
            let mean = (0..n).map(|i| x[[i, k]]).sum::<f64>() / nf;
            let var = (0..n).map(|i| (x[[i, k]] - mean).powi(2)).sum::<f64>() / (nf - 1.0);
            if var == 0.0 {
                return 0.0;
            }
            let sd = var.sqrt();
            let mut total = 0.0;
            for l in 0..n {
                let mut rho = 0.0;
                for i in 0..n {
                    rho += (x[[i, k]] - mean) / sd * ind(y[i], y[l]);
                }
                rho /= nf;
                total += rho * rho;
            }
            total / nf
        })
        .collect()
}

/// Squared distance correlation through the three-term V-statistic
/// expansion `S1 + S2 - 2 S3`.
pub fn dcor2(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>, eps: f64) -> f64 {
    let dcov2 = |s: ArrayView1<'_, f64>, t: ArrayView1<'_, f64>| {
        let n = s.len();
        let nf = n as f64;
        let mut s1 = 0.0;
        let mut sa = 0.0;
        let mut sb = 0.0;
        let mut s3 = 0.0;
        for i in 0..n {
            let mut ra = 0.0;
            let mut rb = 0.0;
            for j in 0..n {
                let da = (s[i] - s[j]).abs();
                let db = (t[i] - t[j]).abs();
                s1 += da * db;
                sa += da;
                sb += db;
                ra += da;
                rb += db;
            }
            s3 += (ra / nf) * (rb / nf);
        }
        s1 / (nf * nf) + (sa / (nf * nf)) * (sb / (nf * nf)) - 2.0 * s3 / nf
    };
    let vx = dcov2(a, a);
    let vy = dcov2(b, b);
    if vx <= eps || vy <= eps {
        return 0.0;
    }
    dcov2(a, b) / (vx * vy).sqrt()
}

pub fn dcsis(x: ArrayView2<'_, f64>, y: ArrayView1<'_, f64>, eps: f64) -> Vec<f64> {
    (0..x.ncols()).map(|k| dcor2(x.column(k), y, eps)).collect()
}

/// CC-SIS utilities from raw, uncentred Nadaraya–Watson moments, in
/// double-double.
pub fn ccsis(
    x: ArrayView2<'_, f64>,
    y: ArrayView1<'_, f64>,
    u: ArrayView1<'_, f64>,
    h: f64,
    eps: f64,
) -> Vec<f64> {
    let (n, p) = x.dim();
    let nf = Dd::new(n as f64);
    (0..p)
        .map(|k| {
            let mut total = Dd::ZERO;
            for j in 0..n {
                let z = Dd::ZERO;
                let (mut f, mut ex, mut ex2, mut ey, mut ey2, mut exy) = (z, z, z, z, z, z);
                for i in 0..n {
                    let w = Dd::new(epanechnikov_kh(u[i] - u[j], h));
                    let (xi, yi) = (Dd::new(x[[i, k]]), Dd::new(y[i]));
                    f = f + w / nf;
                    ex = ex + w * xi / nf;
                    ex2 = ex2 + w * xi * xi / nf;
                    ey = ey + w * yi / nf;
                    ey2 = ey2 + w * yi * yi / nf;
                    exy = exy + w * xi * yi / nf;
                }
                let (ex, ex2, ey, ey2, exy) = (ex / f, ex2 / f, ey / f, ey2 / f, exy / f);
                let var_x = (ex2 - ex * ex).max0();
                let var_y = (ey2 - ey * ey).max0();
                if var_x.to_f64() > eps && var_y.to_f64() > eps {
                    let cov = exy - ex * ey;
                    total = total + cov * cov / (var_x * var_y);
                }
            }
            (total / nf).to_f64()
        })
        .collect()
}

/// Relative difference with an absolute floor for values near zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
