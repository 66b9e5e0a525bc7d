//! Singular values of a Galerkin discretization of `H₁`.
//!
//! Each interval is cut into panels that halve in length towards the common
//! corner at the origin. The basis on a panel is the Lagrange basis at its
//! Gauss–Legendre nodes divided by `√w`, which is orthonormal in `L²` of the
//! interval. With tensor Gauss quadrature on the same nodes the Galerkin
//! matrix is the scaled Cauchy matrix
//! `A_ij = -√(w2_i w1_j) / (π (d1_j + d2_i))`, `d` = distance to the origin,
//! whose singular values span dozens of orders of magnitude. They are computed
//! to high relative accuracy from a rank-revealing factorization: complete
//! pivoting elimination with Schur complements formed from the Cauchy
//! structure, column-pivoted QR, then one-sided Jacobi.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::operator::{IntervalId, IntervalPair};
use crate::quad::GaussLegendre;
use crate::{Error, Result};

/// Target number of nodes per panel.
const PANEL_ORDER: usize = 8;
const JACOBI_TOL: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 80;

/// Distances to the origin and weights of the panel nodes on an interval of
/// length `len`: panels `[len 2^{-k-1}, len 2^{-k}]`, the innermost `[0, ·]`.
fn panel_nodes(len: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let panels = (n / PANEL_ORDER).max(2);
    let mut d = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for k in 0..panels {
        let size = n / panels + usize::from(k < n % panels);
        let hi = len * 0.5f64.powi(k as i32);
        let lo = if k + 1 == panels { 0.0 } else { 0.5 * hi };
        for (x, wt) in GaussLegendre::new(size).mapped(lo, hi) {
            d.push(x);
            w.push(wt);
        }
    }
    (d, w)
}

/// `M = X diag(D) Yᵀ` for `M_ij = s_i t_j / (x_i + y_j)` by Gaussian elimination
/// with complete pivoting. Each Schur complement entry is updated through
/// `(x_i - x_p)(y_j - y_q) / ((x_i + y_q)(x_p + y_j))`, which keeps every entry
/// accurate to a few ulps regardless of cancellation.
fn cauchy_rrd(
    x: &[f64],
    y: &[f64],
    s: &[f64],
    t: &[f64],
) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let m = x.len();
    let mut g = DMatrix::from_fn(m, m, |i, j| s[i] * t[j] / (x[i] + y[j]));
    let mut row_free = vec![true; m];
    let mut col_free = vec![true; m];
    let mut xf = DMatrix::zeros(m, m);
    let mut yf = DMatrix::zeros(m, m);
    let mut d = vec![0.0; m];
    for k in 0..m {
        let (mut p, mut q, mut best) = (0, 0, -1.0);
        for j in (0..m).filter(|&j| col_free[j]) {
            for i in (0..m).filter(|&i| row_free[i]) {
                if g[(i, j)].abs() > best {
                    best = g[(i, j)].abs();
                    p = i;
                    q = j;
                }
            }
        }
        let piv = g[(p, q)];
        d[k] = piv;
        for i in (0..m).filter(|&i| row_free[i]) {
            xf[(i, k)] = g[(i, q)] / piv;
        }
        for j in (0..m).filter(|&j| col_free[j]) {
            yf[(j, k)] = g[(p, j)] / piv;
        }
        row_free[p] = false;
        col_free[q] = false;
        for j in (0..m).filter(|&j| col_free[j]) {
            let cj = (y[j] - y[q]) / (x[p] + y[j]);
            for i in (0..m).filter(|&i| row_free[i]) {
                g[(i, j)] *= (x[i] - x[p]) / (x[i] + y[q]) * cj;
            }
        }
    }
    (xf, d, yf)
}

/// Householder QR with column pivoting: `A[:, perm] = Q R`. Returns `R` and `perm`.
fn qr_col_pivot(mut a: DMatrix<f64>) -> (DMatrix<f64>, Vec<usize>) {
    let (rows, cols) = a.shape();
    let mut perm: Vec<usize> = (0..cols).collect();
    for k in 0..cols.min(rows) {
        // recomputed norms: the columns are strongly graded and downdating loses them
        let (mut best, mut bj) = (-1.0, k);
        for j in k..cols {
            let nrm = a.view((k, j), (rows - k, 1)).norm();
            if nrm > best {
                best = nrm;
                bj = j;
            }
        }
        a.swap_columns(k, bj);
        perm.swap(k, bj);
        let alpha = a.view((k, k), (rows - k, 1)).norm();
        if alpha == 0.0 {
            continue;
        }
        let beta = if a[(k, k)] > 0.0 { -alpha } else { alpha };
        let mut v: Vec<f64> = (k..rows).map(|i| a[(i, k)]).collect();
        v[0] -= beta;
        let vnorm2: f64 = v.iter().map(|e| e * e).sum();
        if vnorm2 > 0.0 {
            for j in k + 1..cols {
                let dot: f64 = v.iter().enumerate().map(|(r, e)| e * a[(k + r, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for (r, e) in v.iter().enumerate() {
                    a[(k + r, j)] -= f * e;
                }
            }
        }
        a[(k, k)] = beta;
        for i in k + 1..rows {
            a[(i, k)] = 0.0;
        }
    }
    (a.rows(0, cols.min(rows)).into_owned(), perm)
}

/// Column norms after one-sided (Hestenes) Jacobi orthogonalization.
fn one_sided_jacobi(mut w: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = w.ncols();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let a = w.column(i).norm_squared();
                let b = w.column(j).norm_squared();
                let c = w.column(i).dot(&w.column(j));
                // √a·√b avoids underflow of a·b for tiny columns
                if c == 0.0 || c.abs() <= JACOBI_TOL * a.sqrt() * b.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (b - a) / (2.0 * c);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let cs = 1.0 / t.hypot(1.0);
                let sn = cs * t;
                for r in 0..w.nrows() {
                    let (wi, wj) = (w[(r, i)], w[(r, j)]);
                    w[(r, i)] = cs * wi - sn * wj;
                    w[(r, j)] = sn * wi + cs * wj;
                }
            }
        }
        if !rotated {
            return Ok((0..n).map(|j| w.column(j).norm()).collect());
        }
    }
    Err(Error::NonConvergence {
        routine: "one-sided Jacobi",
        terms: JACOBI_MAX_SWEEPS,
    })
}

/// Singular values (descending) of the `n × n` Galerkin matrix of `H₁` between
/// piecewise-polynomial orthonormal bases of `L²(a1, 0)` and `L²(0, a2)`.
pub fn discretized_svd(geom: &IntervalPair, n: usize) -> Result<Vec<f64>> {
    if n < 16 {
        return Err(Error::Parameter(format!(
            "discretized_svd needs n >= 16, got {n}"
        )));
    }
    let (d1, w1) = panel_nodes(geom.length(IntervalId::One), n);
    let (d2, w2) = panel_nodes(geom.length(IntervalId::Two), n);
    let s: Vec<f64> = w2.iter().map(|w| w.sqrt()).collect();
    let t: Vec<f64> = w1.iter().map(|w| w.sqrt()).collect();
    // the sign and 1/π are applied at the end
    let (xf, d, yf) = cauchy_rrd(&d2, &d1, &s, &t);
    let xd = DMatrix::from_fn(n, n, |i, k| xf[(i, k)] * d[k]);
    let (r, perm) = qr_col_pivot(xd);
    // M = Q R Πᵀ Yᵀ; the rows of W = R Πᵀ Yᵀ are graded, so orthogonalize the columns of Wᵀ
    let y_perm = DMatrix::from_fn(n, n, |j, k| yf[(j, perm[k])]);
    let wt = y_perm * r.transpose();
    let mut sv: Vec<f64> = one_sided_jacobi(wt)?.into_iter().map(|v| v / PI).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("discretized_svd"));
    }
    Ok(sv)
}

/// Least-squares line `ln v_k ≈ intercept + slope·k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fit of `ln values[k]` against `k` for `k` in `range`.
pub fn log_linear_fit(values: &[f64], range: std::ops::Range<usize>) -> LinearFit {
    let pts: Vec<(f64, f64)> = range.map(|k| (k as f64, values[k].ln())).collect();
    log_linear_fit_points(&pts)
}

/// Least-squares line through `(x, y)` points.
pub fn log_linear_fit_points(pts: &[(f64, f64)]) -> LinearFit {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared: if syy == 0.0 {
            1.0
        } else {
            sxy * sxy / (sxx * syy)
        },
    }
}

/// Middle third `[n/3, 2n/3)` of a length-`n` spectrum.
pub fn middle_third(n: usize) -> std::ops::Range<usize> {
    n / 3..(2 * n).div_ceil(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_rule_integrates_polynomials_and_corner_singularity() {
        let (d, w) = panel_nodes(2.0, 64);
        assert_eq!(d.len(), 64);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m: f64 = d.iter().zip(&w).map(|(x, w)| w * x.powi(7)).sum();
        assert!((m - 2f64.powi(8) / 8.0).abs() < 1e-12 * m);
        let s: f64 = d.iter().zip(&w).map(|(x, w)| w / x.sqrt()).sum();
        // only the innermost panel is inexact, and it holds √(len/2^7) of the mass
        assert!(
            (s - 2.0 * 2f64.sqrt()).abs() < 0.1 * 2.0 * (2.0f64 / 128.0).sqrt(),
            "{s}"
        );
    }

    fn dense_cauchy(x: &[f64], y: &[f64], s: &[f64], t: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(x.len(), y.len(), |i, j| s[i] * t[j] / (x[i] + y[j]))
    }

    #[test]
    fn rank_revealing_factorization_reconstructs() {
        let x = [0.1, 0.7, 1.3, 2.0, 3.5];
        let y = [0.05, 0.4, 0.9, 2.2, 4.0];
        let s = [1.0, 0.5, 2.0, 0.3, 1.1];
        let t = [0.7, 1.0, 0.2, 1.5, 0.9];
        let (xf, d, yf) = cauchy_rrd(&x, &y, &s, &t);
        let rebuilt =
            &xf * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())) * yf.transpose();
        let m = dense_cauchy(&x, &y, &s, &t);
        assert!((rebuilt - &m).norm() < 1e-14 * m.norm());
        // complete pivoting: |pivots| non-increasing
        assert!(d.windows(2).all(|w| w[0].abs() >= w[1].abs()));
    }

    #[test]
    fn qr_with_pivoting_reconstructs() {
        let a = DMatrix::from_fn(6, 6, |i, j| {
            1.0 / (i as f64 + 2.0 * j as f64 + 1.0) + if i == j { 0.1 } else { 0.0 }
        });
        let (r, perm) = qr_col_pivot(a.clone());
        let ap = DMatrix::from_fn(6, 6, |i, k| a[(i, perm[k])]);
        // AΠ = QR implies (AΠ)ᵀ(AΠ) = RᵀR
        let lhs = ap.transpose() * &ap;
        let rhs = r.transpose() * &r;
        assert!((lhs - rhs).norm() < 1e-13);
        for i in 0..6 {
            for j in 0..i {
                assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn matches_dense_svd_where_double_precision_suffices() {
        let geom = IntervalPair::new(-1.0, 2.0).unwrap();
        let n = 24;
        let sv = discretized_svd(&geom, n).unwrap();
        let (d1, w1) = panel_nodes(geom.length(IntervalId::One), n);
        let (d2, w2) = panel_nodes(geom.length(IntervalId::Two), n);
        let s: Vec<f64> = w2.iter().map(|w| w.sqrt() / PI).collect();
        let t: Vec<f64> = w1.iter().map(|w| w.sqrt()).collect();
        let dense = dense_cauchy(&d2, &d1, &s, &t).singular_values();
        let mut dense: Vec<f64> = dense.iter().copied().collect();
        dense.sort_by(|a, b| b.total_cmp(a));
        for k in 0..n {
            // a dense SVD is only accurate to a few ulps of the largest value
            assert!(
                (sv[k] - dense[k]).abs() < 1e-14 * dense[0],
                "k = {k}: {} vs {}",
                sv[k],
                dense[k]
            );
        }
    }

    // 60-digit singular values of the same 16 × 16 matrix (symmetric geometry)
    // from tests/oracle/reference_values.py
    #[test]
    fn matches_extended_precision_reference() {
        let geom = IntervalPair::symmetric(1.0).unwrap();
        let sv = discretized_svd(&geom, 16).unwrap();
        let want = [
            6.817_073_587_101_083e-1,
            6.239_857_375_751_477e-5,
            5.441_171_075_207_527e-24,
        ];
        for (k, w) in [0usize, 5, 15].into_iter().zip(want) {
            assert!((sv[k] / w - 1.0).abs() < 1e-10, "k = {k}: {} vs {w}", sv[k]);
        }
    }

    #[test]
    fn fit_of_exact_line() {
        let v: Vec<f64> = (0..20).map(|k| (-0.5 * k as f64 + 1.0).exp()).collect();
        let f = log_linear_fit(&v, 5..15);
        assert!((f.slope + 0.5).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn middle_third_bounds() {
        assert_eq!(middle_third(200), 66..134);
        assert_eq!(middle_third(99), 33..66);
    }

    #[test]
    fn rejects_tiny_n() {
        let geom = IntervalPair::new(-1.0, 1.0).unwrap();
        assert!(discretized_svd(&geom, 8).is_err());
    }
}
