use num_complex::Complex64;

use super::{eval_ppp, eval_pq, IntervalId, IntervalPair, SpectralPoint};
use crate::{Error, Result};

/// Default number of series terms.
pub const DEFAULT_SERIES_ORDER: usize = 40;

/// Truncated Frobenius series at a singular point `center`:
///
/// `y(x) = |h|^s Σ c_n h^n + ln|h| Σ e_n h^n`, `h = x - center`,
///
/// where the logarithmic part (`log_coeffs = e_n`) only occurs with `s = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusSeries {
    pub center: f64,
    pub exponent: Complex64,
    pub coeffs: Vec<Complex64>,
    pub log_coeffs: Option<Vec<Complex64>>,
    pub order: usize,
    /// Distance from `center` to the nearest other singular point.
    pub radius: f64,
}

impl FrobeniusSeries {
    /// Value and x-derivative at `x`.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        let [v, d, _] = self.eval_full(x);
        (v, d)
    }

    /// Value, first and second x-derivatives at `x`.
    pub fn eval_full(&self, x: f64) -> [Complex64; 3] {
        let h = x - self.center;
        if h.abs() > 0.5 * self.radius {
            log::warn!(
                "Frobenius series at {} evaluated at |h| = {:.3e}, beyond half its radius {:.3e}",
                self.center,
                h.abs(),
                self.radius
            );
        }
        let [sum, d1, d2] = horner(&self.coeffs, h, self.exponent);
        let pow = if self.exponent == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            (self.exponent * h.abs().ln()).exp()
        };
        let mut out = [pow * sum, pow * d1, pow * d2];
        if let Some(e) = &self.log_coeffs {
            let [l0, l1, l2] = horner(e, h, Complex64::new(0.0, 0.0));
            let ln = h.abs().ln();
            out[0] += l0 * ln;
            out[1] += l1 * ln + l0 / h;
            out[2] += l2 * ln + l1 * (2.0 / h) - l0 / (h * h);
        }
        out
    }
}

/// `[Σ c_n h^n, Σ (n+s) c_n h^{n-1}, Σ (n+s)(n+s-1) c_n h^{n-2}]`.
fn horner(c: &[Complex64], h: f64, s: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    if h == 0.0 {
        let at = |n: usize| c.get(n).copied().unwrap_or(zero);
        return [at(0), at(1) * (s + 1.0), at(2) * (s + 2.0) * (s + 1.0)];
    }
    let (mut v, mut d, mut dd) = (zero, zero, zero);
    for (n, cn) in c.iter().enumerate().rev() {
        let ns = s + n as f64;
        v = v * h + cn;
        d = d * h + cn * ns;
        dd = dd * h + cn * ns * (ns - 1.0);
    }
    [v, d / h, dd / (h * h)]
}

/// Taylor coefficients of `P` and `Q - λ` about `center`: `P = Σ_{k≤4} p_k h^k`, `Q - λ = Σ_{j≤2} q_j h^j`.
pub(crate) fn local_coefficients(
    geom: &IntervalPair,
    lambda: f64,
    center: f64,
) -> ([f64; 5], [f64; 3]) {
    let (p, pp, q) = eval_pq(geom, center);
    let ppp = eval_ppp(geom, center);
    let p3 = (24.0 * center - 6.0 * (geom.a1() + geom.a2())) / 6.0;
    let qp = 4.0 * (center - 0.25 * (geom.a1() + geom.a2()));
    ([p, pp, 0.5 * ppp, p3, 1.0], [q - lambda, qp, 2.0])
}

/// Solves the index equations of `(P y')' + (Q - λ) y = 0` for a Frobenius
/// series with exponent `s` at a point where `P` vanishes to order `r0`.
/// `extra(n)` is an inhomogeneity added to equation `n`.
fn recurrence<E: Fn(usize) -> Complex64>(
    p: &[f64; 5],
    q: &[f64; 3],
    r0: usize,
    s: Complex64,
    order: usize,
    first: Complex64,
    extra: E,
) -> Result<Vec<Complex64>> {
    let mut c = vec![Complex64::new(0.0, 0.0); order];
    c[0] = first;
    for n in 1..order {
        let mut sum = extra(n);
        for (k, &pk) in p.iter().enumerate() {
            if pk == 0.0 || k == r0 {
                continue;
            }
            if let Some(m) = (n + r0).checked_sub(k) {
                if m < n {
                    let ms = s + m as f64;
                    sum += c[m] * ms * (ms + (k as f64 - 1.0)) * pk;
                }
            }
        }
        for (j, &qj) in q.iter().enumerate() {
            if let Some(m) = (n + r0).checked_sub(2 + j) {
                if m < n {
                    sum += c[m] * qj;
                }
            }
        }
        let ns = s + n as f64;
        let mut d = ns * (ns + (r0 as f64 - 1.0)) * p[r0];
        if r0 == 2 {
            d += q[0];
        }
        if d.norm() == 0.0 {
            return Err(Error::ExponentCollision);
        }
        c[n] = -sum / d;
    }
    Ok(c)
}

/// The pair `y± = |x|^{-1/2 ± iμ} ψ±(x)`, `ψ±(0) = 1`, at the origin.
///
/// The same coefficients serve both sides of `0`; on `(a1, 0)` the power is
/// taken of `-x`, never of a negative number.
pub fn frobenius_origin(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    order: usize,
) -> Result<(FrobeniusSeries, FrobeniusSeries)> {
    if !(sp.mu > 0.0) {
        return Err(Error::ExponentCollision);
    }
    if order < 4 {
        return Err(Error::Parameter(format!(
            "series order must be at least 4, got {order}"
        )));
    }
    let (p, q) = local_coefficients(geom, sp.lambda, 0.0);
    let s = Complex64::new(-0.5, sp.mu);
    let one = Complex64::new(1.0, 0.0);
    let plus = recurrence(&p, &q, 2, s, order, one, |_| Complex64::new(0.0, 0.0))?;
    let minus: Vec<_> = plus.iter().map(|c| c.conj()).collect();
    let mk = |exponent, coeffs| FrobeniusSeries {
        center: 0.0,
        exponent,
        coeffs,
        log_coeffs: None,
        order,
        radius: geom.inner_scale(),
    };
    Ok((mk(s, plus), mk(s.conj(), minus)))
}

/// Series at the regular endpoint `a_j` of interval `id`: the analytic
/// solution `φ` with `φ(a_j) = 1`, and its logarithmic partner
/// `θ = (φ ln|x - a_j| + Σ d_n (x - a_j)^n)/C` with `C` fixed so that
/// `∓P·W(θ, φ) → 1` at `a_j` (upper sign on `(a1, 0)`).
pub fn frobenius_regular(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    order: usize,
) -> Result<(FrobeniusSeries, FrobeniusSeries)> {
    if order < 4 {
        return Err(Error::Parameter(format!(
            "series order must be at least 4, got {order}"
        )));
    }
    let center = geom.endpoint(id);
    let (p, q) = local_coefficients(geom, sp.lambda, center);
    let zero = Complex64::new(0.0, 0.0);
    let phi = recurrence(&p, &q, 1, zero, order, Complex64::new(1.0, 0.0), |_| zero)?;
    // Equation n picks up Σ_k p_k c_m (2m + k - 1), m = n + 1 - k, from φ ln|h|.
    let forcing = |n: usize| {
        let mut r = zero;
        for (k, &pk) in p.iter().enumerate() {
            if let Some(m) = (n + 1).checked_sub(k) {
                if m < order {
                    r += phi[m] * pk * (2.0 * m as f64 + k as f64 - 1.0);
                }
            }
        }
        r
    };
    let d = recurrence(&p, &q, 1, zero, order, zero, forcing)?;
    let scale = -id.wronskian_sign() / p[1];
    let radius = geom.length(id);
    let phi_series = FrobeniusSeries {
        center,
        exponent: zero,
        coeffs: phi.clone(),
        log_coeffs: None,
        order,
        radius,
    };
    let theta_series = FrobeniusSeries {
        center,
        exponent: zero,
        coeffs: d.iter().map(|c| c * scale).collect(),
        log_coeffs: Some(phi.iter().map(|c| c * scale).collect()),
        order,
        radius,
    };
    Ok((phi_series, theta_series))
}
