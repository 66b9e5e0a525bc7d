//! Finite Hilbert transform `(H_j f)(y) = (1/π) ∫_{I_j} f(x)/(x - y) dx` for
//! `y` off the source interval, the half-line power identity, the
//! commutation check `H₁ L = L H₁`, and the Galerkin SVD of `H₁`.

mod svd;

pub use svd::{discretized_svd, log_linear_fit, log_linear_fit_points, middle_third, LinearFit};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::operator::{apply_l, IntervalId, IntervalPair};
use crate::quad::{adaptive_complex, log_graded_panels, GaussLegendre};
use crate::{Error, Result};

/// Integrals over an interval are split at `|x| = INNER_FRACTION·min(|a1|, a2)`.
pub const INNER_FRACTION: f64 = 0.1;

/// Endpoint behavior a [`QuadratureRule`] is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityTag {
    None,
    InverseSqrtAtZero,
}

/// Rule on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub singularity_tag: SingularityTag,
}

impl QuadratureRule {
    /// Plain `n`-point Gauss–Legendre on `(0, 1)`.
    pub fn gauss_legendre(n: usize) -> Self {
        let gl = GaussLegendre::new(n);
        let (nodes, weights) = gl.mapped(0.0, 1.0).unzip();
        Self {
            nodes,
            weights,
            singularity_tag: SingularityTag::None,
        }
    }

    /// Rule for integrands `x^{-1/2} g(x)` with smooth `g`: Gauss–Legendre in
    /// `u = √x`. Exact for `x^{-1/2}·(polynomial of degree < n)`.
    pub fn inverse_sqrt_at_zero(n: usize) -> Self {
        let gl = GaussLegendre::new(n);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (u, w) in gl.mapped(0.0, 1.0) {
            nodes.push(u * u);
            weights.push(2.0 * u * w);
        }
        Self {
            nodes,
            weights,
            singularity_tag: SingularityTag::InverseSqrtAtZero,
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Resolution of the singular-endpoint quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhtOptions {
    /// Log-graded panels per decade of `u = √|x|` near the origin.
    pub per_decade: usize,
    /// Smallest `u` resolved; the contribution of `(0, u_min)` is dropped.
    pub u_min: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for FhtOptions {
    fn default() -> Self {
        Self {
            per_decade: 8,
            u_min: 1e-15,
            abs_tol: 1e-15,
            rel_tol: 1e-13,
        }
    }
}

impl FhtOptions {
    /// Enough panels per decade to resolve the `|x|^{±iμ}` oscillation.
    pub fn for_mu(mu: f64) -> Self {
        Self {
            per_decade: (3.0 * mu).ceil().max(8.0) as usize,
            ..Self::default()
        }
    }
}

/// `∫_{I_j} g(x) dx` for `g` with at most `|x|^{-1/2}`-type growth at the
/// origin: adaptive Gauss panels on the outer part, `x = ∓u²` on
/// log-graded panels on the inner part.
pub fn integrate_on_interval<G: FnMut(f64) -> Complex64>(
    geom: &IntervalPair,
    id: IntervalId,
    mut g: G,
    opts: &FhtOptions,
) -> Complex64 {
    let side = id.side();
    let e = geom.endpoint(id);
    let split = INNER_FRACTION * geom.inner_scale();
    let outer = adaptive_complex(
        &mut g,
        e.min(side * split),
        e.max(side * split),
        opts.abs_tol,
        opts.rel_tol,
        40,
    );
    let rule = GaussLegendre::sixteen();
    let mut inner = Complex64::new(0.0, 0.0);
    for (lo, hi) in log_graded_panels(opts.u_min, split.sqrt(), opts.per_decade) {
        inner += rule.integrate_complex(lo, hi, |u| g(side * u * u) * (2.0 * u));
    }
    outer + inner
}

fn check_target(geom: &IntervalPair, from: IntervalId, y: f64) -> Result<()> {
    let e = geom.endpoint(from);
    if !y.is_finite() || (y - e) * y <= 0.0 {
        return Err(Error::PrincipalValue(y));
    }
    Ok(())
}

/// `(H_j f)(y)` with default resolution.
pub fn fht_apply<F: Fn(f64) -> f64>(
    f: F,
    geom: &IntervalPair,
    from: IntervalId,
    y: f64,
) -> Result<f64> {
    fht_apply_with(f, geom, from, y, &FhtOptions::default())
}

pub fn fht_apply_with<F: Fn(f64) -> f64>(
    f: F,
    geom: &IntervalPair,
    from: IntervalId,
    y: f64,
    opts: &FhtOptions,
) -> Result<f64> {
    check_target(geom, from, y)?;
    let v =
        integrate_on_interval(geom, from, |x| Complex64::new(f(x) / (x - y), 0.0), opts).re / PI;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite("fht_apply"))
    }
}

/// Closed form of `H₁` applied to the polynomial `Σ c_n x^n` on `(a1, 0)`, at `y > 0`.
pub fn fht_polynomial(coeffs: &[f64], a1: f64, y: f64) -> f64 {
    let log = (y / (y - a1)).ln();
    let mut total = 0.0;
    for (n, &cn) in coeffs.iter().enumerate() {
        if cn == 0.0 {
            continue;
        }
        // x^n = (x - y) Σ_{k<n} y^{n-1-k} x^k + y^n
        let mut s = y.powi(n as i32) * log;
        for k in 0..n {
            s -= y.powi((n - 1 - k) as i32) * a1.powi(k as i32 + 1) / (k as f64 + 1.0);
        }
        total += cn * s;
    }
    total / PI
}

/// `(1/π) ∫_{-∞}^0 (-x)^{-1/2+iμ} / (x - y) dx`, truncated at `-T` with the
/// tail `(-∞, -T)` added from six terms of its expansion in `y/x`.
pub fn halfline_power_fht(mu: f64, y: f64, truncation_t: f64) -> Result<Complex64> {
    if !(y > 0.0) || !(mu >= 0.0) {
        return Err(Error::Parameter(format!(
            "halfline_power_fht needs y > 0 and mu >= 0, got y = {y}, mu = {mu}"
        )));
    }
    if !(truncation_t >= 10.0 * y) {
        return Err(Error::TailTooLarge {
            t: truncation_t,
            min: 10.0 * y,
        });
    }
    let s = Complex64::new(-0.5, mu);
    let two_i_mu = Complex64::new(0.0, 2.0 * mu);
    let u_min = 1e-15;
    // x = -u²: (-x)^s dx/(x - y) = -2 u^{2iμ} du / (u² + y)
    let rule = GaussLegendre::sixteen();
    let per_decade = (3.0 * mu).ceil().max(8.0) as usize;
    let mut body = Complex64::new(0.0, 0.0);
    for (lo, hi) in log_graded_panels(u_min, truncation_t.sqrt(), per_decade) {
        body +=
            rule.integrate_complex(lo, hi, |u| (two_i_mu * u.ln()).exp() * (-2.0 / (u * u + y)));
    }
    // (0, u_min): u² ≪ y
    body += -2.0 * (Complex64::new(1.0, 2.0 * mu) * u_min.ln()).exp()
        / (Complex64::new(1.0, 2.0 * mu) * y);
    let mut tail = Complex64::new(0.0, 0.0);
    let ln_t = truncation_t.ln();
    for j in 0..6 {
        let sj = s - j as f64;
        tail += (sj * ln_t).exp() * (-y).powi(j) / sj;
    }
    Ok((body + tail) / PI)
}

/// `max_y |H₁(Lf)(y) - L(H₁ f)(y)| / (1 + |H₁(Lf)(y)|)` over probes in `(0, a2)`,
/// with `L(H₁ f)` from five-point differences of quadrature values.
/// `f` returns `[f, f', f'']`.
pub fn commutation_residual<F: Fn(f64) -> [f64; 3]>(
    geom: &IntervalPair,
    f: F,
    y_probes: &[f64],
) -> Result<f64> {
    let one = IntervalId::One;
    let lf = |x: f64| apply_l(geom, &f, x);
    let hf = |y: f64| fht_apply(|x| f(x)[0], geom, one, y);
    let mut worst: f64 = 0.0;
    for &y in y_probes {
        if !(y > 0.0 && y < geom.a2()) {
            return Err(Error::Domain {
                what: "commutation probe",
                x: y,
            });
        }
        let h = 0.02 * y.min(geom.a2() - y);
        let v = [
            hf(y - 2.0 * h)?,
            hf(y - h)?,
            hf(y)?,
            hf(y + h)?,
            hf(y + 2.0 * h)?,
        ];
        let d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
        let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
        let l_hf = apply_l(geom, |_| [v[2], d1, d2], y);
        let h_lf = fht_apply(lf, geom, one, y)?;
        worst = worst.max((h_lf - l_hf).abs() / (1.0 + h_lf.abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_sqrt_rule_is_exact() {
        let r = QuadratureRule::inverse_sqrt_at_zero(21);
        for m in 0..=20 {
            let got = r.integrate(|x| x.powf(-0.5) * x.powi(m));
            assert!((got - 2.0 / (2.0 * m as f64 + 1.0)).abs() < 1e-12, "m={m}");
        }
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn constant_function_gives_logarithm() {
        let geom = IntervalPair::new(-1.0, 1.0).unwrap();
        for y in [0.001, 0.3, 0.9, 2.0] {
            let got = fht_apply(|_| 1.0, &geom, IntervalId::One, y).unwrap();
            let want = (y / (1.0 + y)).ln() / PI;
            assert!((got - want).abs() < 1e-12 * want.abs(), "y={y}");
        }
    }

    #[test]
    fn polynomial_closed_form() {
        let geom = IntervalPair::new(-1.3, 2.0).unwrap();
        let c = [0.5, -1.0, 2.0, 0.25];
        for y in [0.01, 0.4, 1.7] {
            let got = fht_apply(
                |x| c[0] + x * (c[1] + x * (c[2] + x * c[3])),
                &geom,
                IntervalId::One,
                y,
            )
            .unwrap();
            let want = fht_polynomial(&c, -1.3, y);
            assert!(
                (got - want).abs() < 1e-12 * want.abs().max(1.0),
                "y={y}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn rejects_targets_on_source_interval() {
        let geom = IntervalPair::new(-1.0, 1.0).unwrap();
        for y in [-0.5, 0.0, -1.0] {
            assert_eq!(
                fht_apply(|_| 1.0, &geom, IntervalId::One, y),
                Err(Error::PrincipalValue(y))
            );
        }
        assert!(fht_apply(|_| 1.0, &geom, IntervalId::One, -2.0).is_ok());
    }

    #[test]
    fn halfline_identity() {
        for (mu, y) in [(0.0, 0.25), (0.0, 0.3), (2.0, 0.25), (2.0, 0.3), (5.0, 0.1)] {
            let got = halfline_power_fht(mu, y, 100.0).unwrap();
            let want = -(Complex64::new(-0.5, mu) * f64::ln(y)).exp() / (PI * mu).cosh();
            assert!((got - want).norm() < 1e-8, "mu={mu} y={y}: {got} vs {want}");
        }
        let a = halfline_power_fht(2.0, 0.3, 50.0).unwrap();
        let b = halfline_power_fht(2.0, 0.3, 200.0).unwrap();
        assert!((a - b).norm() < 1e-10);
        assert!(matches!(
            halfline_power_fht(1.0, 1.0, 5.0),
            Err(Error::TailTooLarge { .. })
        ));
    }

    #[test]
    fn commutation_for_polynomials() {
        for a2 in [1.0, 2.0] {
            let geom = IntervalPair::new(-1.0, a2).unwrap();
            let f = |x: f64| [x * x * (x + 1.0), 3.0 * x * x + 2.0 * x, 6.0 * x + 2.0];
            let r = commutation_residual(&geom, f, &[0.2 * a2, 0.5 * a2, 0.8 * a2]).unwrap();
            assert!(r < 1e-6, "a2={a2}: {r}");
            let g = |x: f64| {
                [
                    (x + 1.0) * x.powi(3),
                    4.0 * x.powi(3) + 3.0 * x * x,
                    12.0 * x * x + 6.0 * x,
                ]
            };
            let r = commutation_residual(&geom, g, &[0.2 * a2, 0.5 * a2, 0.8 * a2]).unwrap();
            assert!(r < 1e-6, "a2={a2}: {r}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn linearity(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
                let geom = IntervalPair::new(-1.0, 1.0).unwrap();
                let y = 0.3;
                let f = |x: f64| (3.0 * x).cos();
                let g = |x: f64| x.exp();
                let lhs = fht_apply(|x| alpha * f(x) + beta * g(x), &geom, IntervalId::One, y).unwrap();
                let rhs = alpha * fht_apply(f, &geom, IntervalId::One, y).unwrap()
                    + beta * fht_apply(g, &geom, IntervalId::One, y).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }
}
