//! The operator `L f = (P f')' + Q f` on the adjacent intervals `(a1, 0)`
//! and `(0, a2)`: geometry, coefficient polynomials, the spectral parameter
//! map, the Liouville normal form, and Frobenius series at the singular
//! points `a1`, `0`, `a2`.

mod frobenius;
mod liouville;

pub use frobenius::{frobenius_origin, frobenius_regular, FrobeniusSeries, DEFAULT_SERIES_ORDER};
pub use liouville::{liouville_map, potential_q};

pub(crate) use frobenius::local_coefficients;

use num_complex::Complex64;

use crate::{Error, Result};

/// Which of the two intervals: `One = (a1, 0)`, `Two = (0, a2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalId {
    One,
    Two,
}

impl IntervalId {
    pub const BOTH: [IntervalId; 2] = [IntervalId::One, IntervalId::Two];

    /// Sign `s` in the normalization `s·P·W(θ, φ) = 1`: `-1` on `(a1, 0)`, `+1` on `(0, a2)`.
    pub fn wronskian_sign(self) -> f64 {
        match self {
            IntervalId::One => -1.0,
            IntervalId::Two => 1.0,
        }
    }

    /// Sign of `x` inside the interval.
    pub fn side(self) -> f64 {
        match self {
            IntervalId::One => -1.0,
            IntervalId::Two => 1.0,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            IntervalId::One => 1,
            IntervalId::Two => 2,
        }
    }

    pub fn other(self) -> IntervalId {
        match self {
            IntervalId::One => IntervalId::Two,
            IntervalId::Two => IntervalId::One,
        }
    }
}

/// Geometry `a1 < 0 < a2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPair {
    a1: f64,
    a2: f64,
}

impl IntervalPair {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 < 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
            return Err(Error::Geometry { a1, a2 });
        }
        Ok(Self { a1, a2 })
    }

    /// Symmetric geometry `(-a, a)`.
    pub fn symmetric(a: f64) -> Result<Self> {
        Self::new(-a, a)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// Start of the continuous spectrum, `(a1² + a2²)/8`.
    pub fn lambda_min(&self) -> f64 {
        (self.a1 * self.a1 + self.a2 * self.a2) / 8.0
    }

    /// `κ = ln((a2 - a1)/(-4 a1 a2))`, the constant in the phase near the origin.
    pub fn kappa(&self) -> f64 {
        ((self.a2 - self.a1) / (-4.0 * self.a1 * self.a2)).ln()
    }

    /// `-a1·a2 > 0`.
    pub fn neg_a1a2(&self) -> f64 {
        -self.a1 * self.a2
    }

    /// Regular (outer) endpoint of an interval.
    pub fn endpoint(&self, id: IntervalId) -> f64 {
        match id {
            IntervalId::One => self.a1,
            IntervalId::Two => self.a2,
        }
    }

    pub fn length(&self, id: IntervalId) -> f64 {
        self.endpoint(id).abs()
    }

    /// `min(|a1|, a2)`, the radius of the origin series.
    pub fn inner_scale(&self) -> f64 {
        self.a2.min(-self.a1)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.a1 + self.a2).abs() <= 1e-14 * self.a2
    }

    /// Interval containing `x`, if any.
    pub fn locate(&self, x: f64) -> Option<IntervalId> {
        if x > self.a1 && x < 0.0 {
            Some(IntervalId::One)
        } else if x > 0.0 && x < self.a2 {
            Some(IntervalId::Two)
        } else {
            None
        }
    }

    pub fn contains(&self, id: IntervalId, x: f64) -> bool {
        self.locate(x) == Some(id)
    }
}

/// Spectral parameter `λ` with `μ = sqrt((λ - λ_min)/(-a1 a2))` and `ε = λ^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub lambda: f64,
    pub mu: f64,
    pub eps: f64,
}

/// Values `(P, P', Q)` at `x`.
pub fn eval_pq(geom: &IntervalPair, x: f64) -> (f64, f64, f64) {
    let (a1, a2) = (geom.a1, geom.a2);
    let p = (x - a1) * x * x * (x - a2);
    let s = a1 + a2;
    let pp = x * (4.0 * x * x - 3.0 * s * x + 2.0 * a1 * a2);
    let b = x - 0.25 * s;
    (p, pp, 2.0 * b * b)
}

/// `P''(x)`.
pub fn eval_ppp(geom: &IntervalPair, x: f64) -> f64 {
    let s = geom.a1 + geom.a2;
    12.0 * x * x - 6.0 * s * x + 2.0 * geom.a1 * geom.a2
}

pub fn mu_of_lambda(geom: &IntervalPair, lambda: f64) -> Result<SpectralPoint> {
    let lambda_min = geom.lambda_min();
    if !lambda.is_finite() || lambda < lambda_min {
        return Err(Error::BelowThreshold { lambda, lambda_min });
    }
    Ok(SpectralPoint {
        lambda,
        mu: ((lambda - lambda_min) / geom.neg_a1a2()).sqrt(),
        eps: lambda.powf(-0.5),
    })
}

/// Inverse map `μ ↦ λ = λ_min + μ²(-a1 a2)`.
pub fn lambda_of_mu(geom: &IntervalPair, mu: f64) -> Result<SpectralPoint> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Parameter(format!(
            "mu must be finite and non-negative, got {mu}"
        )));
    }
    let lambda = geom.lambda_min() + mu * mu * geom.neg_a1a2();
    Ok(SpectralPoint {
        lambda,
        mu,
        eps: lambda.powf(-0.5),
    })
}

/// `L f = P f'' + P' f' + Q f`, with `f` returning `[f, f', f'']`.
pub fn apply_l<F: Fn(f64) -> [f64; 3]>(geom: &IntervalPair, f: F, x: f64) -> f64 {
    let [v, d1, d2] = f(x);
    let (p, pp, q) = eval_pq(geom, x);
    p * d2 + pp * d1 + q * v
}

/// Complex-valued variant of [`apply_l`].
pub fn apply_l_complex<F: Fn(f64) -> [Complex64; 3]>(
    geom: &IntervalPair,
    f: F,
    x: f64,
) -> Complex64 {
    let [v, d1, d2] = f(x);
    let (p, pp, q) = eval_pq(geom, x);
    d2 * p + d1 * pp + v * q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a1: f64, a2: f64) -> IntervalPair {
        IntervalPair::new(a1, a2).unwrap()
    }

    #[test]
    fn pq_basic_values() {
        let geom = g(-1.0, 1.0);
        assert_eq!(eval_pq(&geom, -1.0).0, 0.0);
        assert!((eval_pq(&geom, -0.5).0 + 0.1875).abs() < 1e-16);
        let geom = g(-1.0, 3.0);
        assert_eq!(eval_pq(&geom, 0.5).2, 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let geom = g(-1.3, 2.1);
        for x in [-1.0, -0.2, 0.7, 1.9] {
            let h = 1e-5;
            let fd = (eval_pq(&geom, x + h).0 - eval_pq(&geom, x - h).0) / (2.0 * h);
            assert!((fd - eval_pq(&geom, x).1).abs() < 1e-8);
            let fd2 = (eval_pq(&geom, x + h).1 - eval_pq(&geom, x - h).1) / (2.0 * h);
            assert!((fd2 - eval_ppp(&geom, x)).abs() < 1e-8);
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_of_lambda(&g(-1.0, 1.0), 0.25).unwrap().mu, 0.0);
        assert!((mu_of_lambda(&g(-1.0, 1.0), 1.25).unwrap().mu - 1.0).abs() < 1e-15);
        assert!((mu_of_lambda(&g(-1.0, 2.0), 2.625).unwrap().mu - 1.0).abs() < 1e-15);
        let err = mu_of_lambda(&g(-1.0, 1.0), 0.2).unwrap_err();
        assert!(matches!(err, Error::BelowThreshold { .. }));
        let sp = lambda_of_mu(&g(-1.0, 2.0), 1.0).unwrap();
        assert!((sp.lambda - 2.625).abs() < 1e-15);
    }

    #[test]
    fn kappa_values() {
        assert!((g(-1.0, 1.0).kappa() + 2f64.ln()).abs() < 1e-15);
        assert!((g(-1.0, 2.0).kappa() - (3.0f64 / 8.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn geometry_rejects_bad_order() {
        assert!(IntervalPair::new(1.0, 2.0).is_err());
        assert!(IntervalPair::new(-1.0, 0.0).is_err());
        assert!(IntervalPair::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn apply_l_on_simple_functions() {
        let geom = g(-1.0, 1.0);
        let x = 0.5;
        assert_eq!(apply_l(&geom, |_| [1.0, 0.0, 0.0], x), eval_pq(&geom, x).2);
        // x² at 0.5 with P = x⁴ - x², P' = 4x³ - 2x, Q = 2x²
        let want = (0.0625 - 0.25) * 2.0 + (0.5 - 1.0) * 1.0 + 0.5 * 0.25;
        let got = apply_l(&geom, |x| [x * x, 2.0 * x, 2.0], x);
        assert!((got - want).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn p_negative_inside(a1 in -5.0f64..-0.1, a2 in 0.1f64..5.0, t in 0.001f64..0.999) {
                let geom = g(a1, a2);
                prop_assert!(eval_pq(&geom, a1 * t).0 < 0.0);
                prop_assert!(eval_pq(&geom, a2 * t).0 < 0.0);
            }

            #[test]
            fn mu_is_increasing(a1 in -5.0f64..-0.1, a2 in 0.1f64..5.0, d in 0.01f64..10.0) {
                let geom = g(a1, a2);
                let l0 = geom.lambda_min();
                let m1 = mu_of_lambda(&geom, l0 + d).unwrap().mu;
                let m2 = mu_of_lambda(&geom, l0 + 1.01 * d).unwrap().mu;
                prop_assert!(m2 > m1);
                let back = lambda_of_mu(&geom, m1).unwrap().lambda;
                prop_assert!((back - (l0 + d)).abs() <= 1e-12 * (l0 + d));
            }
        }
    }
}
