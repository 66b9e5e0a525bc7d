//! Closed forms for the symmetric geometry `a2 = -a1 = a`, where
//! `P = x²(x² - a²)`, `Q = 2x²` and the eigenfunctions are hypergeometric.
//!
//! With `z = |x|/a`, `s = -1/2 + iμ`, `μ = √(λ/a² - 1/4)`:
//!
//! `φ(x, λ) = z^s F(1/4 + iμ/2, 3/4 + iμ/2; 1; 1 - z²) = 2 Re[k z^s F(1/4 + iμ/2, 3/4 + iμ/2; 1 + iμ; z²)]`,
//!
//! the same function serving both intervals (`φ₁(x) = φ₂(-x)`).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::{coefficient_k, hyp2f1_log_second, hyp2f1_with_derivative, Hyp2F1Params};
use crate::{Error, IntervalPair, Result};

/// Below this `z²` the origin-side representation is used.
const CROSSOVER_Z2: f64 = 0.5;
/// `λ` must exceed `a²/4` by this much (`k` has a pole at `μ = 0`).
pub const THRESHOLD_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricGeometry {
    a: f64,
}

impl SymmetricGeometry {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Geometry { a1: -a, a2: a });
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda_min(&self) -> f64 {
        0.25 * self.a * self.a
    }

    pub fn pair(&self) -> IntervalPair {
        IntervalPair::symmetric(self.a).expect("a > 0")
    }

    /// `μ(λ)`, rejecting the threshold neighbourhood.
    pub fn mu(&self, lambda: f64) -> Result<f64> {
        if !(lambda >= self.lambda_min() + THRESHOLD_GUARD) {
            return Err(Error::BelowThreshold {
                lambda,
                lambda_min: self.lambda_min(),
            });
        }
        Ok((lambda / (self.a * self.a) - 0.25).sqrt())
    }

    fn z_of(&self, x: f64) -> Result<f64> {
        let z = x.abs() / self.a;
        if !(z > 0.0 && z <= 1.0) {
            return Err(Error::Domain {
                what: "symmetric eigenfunction",
                x,
            });
        }
        Ok(z)
    }
}

fn params(mu: f64) -> (Complex64, Complex64, Complex64) {
    (
        Complex64::new(0.25, 0.5 * mu),
        Complex64::new(0.75, 0.5 * mu),
        Complex64::new(0.0, mu),
    )
}

/// Complex value and `d/dz` of the hypergeometric representation; the
/// imaginary part vanishes in exact arithmetic.
fn phi_z(mu: f64, z: f64) -> Result<(Complex64, Complex64)> {
    let (alpha, beta, i_mu) = params(mu);
    let s = Complex64::new(-0.5, mu);
    let zs = (s * z.ln()).exp();
    if z * z >= CROSSOVER_Z2 {
        let one = Complex64::new(1.0, 0.0);
        let (f, df) = hyp2f1_with_derivative(Hyp2F1Params::new(alpha, beta, one, 1.0 - z * z))?;
        Ok((zs * f, zs * (s / z * f - 2.0 * z * df)))
    } else {
        let k = coefficient_k(mu)?;
        let (f, df) = hyp2f1_with_derivative(Hyp2F1Params::new(alpha, beta, 1.0 + i_mu, z * z))?;
        let v = k * zs * f;
        let d = k * zs * (s / z * f + 2.0 * z * df);
        Ok((
            Complex64::new(2.0 * v.re, 0.0),
            Complex64::new(2.0 * d.re, 0.0),
        ))
    }
}

/// `φ(x, λ)` for `0 < |x| ≤ a`, with its imaginary residue.
pub fn phi_sym_complex(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<Complex64> {
    Ok(phi_z(g.mu(lambda)?, g.z_of(x)?)?.0)
}

/// `φ(x, λ)` for `0 < |x| ≤ a` (even in `x`).
pub fn phi_sym(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<f64> {
    Ok(phi_sym_complex(g, lambda, x)?.re)
}

/// `(φ, dφ/dx)`.
pub fn phi_sym_with_derivative(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<(f64, f64)> {
    let (v, dz) = phi_z(g.mu(lambda)?, g.z_of(x)?)?;
    Ok((v.re, dz.re * x.signum() / g.a))
}

/// Complex `θ` and `dθ/dz` before taking the real part.
fn theta_z(g: &SymmetricGeometry, lambda: f64, z: f64) -> Result<(Complex64, Complex64)> {
    let mu = g.mu(lambda)?;
    let (alpha, beta, _) = params(mu);
    let s = Complex64::new(-0.5, mu);
    let xi = 1.0 - z * z;
    let zs = (s * z.ln()).exp();
    let ls = hyp2f1_log_second(alpha, beta, xi)?;
    let phi = zs * ls.regular;
    let dphi = zs * (s / z * ls.regular - 2.0 * z * ls.d_regular);
    let psi = zs * ls.analytic_part;
    let dpsi = zs * (s / z * ls.analytic_part - 2.0 * z * ls.d_analytic_part);
    let kappa = -0.5 / g.a.powi(3);
    let v = (phi * xi.ln() + psi) * kappa;
    let d = (dphi * xi.ln() + phi * (-2.0 * z / xi) + dpsi) * kappa;
    Ok((v, d))
}

/// `θ = -(1/(2a³)) [φ ln((a² - x²)/a²) + Ψ]` for `0 < |x| < a`, with its imaginary residue.
pub fn theta_sym_complex(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<Complex64> {
    let z = g.z_of(x)?;
    if z >= 1.0 {
        return Err(Error::Domain {
            what: "theta_sym (logarithmic endpoint)",
            x,
        });
    }
    Ok(theta_z(g, lambda, z)?.0)
}

pub fn theta_sym(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<f64> {
    Ok(theta_sym_complex(g, lambda, x)?.re)
}

/// `(θ, dθ/dx)`.
pub fn theta_sym_with_derivative(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<(f64, f64)> {
    let z = g.z_of(x)?;
    if z >= 1.0 {
        return Err(Error::Domain {
            what: "theta_sym (logarithmic endpoint)",
            x,
        });
    }
    let (v, d) = theta_z(g, lambda, z)?;
    Ok((v.re, d.re * x.signum() / g.a))
}

/// Non-logarithmic part `Ψ` of `θ` (before the `-1/(2a³)` factor).
pub fn theta_sym_analytic_part(g: &SymmetricGeometry, lambda: f64, x: f64) -> Result<Complex64> {
    let mu = g.mu(lambda)?;
    let z = g.z_of(x)?;
    let (alpha, beta, _) = params(mu);
    let s = Complex64::new(-0.5, mu);
    let ls = hyp2f1_log_second(alpha, beta, 1.0 - z * z)?;
    Ok((s * z.ln()).exp() * ls.analytic_part)
}

/// `ρ′(λ) = tanh(π√(λ/a² - 1/4)) / (2a³)`, the same on both intervals.
pub fn rho_sym(g: &SymmetricGeometry, lambda: f64) -> Result<f64> {
    if lambda < g.lambda_min() {
        return Err(Error::BelowThreshold {
            lambda,
            lambda_min: g.lambda_min(),
        });
    }
    let mu = (lambda / (g.a * g.a) - 0.25).max(0.0).sqrt();
    Ok((PI * mu).tanh() / (2.0 * g.a.powi(3)))
}

/// Large-μ form `√2 a / (√(πμ) √x (a² - x²)^{1/4}) · cos(μ ln((a + √(a² - x²))/x) - π/4)`,
/// meant for `x` in a compact part of `(0, a)`.
pub fn phi_sym_asymptotic(g: &SymmetricGeometry, lambda: f64, x: f64) -> f64 {
    let a = g.a;
    let mu = (lambda / (a * a) - 0.25).sqrt();
    let x = x.abs();
    let root = (a * a - x * x).sqrt();
    let amp = 2f64.sqrt() * a / ((PI * mu).sqrt() * x.sqrt() * root.sqrt());
    amp * (mu * ((a + root) / x).ln() - 0.25 * PI).cos()
}

/// Stationary point of `h(t) = ln t + ln(1 - t) - ln(1 - z² t)` and the
/// quantities entering the large-μ evaluation of the integral representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPhase {
    pub t_star: f64,
    pub h_tstar: f64,
    pub r_tstar: f64,
    pub h2_tstar: f64,
}

pub fn stationary_phase_data(z: f64) -> Result<StationaryPhase> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Domain {
            what: "stationary_phase_data",
            x: z,
        });
    }
    let w = (1.0 - z * z).sqrt();
    Ok(StationaryPhase {
        t_star: 1.0 / (1.0 + w),
        h_tstar: -2.0 * (1.0 + w).ln(),
        r_tstar: (1.0 + w) / w,
        h2_tstar: -2.0 * (1.0 + w).powi(2) / w,
    })
}
