//! Special functions needed by the closed-form and asymptotic machinery.
//!
//! Everything here is self-contained: Γ and ψ on the complex plane, the
//! Gauss hypergeometric function with complex parameters (and its
//! logarithmic second solution at `c = 1`), and the Bessel pair J₀, Y₀.

mod bessel;
mod gamma;
mod hypergeometric;

pub use bessel::bessel_j0y0;
pub use gamma::{complex_digamma, complex_gamma, complex_ln_gamma, EULER_GAMMA};
pub use hypergeometric::{
    hyp2f1, hyp2f1_log_second, hyp2f1_with_derivative, Hyp2F1Params, LogSecondSolution,
    SERIES_TERM_CAP,
};

use num_complex::Complex64;

use crate::{Error, Result};

/// Connection prefactor `k(μ) = Γ(-iμ) / [Γ(1/4 - iμ/2) Γ(3/4 - iμ/2)]`.
///
/// It is the weight of `z^{-1/2+iμ}` when the `z = 1` hypergeometric
/// eigenfunction is re-expanded at `z = 0`; the weight of the conjugate
/// power is `conj(k)`. `|k|² = coth(πμ)/(2πμ)`.
pub fn coefficient_k(mu: f64) -> Result<Complex64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Parameter(format!(
            "coefficient_k needs mu > 0 (logarithmic connection at mu = 0), got {mu}"
        )));
    }
    let i = Complex64::i();
    let ln = complex_ln_gamma(-i * mu)?
        - complex_ln_gamma(Complex64::new(0.25, -0.5 * mu))?
        - complex_ln_gamma(Complex64::new(0.75, -0.5 * mu))?;
    Ok(ln.exp())
}
