//! High-energy forms: the WKB eigenfunction away from the singular points,
//! its phase near the origin, matching of WKB exponentials to the origin
//! basis, and the limiting densities and multipliers.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::operator::{eval_pq, liouville_map, IntervalId, IntervalPair, SpectralPoint};
use crate::solve::origin_basis;
use crate::{Error, Result};

/// Ingredients of the WKB phase `√λ t(x)` and amplitude normalizer `c(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbPhase {
    pub sp: SpectralPoint,
    /// `ln((a2 - a1)/(-4 a1 a2))`.
    pub kappa: f64,
    /// `λ^{1/4} √(π/|P′(a_j)|)`.
    pub c_lambda: f64,
    pub interval_id: IntervalId,
}

impl WkbPhase {
    pub fn new(geom: &IntervalPair, sp: &SpectralPoint, id: IntervalId) -> Self {
        let (_, dp, _) = eval_pq(geom, geom.endpoint(id));
        Self {
            sp: *sp,
            kappa: geom.kappa(),
            c_lambda: sp.lambda.powf(0.25) * (PI / dp.abs()).sqrt(),
            interval_id: id,
        }
    }

    /// `√λ ∫ dt/√(-P)` from the regular endpoint to `x`.
    pub fn phase(&self, geom: &IntervalPair, x: f64) -> Result<f64> {
        Ok(self.sp.lambda.sqrt() * liouville_map(geom, x)?)
    }
}

/// Practical WKB window: at least `0.02·len` from the endpoint and `|x| ≥ 1e-4·len`.
pub fn in_wkb_window(geom: &IntervalPair, id: IntervalId, x: f64) -> bool {
    let len = geom.length(id);
    geom.locate(x) == Some(id)
        && (x - geom.endpoint(id)).abs() >= 0.02 * len
        && x.abs() >= 1e-4 * len
}

/// Leading-order `cos(√λ t(x) - π/4) / (c(λ) (-P(x))^{1/4})`.
pub fn wkb_eigenfunction(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    x: f64,
) -> Result<f64> {
    if !in_wkb_window(geom, id, x) {
        return Err(Error::Domain {
            what: "wkb_eigenfunction window",
            x,
        });
    }
    let w = WkbPhase::new(geom, sp, id);
    let (p, _, _) = eval_pq(geom, x);
    Ok((w.phase(geom, x)? - FRAC_PI_4).cos() / (w.c_lambda * (-p).powf(0.25)))
}

/// `-μ(ln|x| + κ)`, the phase near the origin.
pub fn wkb_phase_near_zero(geom: &IntervalPair, sp: &SpectralPoint, x: f64) -> Result<f64> {
    if x == 0.0 || x.abs() > 0.05 * geom.inner_scale() {
        return Err(Error::Domain {
            what: "wkb_phase_near_zero",
            x,
        });
    }
    Ok(-sp.mu * (x.abs().ln() + geom.kappa()))
}

/// Limiting densities and the two candidate multipliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReference {
    /// `1/(a1² (a2 - a1))`.
    pub rho1: f64,
    /// `1/(a2² (a2 - a1))`.
    pub rho2: f64,
    /// `(a2³/a1)/cosh(μπ)` as printed in the source formula.
    pub sigma_verbatim: f64,
    /// `-(a2/|a1|)/cosh(μπ)`, from the ratio of the endpoint prefactors.
    pub sigma_recomputed: f64,
}

pub fn rho_sigma_asymptotic(
    geom: &IntervalPair,
    sp: &SpectralPoint,
) -> Result<AsymptoticReference> {
    if !(sp.mu >= 1.0) {
        return Err(Error::Parameter(format!(
            "asymptotic reference needs mu >= 1, got {}",
            sp.mu
        )));
    }
    let (a1, a2) = (geom.a1(), geom.a2());
    let len = a2 - a1;
    let sech = 1.0 / (PI * sp.mu).cosh();
    Ok(AsymptoticReference {
        rho1: 1.0 / (a1 * a1 * len),
        rho2: 1.0 / (a2 * a2 * len),
        sigma_verbatim: a2.powi(3) / a1 * sech,
        sigma_recomputed: -(a2 / a1.abs()) * sech,
    })
}

/// Fitted over predicted coefficients of the WKB exponentials in the origin basis.
///
/// With `Y±(x) = (-P)^{-1/4} e^{±i√λ t(x)}` on `(a1, 0)`, the phase decreases
/// like `-μ ln|x|`, so `Y₊` pairs with `y₋ = |x|^{-1/2-iμ}(1 + …)`:
/// `Y₊ ≈ e^{-iμκ}(-a1 a2)^{-1/4} y₋`. `plus` is the fit of `Y₊` on `y₋` over that
/// prediction, `minus` the same for `Y₋` on `y₊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerMatch {
    pub plus: Complex64,
    pub minus: Complex64,
}

/// Overlap window `|x| ∈ [0.01, 0.2]·min(|a1|, a2)` on the first interval.
const MATCH_WINDOW: (f64, f64) = (0.01, 0.2);
const MATCH_SAMPLES: usize = 41;

pub fn inner_match_coefficients(geom: &IntervalPair, sp: &SpectralPoint) -> Result<InnerMatch> {
    if !(sp.mu >= 5.0) {
        return Err(Error::EmptyWindow(sp.lambda));
    }
    let scale = geom.inner_scale();
    let (lo, hi) = (MATCH_WINDOW.0 * scale, MATCH_WINDOW.1 * scale);
    let (yp, ym) = origin_basis(geom, sp, hi, 0)?;
    let sqrt_lambda = sp.lambda.sqrt();
    let mut num_p = Complex64::new(0.0, 0.0);
    let mut num_m = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..MATCH_SAMPLES {
        let x = -(lo.ln() + (hi / lo).ln() * i as f64 / (MATCH_SAMPLES - 1) as f64).exp();
        let (p, _, _) = eval_pq(geom, x);
        let amp = (-p).powf(-0.25);
        let ph = sqrt_lambda * liouville_map(geom, x)?;
        let big_p = Complex64::from_polar(amp, ph);
        let big_m = big_p.conj();
        let (vp, _) = yp.eval(x);
        let (vm, _) = ym.eval(x);
        // weight |x| puts all samples on the same footing
        let w = x.abs();
        num_p += w * vm.conj() * big_p;
        num_m += w * vp.conj() * big_m;
        den += w * vm.norm_sqr();
    }
    let predicted = Complex64::from_polar(geom.neg_a1a2().powf(-0.25), -sp.mu * geom.kappa());
    Ok(InnerMatch {
        plus: num_p / den / predicted,
        minus: num_m / den / predicted.conj(),
    })
}
