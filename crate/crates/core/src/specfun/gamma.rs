use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Lanczos approximation, g = 7, nine terms (Godfrey's coefficients). Its
// cancellation grows with |Im z|, so it is only used close to the real axis.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LANCZOS_MAX_IM: f64 = 8.0;

// Stirling series is used for |z| >= this, after upward recurrence.
const STIRLING_MIN: f64 = 17.0;
// B_{2k} / (2k (2k - 1))
const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("gamma argument"));
    }
    Ok(())
}

/// `ln sin(w)` without overflow for large `|Im w|`. Any branch is fine for
/// callers that exponentiate or differentiate.
fn ln_sin(w: Complex64) -> Complex64 {
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        // sin w = e^{-iw} (e^{2iw} - 1) / (2i), |e^{2iw}| = e^{-2 Im w}
        let i = Complex64::i();
        -i * w + (Complex64::new(1.0, 0.0) - (2.0 * i * w).exp()).ln() + (i / 2.0).ln()
    } else {
        ln_sin(w.conj()).conj()
    }
}

fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &p) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += p / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + x.ln()
}

/// `ln Γ(z)` for `Re z >= 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    if z.im.abs() < LANCZOS_MAX_IM {
        lanczos_ln_gamma(z)
    } else {
        stirling_ln_gamma(z)
    }
}

/// `ln Γ(z)` for `Re z >= 1/2`: shift up to `|z| >= 17`, then Stirling.
fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.norm() < STIRLING_MIN {
        prod *= w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING_COEF {
        series += c * pow;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - prod.ln()
}

/// `ln Γ(z)` on the complex plane (branch unspecified, imaginary part is
/// only meaningful modulo 2π).
pub fn complex_ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        // Γ(z) Γ(1 - z) = π / sin(πz)
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin(PI * z) - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Γ(z) for complex `z`, erroring at the poles `0, -1, -2, ...`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    let v = complex_ln_gamma(z)?.exp();
    if z.im == 0.0 {
        // keep exactly real results on the real axis
        return Ok(Complex64::new(v.re, 0.0));
    }
    Ok(v)
}

fn cot(w: Complex64) -> Complex64 {
    if w.im.abs() < 1.0 {
        return w.cos() / w.sin();
    }
    if w.im > 0.0 {
        let i = Complex64::i();
        let e = (2.0 * i * w).exp();
        i * (e + 1.0) / (e - 1.0)
    } else {
        cot(w.conj()).conj()
    }
}

/// Digamma ψ(z) = Γ′(z)/Γ(z) for complex `z`.
pub fn complex_digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.5 {
        // ψ(1 - z) - ψ(z) = π cot(πz)
        return Ok(complex_digamma(1.0 - z)? - PI * cot(PI * z));
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // B_{2k} / (2k)
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (z * z);
    let mut pow = inv2;
    let mut series = Complex64::new(0.0, 0.0);
    for c in C {
        series += c * pow;
        pow *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}
