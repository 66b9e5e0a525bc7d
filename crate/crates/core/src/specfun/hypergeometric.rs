use num_complex::Complex64;

use super::gamma::complex_ln_gamma;
use crate::{Error, Result};

/// Hard cap on the number of series terms before reporting non-convergence.
pub const SERIES_TERM_CAP: usize = 100_000;

const STOP_RATIO: f64 = 1e-17;
// A series whose largest term exceeds the sum by this factor is treated as
// cancellation-damaged and re-routed through the 1 - z connection.
const CANCELLATION_LIMIT: f64 = 1e3;

/// Arguments of `F(a, b; c; z)` on the real segment `0 <= z < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub z: f64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.z) {
            return Err(Error::Parameter(format!(
                "hyp2f1 needs 0 <= z < 1, got {}",
                self.z
            )));
        }
        if is_nonpositive_integer(self.c) {
            return Err(Error::Parameter(format!(
                "hyp2f1: c = {} is a non-positive integer",
                self.c
            )));
        }
        Ok(())
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn near_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-8 && (z.re - z.re.round()).abs() < 1e-8
}

#[derive(Debug, Clone, Copy)]
struct Summed {
    value: Complex64,
    deriv: Complex64,
    max_term: f64,
}

impl Summed {
    fn loss(&self) -> f64 {
        self.max_term / self.value.norm().max(f64::MIN_POSITIVE)
    }
}

/// Plain Gauss series with its z-derivative.
fn gauss_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Summed> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut value = term;
    let mut deriv = Complex64::new(0.0, 0.0);
    let mut max_term: f64 = 1.0;
    let mut small_run = 0;
    for n in 0..SERIES_TERM_CAP {
        let nf = n as f64;
        // term_{n+1} / term_n = (a+n)(b+n) / ((c+n)(n+1)) z
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0));
        // coef = A_{n+1} z^n, and d/dz (A_{n+1} z^{n+1}) = (n+1) coef
        let coef = term * ratio;
        deriv += coef * (nf + 1.0);
        term = coef * z;
        value += term;
        let mag = term.norm();
        max_term = max_term.max(mag);
        if term == Complex64::new(0.0, 0.0) {
            return Ok(Summed {
                value,
                deriv,
                max_term,
            });
        }
        if mag < STOP_RATIO * value.norm() {
            small_run += 1;
            if small_run >= 2 {
                return Ok(Summed {
                    value,
                    deriv,
                    max_term,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        routine: "hyp2f1 series",
        terms: SERIES_TERM_CAP,
    })
}

/// `F(a,b;c;z)` through the `1 - z` connection (valid when `c - a - b` is
/// not an integer).
fn connection(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Summed> {
    let w = 1.0 - z;
    let s = c - a - b;
    let lg_c = complex_ln_gamma(c)?;
    let pre_a =
        (lg_c + complex_ln_gamma(s)? - complex_ln_gamma(c - a)? - complex_ln_gamma(c - b)?).exp();
    let pre_b = (lg_c + complex_ln_gamma(-s)? - complex_ln_gamma(a)? - complex_ln_gamma(b)?).exp();
    let f1 = gauss_series(a, b, 1.0 - s, w)?;
    let f2 = gauss_series(c - a, c - b, 1.0 + s, w)?;
    let ws = Complex64::new(w, 0.0).powc(s);
    let value = pre_a * f1.value + pre_b * ws * f2.value;
    let deriv = -pre_a * f1.deriv - pre_b * (s * ws / w * f2.value + ws * f2.deriv);
    let max_term = (pre_a.norm() * f1.max_term).max((pre_b * ws).norm() * f2.max_term);
    Ok(Summed {
        value,
        deriv,
        max_term,
    })
}

fn evaluate(p: &Hyp2F1Params) -> Result<Summed> {
    p.validate()?;
    let Hyp2F1Params { a, b, c, z } = *p;
    if z == 0.0 {
        return Ok(Summed {
            value: Complex64::new(1.0, 0.0),
            deriv: a * b / c,
            max_term: 1.0,
        });
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    let connectable = !terminating
        && !near_integer(c - a - b)
        && !is_nonpositive_integer(c - a)
        && !is_nonpositive_integer(c - b);
    if z > 0.5 && connectable {
        let conn = connection(a, b, c, z)?;
        if conn.loss() <= CANCELLATION_LIMIT {
            return Ok(conn);
        }
        // Fall back on the direct series only if it is cleaner.
        return match gauss_series(a, b, c, z) {
            Ok(direct) if direct.loss() < conn.loss() => Ok(direct),
            _ => Ok(conn),
        };
    }
    let direct = gauss_series(a, b, c, z)?;
    if direct.loss() > CANCELLATION_LIMIT && connectable {
        if let Ok(conn) = connection(a, b, c, z) {
            if conn.loss() < direct.loss() {
                return Ok(conn);
            }
        }
    }
    Ok(direct)
}

/// Gauss hypergeometric function `F(a, b; c; z)` for `0 <= z < 1`.
///
/// The power series is summed by term recurrence. For `z > 1/2`, or when the
/// series loses more than three digits to cancellation, the `1 - z`
/// connection is used instead whenever `c - a - b` is not an integer.
pub fn hyp2f1(p: Hyp2F1Params) -> Result<Complex64> {
    Ok(evaluate(&p)?.value)
}

/// `F(a,b;c;z)` together with `dF/dz`.
pub fn hyp2f1_with_derivative(p: Hyp2F1Params) -> Result<(Complex64, Complex64)> {
    let s = evaluate(&p)?;
    Ok((s.value, s.deriv))
}

/// Logarithmic second solution of the hypergeometric equation with `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSecondSolution {
    /// `F(a, b; 1; ξ)`
    pub regular: Complex64,
    pub d_regular: Complex64,
    /// Non-logarithmic part `S(ξ)`, with `S(0) = 0`.
    pub analytic_part: Complex64,
    pub d_analytic_part: Complex64,
    /// `F(a, b; 1; ξ) ln ξ + S(ξ)`
    pub full_second_solution: Complex64,
}

/// Second solution `F(a,b;1;ξ) ln ξ + S(ξ)` at `c = 1`, normalized so the
/// coefficient of `ln ξ` is exactly `F(a,b;1;ξ)` and `S(0) = 0`:
///
/// `S(ξ) = Σ_{k≥1} (a)_k (b)_k / (k!)² ξ^k [ψ(a+k) - ψ(a) + ψ(b+k) - ψ(b) - 2ψ(k+1) + 2ψ(1)]`.
///
/// The digamma differences are accumulated as finite harmonic sums.
pub fn hyp2f1_log_second(a: Complex64, b: Complex64, xi: f64) -> Result<LogSecondSolution> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Parameter(format!(
            "hyp2f1_log_second needs 0 < xi < 1, got {xi}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut reg, mut d_reg) = (one, zero);
    let (mut s, mut d_s) = (zero, zero);
    let mut coef = one; // (a)_k (b)_k / (k!)²
    let mut harmonic = zero; // digamma-difference bracket
    let mut small_run = 0;
    for k in 0..SERIES_TERM_CAP {
        let kf = k as f64;
        harmonic += 1.0 / (a + kf) + 1.0 / (b + kf) - 2.0 / (kf + 1.0);
        coef *= (a + kf) * (b + kf) / ((kf + 1.0) * (kf + 1.0));
        let pk = xi.powi(k as i32); // ξ^k, so the new term is coef ξ^{k+1}
        let t = coef * pk * xi;
        reg += t;
        d_reg += coef * pk * (kf + 1.0);
        let u = coef * harmonic;
        s += u * pk * xi;
        d_s += u * pk * (kf + 1.0);
        let mag = t.norm().max((u * pk * xi).norm());
        if coef == zero {
            break;
        }
        if mag < STOP_RATIO * reg.norm().max(s.norm()) {
            small_run += 1;
            if small_run >= 2 {
                let full = reg * xi.ln() + s;
                return Ok(LogSecondSolution {
                    regular: reg,
                    d_regular: d_reg,
                    analytic_part: s,
                    d_analytic_part: d_s,
                    full_second_solution: full,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        routine: "hyp2f1_log_second",
        terms: SERIES_TERM_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn family(mu: f64) -> (Complex64, Complex64) {
        (c(0.25, 0.5 * mu), c(0.75, 0.5 * mu))
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn empty_series_at_zero() {
        let (a, b) = family(3.0);
        for cc in [c(1.0, 0.0), c(1.0, 3.0), c(2.5, -1.0)] {
            let v = hyp2f1(Hyp2F1Params::new(a, b, cc, 0.0)).unwrap();
            assert_eq!(v, c(1.0, 0.0));
        }
    }

    #[test]
    fn binomial_reduction() {
        let v = hyp2f1(Hyp2F1Params::new(
            c(0.25, 0.0),
            c(0.75, 0.0),
            c(0.75, 0.0),
            0.3,
        ))
        .unwrap();
        assert!((v.re - 0.7f64.powf(-0.25)).abs() < 1e-15 && v.im.abs() < 1e-16);
    }

    // 60-digit references from tests/oracle/reference_values.py
    #[test]
    fn family_values_match_reference() {
        let (a, b) = family(1.0);
        let v = hyp2f1(Hyp2F1Params::new(a, b, c(1.0, 1.0), 0.25)).unwrap();
        assert!(rel(v, c(1.061_119_004_291_366_1, 0.083_591_076_733_077_308)) < 1e-14);

        let cases = [
            (
                30.0,
                0.5,
                false,
                c(-0.084_814_509_523_616_188, -0.124_408_596_561_280_98),
            ),
            (
                30.0,
                0.5,
                true,
                c(0.047_254_205_060_598_914, -1.188_185_493_137_038_2),
            ),
            (
                30.0,
                0.1,
                false,
                c(0.002_292_034_963_423_572_8, -0.238_462_914_792_717_87),
            ),
            (
                30.0,
                0.1,
                true,
                c(0.729_865_549_516_674_65, 0.722_061_346_133_461_23),
            ),
            (
                30.0,
                0.9,
                false,
                c(0.140_130_167_806_828_07, -0.002_626_738_540_836_968_9),
            ),
            (
                30.0,
                0.9,
                true,
                c(1.777_153_502_445_023_7, -0.010_856_000_270_478_83),
            ),
            (
                10.0,
                0.7,
                false,
                c(0.079_568_140_281_089_018, -0.021_450_060_753_121_587),
            ),
            (
                10.0,
                0.7,
                true,
                c(-1.137_517_769_425_029_9, 0.725_743_650_465_995_69),
            ),
            (
                5.0,
                0.95,
                false,
                c(-0.102_165_707_768_145_51, -0.267_644_208_237_519_9),
            ),
            (
                5.0,
                0.95,
                true,
                c(-1.675_854_316_713_821_4, 1.189_460_950_970_827_2),
            ),
        ];
        for (mu, z, shifted, want) in cases {
            let (a, b) = family(mu);
            let cc = if shifted { c(1.0, mu) } else { c(1.0, 0.0) };
            let got = hyp2f1(Hyp2F1Params::new(a, b, cc, z)).unwrap();
            assert!(
                rel(got, want) < 1e-11,
                "mu={mu} z={z} c={cc}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (a, b) = family(2.0);
        for (cc, z) in [(c(1.0, 0.0), 0.3), (c(1.0, 0.0), 0.8), (c(1.0, 2.0), 0.6)] {
            let h = 1e-5;
            let p = |z| hyp2f1(Hyp2F1Params::new(a, b, cc, z)).unwrap();
            let fd =
                (p(z - 2.0 * h) - 8.0 * p(z - h) + 8.0 * p(z + h) - p(z + 2.0 * h)) / (12.0 * h);
            let (_, d) = hyp2f1_with_derivative(Hyp2F1Params::new(a, b, cc, z)).unwrap();
            assert!(rel(d, fd) < 1e-8, "z={z}: {d} vs {fd}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let (a, b) = family(1.0);
        assert!(hyp2f1(Hyp2F1Params::new(a, b, c(-2.0, 0.0), 0.2)).is_err());
        assert!(hyp2f1(Hyp2F1Params::new(a, b, c(1.0, 0.0), 1.0)).is_err());
        assert!(hyp2f1(Hyp2F1Params::new(a, b, c(1.0, 0.0), -0.1)).is_err());
    }

    #[test]
    fn log_second_solution_matches_reference() {
        let (a, b) = family(1.0);
        let s = hyp2f1_log_second(a, b, 0.2).unwrap();
        assert!(
            rel(
                s.analytic_part,
                c(0.250_447_619_744_004_95, 0.028_059_412_680_952_335)
            ) < 1e-13
        );
        assert!(
            rel(
                s.full_second_solution,
                c(-1.321_694_634_761_065_5, -0.148_078_768_857_411_13)
            ) < 1e-13
        );
        let s = hyp2f1_log_second(a, b, 0.6).unwrap();
        assert!(
            rel(
                s.analytic_part,
                c(0.917_766_109_226_284_36, 0.452_588_094_027_883_16)
            ) < 1e-13
        );
        assert!(
            rel(
                s.full_second_solution,
                c(0.510_849_929_271_356_32, 0.251_921_043_388_840_46)
            ) < 1e-13
        );
    }

    #[test]
    fn log_second_analytic_part_vanishes_at_origin() {
        let (a, b) = family(1.0);
        let s = hyp2f1_log_second(a, b, 1e-9).unwrap();
        assert!(s.analytic_part.norm() < 1e-8);
        let s = hyp2f1_log_second(a, b, 1e-12).unwrap();
        assert!(s.analytic_part.norm() < 1e-11);
    }

    #[test]
    fn log_pair_is_independent() {
        // Wronskian of (F, second solution) in ξ; Abel gives ξ^{-1}(1-ξ)^{c-a-b-1} up to a constant
        let (a, b) = family(1.0);
        let xi = 0.2;
        let s = hyp2f1_log_second(a, b, xi).unwrap();
        let d_full = s.d_regular * xi.ln() + s.regular / xi + s.d_analytic_part;
        let w = s.regular * d_full - s.d_regular * s.full_second_solution;
        assert!(w.norm() > 1.0);
        // Abel: w ξ (1-ξ)^{a+b-c+1} is the constant 1 (its value as ξ → 0)
        let abel = w * xi * Complex64::new(1.0 - xi, 0.0).powc(a + b);
        assert!((abel - 1.0).norm() < 1e-12, "{abel}");
    }

    #[test]
    fn log_second_matches_digamma_form() {
        use crate::specfun::complex_digamma;
        let (a, b) = family(0.8);
        let xi: f64 = 0.35;
        let mut s = c(0.0, 0.0);
        let mut coef = c(1.0, 0.0);
        for k in 1..200 {
            let kf = k as f64;
            coef *= (a + kf - 1.0) * (b + kf - 1.0) / (kf * kf);
            let d = complex_digamma(a + kf).unwrap() - complex_digamma(a).unwrap()
                + complex_digamma(b + kf).unwrap()
                - complex_digamma(b).unwrap()
                - 2.0
                    * (complex_digamma(c(kf + 1.0, 0.0)).unwrap()
                        - complex_digamma(c(1.0, 0.0)).unwrap());
            s += coef * d * xi.powi(k);
        }
        let got = hyp2f1_log_second(a, b, xi).unwrap().analytic_part;
        assert!(rel(got, s) < 1e-11, "{got} vs {s}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn conjugate_parameters_conjugate_value(mu in 0.1f64..20.0, z in 0.0f64..0.97) {
                let (a, b) = family(mu);
                let v = hyp2f1(Hyp2F1Params::new(a, b, c(1.0, mu), z)).unwrap();
                let w = hyp2f1(Hyp2F1Params::new(a.conj(), b.conj(), c(1.0, -mu), z)).unwrap();
                prop_assert!((w - v.conj()).norm() <= 1e-12 * v.norm().max(1.0));
            }
        }
    }
}
