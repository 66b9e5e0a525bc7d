//! Invariant suite: each check measures one deviation and compares it with a
//! fixed tolerance.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::asymptotics::{rho_sigma_asymptotic, wkb_eigenfunction};
use crate::fht::{
    commutation_residual, discretized_svd, halfline_power_fht, log_linear_fit, middle_third,
    QuadratureRule,
};
use crate::operator::{
    apply_l_complex, eval_pq, frobenius_origin, frobenius_regular, lambda_of_mu, liouville_map,
    mu_of_lambda,
};
use crate::solve::{
    connection_coefficients_with, nu_sigma, spectral_density, wronskian_audit, SolveOptions,
};
use crate::specfun::{coefficient_k, complex_digamma, complex_gamma, hyp2f1, Hyp2F1Params};
use crate::symmetric::{phi_sym, rho_sym, SymmetricGeometry};
use crate::transform::{diagonalization_check, plancherel, SigmaSource, SpectralGrid};
use crate::{IntervalId, IntervalPair, Result};

/// One named check: `measure` returns a non-negative deviation.
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    measure: fn() -> Result<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub value: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
    pub seconds: f64,
}

fn nonsym() -> IntervalPair {
    IntervalPair::new(-1.0, 2.0).expect("valid geometry")
}

fn sym() -> IntervalPair {
    IntervalPair::symmetric(1.0).expect("valid geometry")
}

fn cubic(x: f64) -> [f64; 3] {
    // x²(x + 1)
    [x * x * (x + 1.0), 3.0 * x * x + 2.0 * x, 6.0 * x + 2.0]
}

fn gamma_schwarz() -> Result<f64> {
    let mut worst = 0.0f64;
    for z in [
        Complex64::new(0.3, 2.0),
        Complex64::new(-2.5, 7.0),
        Complex64::new(4.0, 19.0),
    ] {
        let g = complex_gamma(z)?;
        worst = worst.max((complex_gamma(z.conj())? - g.conj()).norm() / g.norm());
        let p = complex_digamma(z)?;
        worst = worst.max((complex_digamma(z.conj())? - p.conj()).norm() / p.norm());
    }
    Ok(worst)
}

fn k_modulus_identity() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..=40 {
        let mu = 0.1 * 300f64.powf(i as f64 / 40.0);
        let want = 1.0 / ((PI * mu).tanh() * 2.0 * PI * mu);
        worst = worst.max((coefficient_k(mu)?.norm_sqr() / want - 1.0).abs());
    }
    Ok(worst)
}

fn hyp2f1_routes() -> Result<f64> {
    let a = Complex64::new(0.25, 1.5);
    let b = a.conj();
    let c = Complex64::new(1.0, 0.0);
    let z = 0.9;
    let routed = hyp2f1(Hyp2F1Params::new(a, b, c, z))?;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..2000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    Ok((routed - sum).norm() / sum.norm())
}

fn p_negative() -> Result<f64> {
    let mut bad = 0;
    for geom in [sym(), nonsym()] {
        for id in IntervalId::BOTH {
            let (e, len) = (geom.endpoint(id), geom.length(id));
            for i in 1..1000 {
                let x = e - id.side() * len * i as f64 / 1000.0;
                if eval_pq(&geom, x).0 >= 0.0 {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad as f64)
}

fn mu_monotone() -> Result<f64> {
    let geom = nonsym();
    let mut bad = if mu_of_lambda(&geom, geom.lambda_min())?.mu == 0.0 {
        0
    } else {
        1
    };
    for i in 0..50 {
        let l = geom.lambda_min() + 0.01 + i as f64;
        if mu_of_lambda(&geom, l + 1e-6)?.mu <= mu_of_lambda(&geom, l)?.mu {
            bad += 1;
        }
    }
    Ok(bad as f64)
}

fn frobenius_residual() -> Result<f64> {
    let geom = nonsym();
    let mut worst = 0.0f64;
    for lambda in [1.0, 5.0, 25.0] {
        let sp = mu_of_lambda(&geom, lambda)?;
        let (yp, _) = frobenius_origin(&geom, &sp, 60)?;
        let mut series = vec![yp];
        for id in IntervalId::BOTH {
            let (phi, theta) = frobenius_regular(&geom, &sp, id, 60)?;
            series.push(phi);
            series.push(theta);
        }
        for s in &series {
            let r = s.radius / 4.0;
            for x in [s.center - r, s.center + r] {
                if s.center == 0.0 || geom.locate(x).is_some() {
                    let y = s.eval_full(x);
                    let res = apply_l_complex(&geom, |_| y, x) - lambda * y[0];
                    worst = worst.max(res.norm() / (y[0].norm() + 1.0));
                }
            }
        }
    }
    Ok(worst)
}

fn liouville_derivative() -> Result<f64> {
    let geom = nonsym();
    let mut worst = 0.0f64;
    for x in [-0.8, -0.5, -0.2, 0.3, 1.0, 1.6] {
        let id = geom.locate(x).expect("interior probe");
        let h = 1e-3 * x.abs().min((x - geom.endpoint(id)).abs());
        let t = |s: f64| liouville_map(&geom, s);
        let d = (8.0 * (t(x + h)? - t(x - h)?) - (t(x + 2.0 * h)? - t(x - 2.0 * h)?)) / (12.0 * h);
        let want = 1.0 / (-eval_pq(&geom, x).0).sqrt();
        // t increases towards the origin on the first interval only
        let sign = if x < 0.0 { 1.0 } else { -1.0 };
        worst = worst.max((sign * d / want - 1.0).abs());
    }
    Ok(worst)
}

fn wronskian() -> Result<f64> {
    let mut worst = 0.0f64;
    for geom in [sym(), nonsym()] {
        for lambda in [2.0, 5.0] {
            let sp = mu_of_lambda(&geom, lambda)?;
            for id in IntervalId::BOTH {
                let (e, len) = (geom.endpoint(id), geom.length(id));
                let probes: Vec<f64> = (1..=10)
                    .map(|i| e - id.side() * len * i as f64 / 11.0)
                    .collect();
                worst = worst.max(wronskian_audit(&geom, &sp, id, &probes)?);
            }
        }
    }
    Ok(worst)
}

fn matching_independence() -> Result<f64> {
    let geom = nonsym();
    let sp = mu_of_lambda(&geom, 3.0)?;
    let a = SolveOptions::default();
    let b = SolveOptions {
        matching_fraction: a.matching_fraction / 2.0,
        ..a
    };
    let mut worst = 0.0f64;
    for id in IntervalId::BOTH {
        let ca = connection_coefficients_with(&geom, &sp, id, &a)?;
        let cb = connection_coefficients_with(&geom, &sp, id, &b)?;
        worst = worst.max((ca.k - cb.k).norm() / ca.k.norm());
        worst = worst.max((ca.l - cb.l).norm() / ca.l.norm());
        worst = worst.max((ca.im_m() / cb.im_m() - 1.0).abs());
    }
    Ok(worst)
}

fn symmetric_density() -> Result<f64> {
    let geom = sym();
    let g = SymmetricGeometry::new(1.0)?;
    let mut worst = 0.0f64;
    for lambda in [1.0, 2.0, 5.0, 25.0] {
        let sp = mu_of_lambda(&geom, lambda)?;
        let want = rho_sym(&g, lambda)?;
        for id in IntervalId::BOTH {
            worst = worst.max((spectral_density(&geom, &sp, id)?.rho_prime / want - 1.0).abs());
        }
    }
    Ok(worst)
}

fn nu_envelope_spread() -> Result<f64> {
    let geom = nonsym();
    let vals: Vec<f64> = (1..=8)
        .map(|m| {
            let sp = lambda_of_mu(&geom, m as f64)?;
            Ok(nu_sigma(&geom, &sp)?.nu.abs().ln() + PI * sp.mu)
        })
        .collect::<Result<_>>()?;
    let (lo, hi) = vals
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| {
            (l.min(v), h.max(v))
        });
    Ok(hi - lo)
}

fn density_plateau() -> Result<f64> {
    let geom = nonsym();
    let sp = mu_of_lambda(&geom, 1e4)?;
    let r = rho_sigma_asymptotic(&geom, &sp)?;
    let r1 = spectral_density(&geom, &sp, IntervalId::One)?.rho_prime / r.rho1;
    let r2 = spectral_density(&geom, &sp, IntervalId::Two)?.rho_prime / r.rho2;
    Ok((r1 - 1.0).abs().max((r2 - 1.0).abs()))
}

fn sqrt_rule_exactness() -> Result<f64> {
    let rule = QuadratureRule::inverse_sqrt_at_zero(16);
    let mut worst = 0.0f64;
    for m in 0..=20 {
        let got = rule.integrate(|x| x.powi(m) / x.sqrt());
        worst = worst.max((got - 2.0 / (2 * m + 1) as f64).abs());
    }
    Ok(worst)
}

fn fht_nu_routes() -> Result<f64> {
    let geom = sym();
    let mut worst = 0.0f64;
    for mu in [1.0, 2.0, 4.0] {
        let dv = nu_sigma(&geom, &lambda_of_mu(&geom, mu)?)?;
        worst = worst
            .max((dv.nu / dv.nu_coefficient - 1.0).abs())
            .max(dv.constancy_defect);
    }
    Ok(worst)
}

fn halfline() -> Result<f64> {
    let mut worst = 0.0f64;
    for mu in [0.0, 2.0] {
        for y in [0.25, 0.3] {
            let got = halfline_power_fht(mu, y, 50.0)?;
            let want = -Complex64::new(y, 0.0).powc(Complex64::new(-0.5, mu)) / (PI * mu).cosh();
            worst = worst.max((got - want).norm() / want.norm());
        }
    }
    Ok(worst)
}

fn commutation() -> Result<f64> {
    let mut worst = 0.0f64;
    for geom in [sym(), nonsym()] {
        let a2 = geom.a2();
        let probes: Vec<f64> = (1..=7).map(|i| a2 * i as f64 / 8.0).collect();
        worst = worst.max(commutation_residual(&geom, cubic, &probes)?);
    }
    Ok(worst)
}

fn plancherel_defect() -> Result<f64> {
    let geom = sym();
    let grid = SpectralGrid::new(&geom, 8.0)?;
    Ok(plancherel(&geom, IntervalId::One, |x| cubic(x)[0], &grid)?
        .defect
        .abs())
}

fn diagonalization() -> Result<f64> {
    let geom = sym();
    let grid = SpectralGrid::new(&geom, 3.0)?;
    Ok(diagonalization_check(
        &geom,
        |x| cubic(x)[0],
        &grid,
        (0.5, 3.0),
        SigmaSource::Quadrature,
    )?
    .max_defect)
}

fn wkb_exponent_offset() -> Result<f64> {
    let geom = sym();
    let g = SymmetricGeometry::new(1.0)?;
    let err = |lambda: f64| -> Result<f64> {
        let sp = mu_of_lambda(&geom, lambda)?;
        let (mut e, mut peak) = (0.0f64, 0.0f64);
        for i in 0..=300 {
            let x = 0.2 + 0.6 * i as f64 / 300.0;
            let exact = phi_sym(&g, lambda, x)?;
            e = e.max((exact - wkb_eigenfunction(&geom, &sp, IntervalId::Two, x)?).abs());
            peak = peak.max(exact.abs());
        }
        Ok(e / peak)
    };
    let p = (err(1600.0)? / err(6400.0)?).ln() / 4f64.ln();
    Ok((p - 0.5).abs())
}

fn symmetric_sigma_envelope() -> Result<f64> {
    let geom = sym();
    let mut worst = 0.0f64;
    for mu in [2.0, 4.0, 6.0] {
        let sp = lambda_of_mu(&geom, mu)?;
        let q = nu_sigma(&geom, &sp)?.nu.abs()
            / rho_sigma_asymptotic(&geom, &sp)?.sigma_recomputed.abs();
        // distance outside [0.8, 1.25] on a log scale, zero inside
        worst = worst.max((q.ln().abs() - 1.25f64.ln()).max(0.0));
    }
    Ok(worst)
}

fn svd_tail() -> Result<f64> {
    let s = discretized_svd(&sym(), 200)?;
    let ordered = s.windows(2).all(|w| w[0] > w[1]) && s.iter().all(|&v| v > 0.0 && v < 1.0);
    let fit = log_linear_fit(&s, middle_third(s.len()));
    Ok(if ordered {
        1.0 - fit.r_squared
    } else {
        f64::INFINITY
    })
}

/// The full list, in reporting order.
pub fn checks() -> Vec<Check> {
    macro_rules! c {
        ($name:expr, $tol:expr, $f:expr) => {
            Check {
                name: $name,
                tolerance: $tol,
                measure: $f,
            }
        };
    }
    vec![
        c!("gamma/digamma Schwarz symmetry", 1e-12, gamma_schwarz),
        c!("|k|^2 identity on [0.1, 30]", 1e-10, k_modulus_identity),
        c!(
            "2F1 routed vs direct series at z = 0.9",
            1e-9,
            hyp2f1_routes
        ),
        c!("-P > 0 inside both intervals", 0.0, p_negative),
        c!("mu(lambda_min) = 0 and mu increasing", 0.0, mu_monotone),
        c!("Frobenius residual at radius/4", 1e-9, frobenius_residual),
        c!("Liouville map derivative", 1e-10, liouville_derivative),
        c!("Wronskian normalization", 1e-8, wronskian),
        c!("matching-point independence", 1e-6, matching_independence),
        c!("symmetric density vs closed form", 1e-6, symmetric_density),
        c!(
            "ln|nu| + pi mu spread over mu in [1, 8]",
            1.0,
            nu_envelope_spread
        ),
        c!("density plateau at lambda = 1e4", 0.05, density_plateau),
        c!("inverse-sqrt rule exactness", 1e-12, sqrt_rule_exactness),
        c!("nu: quadrature vs coefficient route", 1e-4, fht_nu_routes),
        c!("half-line identity", 1e-8, halfline),
        c!("commutation residual", 1e-6, commutation),
        c!("Plancherel defect", 0.02, plancherel_defect),
        c!("diagonalization defect", 0.01, diagonalization),
        c!("WKB exponent offset from 1/2", 0.15, wkb_exponent_offset),
        c!("symmetric sigma envelope", 0.0, symmetric_sigma_envelope),
        c!("SVD ordering and tail 1 - R^2", 0.01, svd_tail),
    ]
}

/// Runs every check with tolerances multiplied by `tolerance_scale`.
pub fn run_suite(tolerance_scale: f64) -> Vec<CheckOutcome> {
    checks()
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let tolerance = c.tolerance * tolerance_scale;
            let (value, error) = match (c.measure)() {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let passed = matches!(value, Some(v) if v <= tolerance);
            CheckOutcome {
                name: c.name,
                value,
                tolerance,
                passed,
                error,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
