//! Spectral pipeline for general intervals: continuation of `φ` and `θ`
//! from the regular endpoints, connection to the oscillatory basis `y±` at
//! the origin, the m-function and spectral density, and the diagonal value
//! `ν` with `H₁ φ₁ = ν φ₂`.

mod taylor;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fht::{fht_apply_with, FhtOptions};
use crate::operator::{
    eval_pq, frobenius_origin, frobenius_regular, FrobeniusSeries, IntervalId, IntervalPair,
    SpectralPoint, DEFAULT_SERIES_ORDER,
};
use crate::{Error, Result};
use taylor::{continue_solution, Segment};

/// Largest accepted condition number of the connection fit.
pub const MAX_FIT_CONDITION: f64 = 1e6;

/// Knobs of the continuation and matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Series-seeded start, as a fraction of the interval length from the regular endpoint.
    pub start_offset: f64,
    /// Matching point `|x_m|` as a fraction of `min(|a1|, a2)`.
    pub matching_fraction: f64,
    pub series_order: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            start_offset: 1e-3,
            matching_fraction: 0.05,
            series_order: DEFAULT_SERIES_ORDER,
        }
    }
}

/// Which endpoint-normalized solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// Bounded at the regular endpoint, `φ(a_j) = 1`.
    Phi,
    /// Logarithmic partner with `∓P·W(θ, φ) = 1`.
    Theta,
}

/// Real solution on the part of an interval between its regular endpoint
/// and the matching point.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHandle {
    pub interval_id: IntervalId,
    pub which: Which,
    seed: FrobeniusSeries,
    seed_x: f64,
    end_x: f64,
    segments: Vec<Segment>,
}

impl SolutionHandle {
    /// Value and derivative at `x`, which must lie between the regular endpoint and the matching point.
    /// `φ` also accepts the regular endpoint itself; `θ` is logarithmic there.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let [v, d, _] = self.eval_full(x)?;
        Ok((v, d))
    }

    /// Value, first and second derivative.
    pub fn eval_full(&self, x: f64) -> Result<[f64; 3]> {
        let e = self.seed.center;
        let dir = (self.end_x - e).signum();
        let key = (x - e) * dir;
        let end_key = (self.end_x - e) * dir;
        let at_endpoint = key == 0.0 && self.which == Which::Phi;
        if !((key > 0.0 || at_endpoint) && key <= end_key * (1.0 + 1e-12)) {
            return Err(Error::Domain {
                what: "solution handle",
                x,
            });
        }
        if key <= (self.seed_x - e) * dir {
            let [v, d, dd] = self.seed.eval_full(x);
            return Ok([v.re, d.re, dd.re]);
        }
        let idx = self
            .segments
            .partition_point(|s| (s.x0 - e) * dir <= key)
            .saturating_sub(1);
        Ok(self.segments[idx].eval_full(x))
    }

    /// End of the continuation (the matching point).
    pub fn end_x(&self) -> f64 {
        self.end_x
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }
}

/// Integrates `φ` or `θ` of interval `id` from the regular endpoint to the
/// default matching point.
pub fn integrate_solution(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    which: Which,
) -> Result<SolutionHandle> {
    integrate_solution_with(geom, sp, id, which, &SolveOptions::default())
}

pub fn integrate_solution_with(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    which: Which,
    opts: &SolveOptions,
) -> Result<SolutionHandle> {
    if !(sp.lambda > geom.lambda_min()) {
        return Err(Error::BelowThreshold {
            lambda: sp.lambda,
            lambda_min: geom.lambda_min(),
        });
    }
    let (phi, theta) = frobenius_regular(geom, sp, id, opts.series_order)?;
    let seed = match which {
        Which::Phi => phi,
        Which::Theta => theta,
    };
    let e = geom.endpoint(id);
    let seed_x = e - id.side() * opts.start_offset * geom.length(id);
    let end_x = id.side() * opts.matching_fraction * geom.inner_scale();
    if (end_x - seed_x) * (end_x - e).signum() <= 0.0 {
        return Err(Error::MatchingPoint {
            interval: id,
            x_m: end_x,
            cond: f64::INFINITY,
        });
    }
    let (y, dy) = seed.eval(seed_x);
    let segments = continue_solution(geom, sp.lambda, seed_x, y.re, dy.re, end_x)?;
    Ok(SolutionHandle {
        interval_id: id,
        which,
        seed,
        seed_x,
        end_x,
        segments,
    })
}

/// Origin basis `y±` with enough terms for `|x| <= r`.
pub(crate) fn origin_basis(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    r: f64,
    min_order: usize,
) -> Result<(FrobeniusSeries, FrobeniusSeries)> {
    let mut order = min_order.max(DEFAULT_SERIES_ORDER);
    loop {
        let (yp, ym) = frobenius_origin(geom, sp, order)?;
        let mags: Vec<f64> = yp
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.norm() * r.powi(n as i32))
            .collect();
        let scale = mags.iter().cloned().fold(0.0, f64::max);
        let tail = mags[order - 1] + mags[order - 2];
        if tail <= 1e-17 * scale {
            return Ok((yp, ym));
        }
        if order >= 2000 {
            return Err(Error::NonConvergence {
                routine: "origin series",
                terms: order,
            });
        }
        order *= 2;
    }
}

/// Coefficients of `φ` and `θ` in the origin basis: `φ = k y₊ + k̄ y₋`,
/// `θ = l y₊ + l̄ y₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionData {
    pub k: Complex64,
    pub l: Complex64,
    pub interval_id: IntervalId,
    pub matching_x: f64,
    /// Condition number of the row-equilibrated 2×2 fit.
    pub cond_number: f64,
    /// `|k₋ - conj(k₊)| / |k₊|` for the two fitted φ coefficients.
    pub conjugacy_defect: f64,
}

impl ConnectionData {
    /// `Im m = -Im(l k̄) / |k|²`.
    pub fn im_m(&self) -> f64 {
        -(self.l * self.k.conj()).im / self.k.norm_sqr()
    }
}

/// Solutions of one interval at one λ, with their connection data.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSolution {
    pub sp: SpectralPoint,
    pub phi: SolutionHandle,
    pub theta: SolutionHandle,
    pub connection: ConnectionData,
    origin_plus: FrobeniusSeries,
}

impl IntervalSolution {
    pub fn eigenfunction(&self) -> Eigenfunction {
        Eigenfunction {
            sp: self.sp,
            phi: self.phi.clone(),
            k: self.connection.k,
            origin_plus: self.origin_plus.clone(),
        }
    }

    pub fn spectral_sample(&self) -> SpectralSample {
        let im_m = self.connection.im_m();
        SpectralSample {
            sp: self.sp,
            im_m,
            rho_prime: im_m / PI,
            interval_id: self.connection.interval_id,
        }
    }
}

fn fit(
    yp: (Complex64, Complex64),
    ym: (Complex64, Complex64),
    f: (f64, f64),
) -> (Complex64, Complex64) {
    let det = yp.0 * ym.1 - ym.0 * yp.1;
    let a = (ym.1 * f.0 - ym.0 * f.1) / det;
    let b = (yp.0 * f.1 - yp.1 * f.0) / det;
    (a, b)
}

fn condition_2x2(m: [[Complex64; 2]; 2]) -> f64 {
    // singular values from the Hermitian Gram matrix
    let g00 = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let g11 = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let g01 = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = g00 + g11;
    let det = g00 * g11 - g01.norm_sqr();
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let smax = (0.5 * tr + disc).sqrt();
    let smin = (0.5 * tr - disc).max(0.0).sqrt();
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Integrates both solutions of interval `id` and connects them to the origin basis.
pub fn solve_interval(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    opts: &SolveOptions,
) -> Result<IntervalSolution> {
    let phi = integrate_solution_with(geom, sp, id, Which::Phi, opts)?;
    let theta = integrate_solution_with(geom, sp, id, Which::Theta, opts)?;
    let x_m = phi.end_x();
    let (yp, ym) = origin_basis(geom, sp, x_m.abs(), opts.series_order)?;
    let (p0, p1) = yp.eval(x_m);
    let (m0, m1) = ym.eval(x_m);
    let cond = condition_2x2([[p0, m0], [p1 * x_m, m1 * x_m]]);
    if !(cond <= MAX_FIT_CONDITION) {
        return Err(Error::MatchingPoint {
            interval: id,
            x_m,
            cond,
        });
    }
    let f = phi.eval(x_m)?;
    let t = theta.eval(x_m)?;
    let w = id.wronskian_sign() * eval_pq(geom, x_m).0 * (t.0 * f.1 - t.1 * f.0);
    if (w - 1.0).abs() > 1e-6 {
        return Err(Error::Accuracy {
            what: "Wronskian at the matching point",
            deviation: (w - 1.0).abs(),
        });
    }
    let (k, k_minus) = fit((p0, p1), (m0, m1), f);
    let (l, _) = fit((p0, p1), (m0, m1), t);
    let connection = ConnectionData {
        k,
        l,
        interval_id: id,
        matching_x: x_m,
        cond_number: cond,
        conjugacy_defect: (k_minus - k.conj()).norm() / k.norm(),
    };
    Ok(IntervalSolution {
        sp: *sp,
        phi,
        theta,
        connection,
        origin_plus: yp,
    })
}

/// Connection coefficients with default options.
pub fn connection_coefficients(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
) -> Result<ConnectionData> {
    connection_coefficients_with(geom, sp, id, &SolveOptions::default())
}

pub fn connection_coefficients_with(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    opts: &SolveOptions,
) -> Result<ConnectionData> {
    Ok(solve_interval(geom, sp, id, opts)?.connection)
}

/// m-function sample: `Im m(λ)` and `ρ′ = Im m / π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSample {
    pub sp: SpectralPoint,
    pub im_m: f64,
    pub rho_prime: f64,
    pub interval_id: IntervalId,
}

pub fn spectral_density(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
) -> Result<SpectralSample> {
    Ok(solve_interval(geom, sp, id, &SolveOptions::default())?.spectral_sample())
}

/// The eigenfunction `φ_j(·, λ)` on its whole interval: the continued
/// solution down to the matching point, `2 Re[k y₊]` closer to the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub sp: SpectralPoint,
    phi: SolutionHandle,
    k: Complex64,
    origin_plus: FrobeniusSeries,
}

impl Eigenfunction {
    pub fn interval_id(&self) -> IntervalId {
        self.phi.interval_id
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    /// Value and derivative; errors outside the open interval.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let x_m = self.phi.end_x();
        if x * x_m > 0.0 && x.abs() <= x_m.abs() {
            let (v, d) = self.origin_plus.eval(x);
            return Ok((2.0 * (self.k * v).re, 2.0 * (self.k * d).re));
        }
        self.phi.eval(x)
    }

    /// Value only; NaN outside the interval.
    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).map(|v| v.0).unwrap_or(f64::NAN)
    }
}

/// Max over probes of `|∓P·W(θ, φ) - 1|`.
pub fn wronskian_audit(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    id: IntervalId,
    x_probe: &[f64],
) -> Result<f64> {
    let phi = integrate_solution(geom, sp, id, Which::Phi)?;
    let theta = integrate_solution(geom, sp, id, Which::Theta)?;
    let mut worst: f64 = 0.0;
    for &x in x_probe {
        let f = phi.eval(x)?;
        let t = theta.eval(x)?;
        let w = id.wronskian_sign() * eval_pq(geom, x).0 * (t.0 * f.1 - t.1 * f.0);
        worst = worst.max((w - 1.0).abs());
    }
    Ok(worst)
}

/// `ν(λ)` by two routes, and `σ(λ) = ν ρ₁′/ρ₂′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalValue {
    pub sp: SpectralPoint,
    /// Least-squares constant of `(H₁ φ₁)(y) / φ₂(y)`.
    pub nu: f64,
    /// `-(k₁/k₂)/cosh(μπ)` from the origin coefficients.
    pub nu_coefficient: f64,
    /// `|Im(k₁/k₂)| / |k₁/k₂|`, which vanishes in exact arithmetic.
    pub coefficient_phase_defect: f64,
    pub sigma: f64,
    pub constancy_defect: f64,
    pub rho1: f64,
    pub rho2: f64,
}

/// Relative disagreement of the two ν routes that triggers an error.
pub const NU_ROUTE_TOLERANCE: f64 = 1e-3;

/// `y / a2` sample window of the quadrature route.
pub const NU_WINDOW: (f64, f64) = (0.05, 0.8);

pub fn nu_sigma(geom: &IntervalPair, sp: &SpectralPoint) -> Result<DiagonalValue> {
    nu_sigma_with(geom, sp, &SolveOptions::default(), 31)
}

/// As [`nu_sigma`], with explicit options and number of `y` samples.
pub fn nu_sigma_with(
    geom: &IntervalPair,
    sp: &SpectralPoint,
    opts: &SolveOptions,
    samples: usize,
) -> Result<DiagonalValue> {
    let s1 = solve_interval(geom, sp, IntervalId::One, opts)?;
    let s2 = solve_interval(geom, sp, IntervalId::Two, opts)?;
    let ratio = s1.connection.k / s2.connection.k;
    let cosh = (PI * sp.mu).cosh();
    let nu_coefficient = -ratio.re / cosh;
    let coefficient_phase_defect = ratio.im.abs() / ratio.norm();

    let ef1 = s1.eigenfunction();
    let ef2 = s2.eigenfunction();
    let fopts = FhtOptions::for_mu(sp.mu);
    let (lo, hi) = NU_WINDOW;
    let mut h = Vec::with_capacity(samples);
    let mut p = Vec::with_capacity(samples);
    for i in 0..samples {
        let y = geom.a2() * (lo + (hi - lo) * i as f64 / (samples - 1) as f64);
        h.push(fht_apply_with(
            |x| ef1.value(x),
            geom,
            IntervalId::One,
            y,
            &fopts,
        )?);
        p.push(ef2.eval(y)?.0);
    }
    let num: f64 = h.iter().zip(&p).map(|(a, b)| a * b).sum();
    let den: f64 = p.iter().map(|b| b * b).sum();
    let nu = num / den;
    let floor = 0.1 * p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let constancy_defect = h
        .iter()
        .zip(&p)
        .filter(|(_, b)| b.abs() >= floor)
        .map(|(a, b)| (a / b - nu).abs() / nu.abs())
        .fold(0.0, f64::max);
    let rho1 = s1.spectral_sample().rho_prime;
    let rho2 = s2.spectral_sample().rho_prime;
    if !nu.is_finite() {
        return Err(Error::NonFinite("nu quadrature route"));
    }
    if (nu - nu_coefficient).abs() > NU_ROUTE_TOLERANCE * nu_coefficient.abs() {
        return Err(Error::Consistency {
            what: "nu",
            lambda: sp.lambda,
            a: nu,
            b: nu_coefficient,
        });
    }
    Ok(DiagonalValue {
        sp: *sp,
        nu,
        nu_coefficient,
        coefficient_phase_defect,
        sigma: nu * rho1 / rho2,
        constancy_defect,
        rho1,
        rho2,
    })
}
