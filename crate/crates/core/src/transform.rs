//! Spectral transforms `(U_j f)(λ) = ∫_{I_j} φ_j(x, λ) f(x) dx` on a
//! discretized measure `ρ_j′(λ) dλ`, with the isometry and diagonalization checks.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::fht::{fht_apply_with, integrate_on_interval, FhtOptions, INNER_FRACTION};
use crate::operator::{apply_l, lambda_of_mu, IntervalId, IntervalPair};
use crate::quad::{log_graded_panels, GaussLegendre};
use crate::solve::{nu_sigma, solve_interval, Eigenfunction, SolveOptions};
use crate::{Error, Result};

/// Default truncation `μ_max`.
pub const DEFAULT_MU_MAX: f64 = 8.0;
/// Nodes with `|U₁ f|` below this fraction of the maximum are left out of relative statistics.
pub const NOISE_FLOOR: f64 = 1e-6;

/// Default `μ` panel width. A panel must resolve `cos(μ ln|x|)` down to the
/// smallest `|x|` of [`IntervalRule`].
pub const DEFAULT_PANEL_WIDTH: f64 = 0.25;
/// Inner cutoff, in `u = sqrt|x|`, of the rule used by forward transforms.
pub const FORWARD_U_MIN: f64 = 1e-12;
/// Inner cutoff, in `u = sqrt|x|`, of the region where the adjoint is resolved
/// by the default panels.
pub const ADJOINT_U_MIN: f64 = 1e-8;
const NODES_PER_PANEL: usize = 8;

/// Gauss–Legendre panels in `μ` on `(0, μ_max)`, mapped to `λ` with
/// `dλ = 2(-a1 a2) μ dμ`, together with both eigenfunctions and densities at every node.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub mu_nodes: Vec<f64>,
    pub lambda_nodes: Vec<f64>,
    pub lambda_weights: Vec<f64>,
    /// `ρ₁′` and `ρ₂′` at the nodes.
    pub rho_values: [Vec<f64>; 2],
    pub lambda_max: f64,
    pub mu_max: f64,
    geom: IntervalPair,
    eigenfunctions: [Vec<Eigenfunction>; 2],
}

fn slot(id: IntervalId) -> usize {
    match id {
        IntervalId::One => 0,
        IntervalId::Two => 1,
    }
}

impl SpectralGrid {
    pub fn new(geom: &IntervalPair, mu_max: f64) -> Result<Self> {
        Self::with_panel_width(geom, mu_max, DEFAULT_PANEL_WIDTH)
    }

    pub fn with_panel_width(geom: &IntervalPair, mu_max: f64, panel_width: f64) -> Result<Self> {
        if !(mu_max > 0.0 && mu_max.is_finite()) {
            return Err(Error::Parameter(format!(
                "mu_max must be positive, got {mu_max}"
            )));
        }
        if !(panel_width > 0.0 && panel_width <= 1.0) {
            return Err(Error::Parameter(format!(
                "panel width must lie in (0, 1], got {panel_width}"
            )));
        }
        // finer panels near the threshold, where ρ′ and the eigenfunctions change fastest
        let mut edges = vec![0.0, panel_width / 4.0, panel_width / 2.0];
        let mut e = panel_width;
        while e < mu_max - 1e-12 {
            edges.push(e);
            e += panel_width;
        }
        edges.retain(|&v| v < mu_max);
        edges.push(mu_max);
        let rule = GaussLegendre::new(NODES_PER_PANEL);
        let scale = 2.0 * geom.neg_a1a2();
        let mut mu_nodes = Vec::new();
        let mut lambda_weights = Vec::new();
        for w in edges.windows(2) {
            for (mu, wt) in rule.mapped(w[0], w[1]) {
                mu_nodes.push(mu);
                lambda_weights.push(wt * scale * mu);
            }
        }
        let solved: Vec<Result<[(Eigenfunction, f64); 2]>> = mu_nodes
            .par_iter()
            .map(|&mu| {
                let sp = lambda_of_mu(geom, mu)?;
                let opts = SolveOptions::default();
                let one = solve_interval(geom, &sp, IntervalId::One, &opts)?;
                let two = solve_interval(geom, &sp, IntervalId::Two, &opts)?;
                Ok([
                    (one.eigenfunction(), one.spectral_sample().rho_prime),
                    (two.eigenfunction(), two.spectral_sample().rho_prime),
                ])
            })
            .collect();
        let mut eigenfunctions = [Vec::new(), Vec::new()];
        let mut rho_values = [Vec::new(), Vec::new()];
        for r in solved {
            for (j, (ef, rho)) in r?.into_iter().enumerate() {
                eigenfunctions[j].push(ef);
                rho_values[j].push(rho);
            }
        }
        let lambda_nodes = mu_nodes
            .iter()
            .map(|&mu| lambda_of_mu(geom, mu).map(|sp| sp.lambda))
            .collect::<Result<_>>()?;
        Ok(Self {
            mu_nodes,
            lambda_nodes,
            lambda_weights,
            rho_values,
            lambda_max: lambda_of_mu(geom, mu_max)?.lambda,
            mu_max,
            geom: *geom,
            eigenfunctions,
        })
    }

    /// Grid whose truncation is `λ_max` rather than `μ_max`.
    pub fn with_lambda_max(geom: &IntervalPair, lambda_max: f64) -> Result<Self> {
        let mu_max = crate::operator::mu_of_lambda(geom, lambda_max)?.mu;
        Self::new(geom, mu_max)
    }

    pub fn len(&self) -> usize {
        self.mu_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_nodes.is_empty()
    }

    pub fn eigenfunction(&self, id: IntervalId, node: usize) -> &Eigenfunction {
        &self.eigenfunctions[slot(id)][node]
    }

    pub fn geometry(&self) -> &IntervalPair {
        &self.geom
    }
}

/// Fixed composite rule on an interval: uniform Gauss panels on the outer
/// part, `x = ∓u²` on log-graded panels near the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl IntervalRule {
    pub fn new(geom: &IntervalPair, id: IntervalId, mu_max: f64) -> Self {
        Self::with_cutoff(geom, id, mu_max, FORWARD_U_MIN)
    }

    pub fn with_cutoff(geom: &IntervalPair, id: IntervalId, mu_max: f64, u_min: f64) -> Self {
        let side = id.side();
        let e = geom.endpoint(id);
        let split = INNER_FRACTION * geom.inner_scale();
        let gl = GaussLegendre::sixteen();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let outer_panels = 32 + (4.0 * mu_max).ceil() as usize;
        let (lo, hi) = (e.min(side * split), e.max(side * split));
        let width = (hi - lo) / outer_panels as f64;
        for i in 0..outer_panels {
            for (x, w) in gl.mapped(lo + i as f64 * width, lo + (i + 1) as f64 * width) {
                nodes.push(x);
                weights.push(w);
            }
        }
        let per_decade = (3.0 * mu_max).ceil().max(8.0) as usize;
        for (a, b) in log_graded_panels(u_min, split.sqrt(), per_decade) {
            for (u, w) in gl.mapped(a, b) {
                nodes.push(side * u * u);
                weights.push(2.0 * u * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn forward_on_rule(
    grid: &SpectralGrid,
    id: IntervalId,
    rule: &IntervalRule,
    fvals: &[f64],
) -> Vec<f64> {
    grid.eigenfunctions[slot(id)]
        .par_iter()
        .map(|ef| {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .zip(fvals)
                .map(|((&x, &w), &f)| w * f * ef.value(x))
                .sum()
        })
        .collect()
}

/// `U_j f` at every node of the grid.
pub fn u_forward<F: Fn(f64) -> f64 + Sync>(
    geom: &IntervalPair,
    id: IntervalId,
    f: F,
    grid: &SpectralGrid,
) -> Result<Vec<f64>> {
    check_grid(geom, grid)?;
    let rule = IntervalRule::new(geom, id, grid.mu_max);
    let fvals: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
    finite(forward_on_rule(grid, id, &rule, &fvals), "u_forward")
}

/// `(U_j* F)(x) = Σ_k w_k ρ_j′(λ_k) φ_j(x, λ_k) F_k`.
pub fn u_adjoint(
    geom: &IntervalPair,
    id: IntervalId,
    samples: &[f64],
    grid: &SpectralGrid,
    x_points: &[f64],
) -> Result<Vec<f64>> {
    check_grid(geom, grid)?;
    if samples.len() != grid.len() {
        return Err(Error::Parameter(format!(
            "{} samples for a grid of {} nodes",
            samples.len(),
            grid.len()
        )));
    }
    let j = slot(id);
    let out = x_points
        .par_iter()
        .map(|&x| {
            (0..grid.len())
                .map(|k| {
                    grid.lambda_weights[k]
                        * grid.rho_values[j][k]
                        * grid.eigenfunctions[j][k].value(x)
                        * samples[k]
                })
                .sum()
        })
        .collect();
    finite(out, "u_adjoint")
}

fn check_grid(geom: &IntervalPair, grid: &SpectralGrid) -> Result<()> {
    if grid.geom != *geom {
        return Err(Error::Parameter(
            "spectral grid was built for another geometry".into(),
        ));
    }
    Ok(())
}

fn finite(v: Vec<f64>, what: &'static str) -> Result<Vec<f64>> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Isometry audit of `U_j` for one function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlancherelReport {
    /// `‖f‖²` on the interval.
    pub norm_f: f64,
    /// `Σ w_k ρ′_k |U f(λ_k)|²` up to `λ_max`.
    pub norm_transform: f64,
    /// Power-law extrapolation of the measure beyond `λ_max`, relative to `‖f‖²`.
    pub tail_estimate: f64,
    /// `1 - norm_transform / norm_f`.
    pub defect: f64,
}

pub fn plancherel<F: Fn(f64) -> f64 + Sync>(
    geom: &IntervalPair,
    id: IntervalId,
    f: F,
    grid: &SpectralGrid,
) -> Result<PlancherelReport> {
    let uf = u_forward(geom, id, &f, grid)?;
    let j = slot(id);
    let density: Vec<f64> = (0..grid.len())
        .map(|k| grid.rho_values[j][k] * uf[k] * uf[k])
        .collect();
    let norm_transform: f64 = density
        .iter()
        .zip(&grid.lambda_weights)
        .map(|(d, w)| d * w)
        .sum();
    let norm_f = integrate_on_interval(
        geom,
        id,
        |x| Complex64::new(f(x) * f(x), 0.0),
        &FhtOptions::default(),
    )
    .re;
    // power law through the last panel: density ≈ C λ^{-p}
    let tail_nodes = NODES_PER_PANEL.min(grid.len());
    let pts: Vec<(f64, f64)> = (grid.len() - tail_nodes..grid.len())
        .filter(|&k| density[k] > 0.0)
        .map(|k| (grid.lambda_nodes[k].ln(), density[k].ln()))
        .collect();
    let tail_estimate = if pts.len() >= 2 {
        let fit = crate::fht::log_linear_fit_points(&pts);
        let p = -fit.slope;
        if p > 1.0 {
            let lm = grid.lambda_max;
            fit.intercept.exp() * lm.powf(1.0 - p) / (p - 1.0) / norm_f
        } else {
            f64::INFINITY
        }
    } else {
        0.0
    };
    Ok(PlancherelReport {
        norm_f,
        norm_transform,
        tail_estimate,
        defect: 1.0 - norm_transform / norm_f,
    })
}

/// Relative `L²` defect of `U_j* U_j f - f` on the interval. The adjoint is
/// evaluated where the `μ` panels resolve the eigenfunctions, `|x| ≥ ADJOINT_U_MIN²`;
/// the mass of `f` closer to the origin is counted as error in full.
pub fn roundtrip_defect<F: Fn(f64) -> f64 + Sync>(
    geom: &IntervalPair,
    id: IntervalId,
    f: F,
    grid: &SpectralGrid,
) -> Result<f64> {
    let uf = u_forward(geom, id, &f, grid)?;
    let rule = IntervalRule::with_cutoff(geom, id, grid.mu_max, ADJOINT_U_MIN);
    let back = u_adjoint(geom, id, &uf, grid, &rule.nodes)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for ((w, b), &x) in rule.weights.iter().zip(&back).zip(&rule.nodes) {
        let fx = f(x);
        num += w * (b - fx).powi(2);
        den += w * fx * fx;
    }
    let cutoff = ADJOINT_U_MIN * ADJOINT_U_MIN;
    let deep = IntervalRule::new(geom, id, grid.mu_max);
    let unresolved = deep.integrate(|x| if x.abs() < cutoff { f(x).powi(2) } else { 0.0 });
    Ok(((num + unresolved) / (den + unresolved)).sqrt())
}

/// `‖U_j(L f) - λ U_j f‖ / ‖U_j(L f)‖` in `L²(dρ_j)` over the grid, for `f`
/// given with its first two derivatives.
pub fn l_diagonal_defect<F: Fn(f64) -> [f64; 3] + Sync>(
    geom: &IntervalPair,
    id: IntervalId,
    f: F,
    grid: &SpectralGrid,
) -> Result<f64> {
    let uf = u_forward(geom, id, |x| f(x)[0], grid)?;
    let ulf = u_forward(geom, id, |x| apply_l(geom, &f, x), grid)?;
    let j = slot(id);
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..grid.len() {
        let w = grid.lambda_weights[k] * grid.rho_values[j][k];
        num += w * (ulf[k] - grid.lambda_nodes[k] * uf[k]).powi(2);
        den += w * ulf[k] * ulf[k];
    }
    Ok((num / den).sqrt())
}

/// Source of `σ(λ)` in [`diagonalization_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaSource {
    /// `ν ρ₁′/ρ₂′` with `ν` from the quadrature route.
    Quadrature,
    /// `σ ≡ 0`, a control case.
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizationReport {
    pub max_defect: f64,
    pub nodes_used: usize,
    /// `(μ, relative defect)` at every node used.
    pub per_node: Vec<(f64, f64)>,
}

/// Compares `U₂(H₁ f)` with `σ(λ)·U₁ f` at the grid nodes with `μ` in `mu_window`,
/// skipping nodes where `|U₁ f|` is below the noise floor.
pub fn diagonalization_check<F: Fn(f64) -> f64 + Sync>(
    geom: &IntervalPair,
    f: F,
    grid: &SpectralGrid,
    mu_window: (f64, f64),
    sigma: SigmaSource,
) -> Result<DiagonalizationReport> {
    check_grid(geom, grid)?;
    let u1 = u_forward(geom, IntervalId::One, &f, grid)?;
    let rule2 = IntervalRule::new(geom, IntervalId::Two, grid.mu_max);
    let hf: Vec<f64> = rule2
        .nodes
        .par_iter()
        .map(|&y| fht_apply_with(&f, geom, IntervalId::One, y, &FhtOptions::default()))
        .collect::<Result<_>>()?;
    let u2 = forward_on_rule(grid, IntervalId::Two, &rule2, &hf);
    let peak = u1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let selected: Vec<usize> = (0..grid.len())
        .filter(|&k| {
            let mu = grid.mu_nodes[k];
            mu >= mu_window.0 && mu <= mu_window.1 && u1[k].abs() >= NOISE_FLOOR * peak
        })
        .collect();
    let defects: Vec<(f64, f64)> = selected
        .par_iter()
        .map(|&k| {
            let s = match sigma {
                SigmaSource::Quadrature => {
                    nu_sigma(geom, &lambda_of_mu(geom, grid.mu_nodes[k])?)?.sigma
                }
                SigmaSource::Zero => 0.0,
            };
            Ok((grid.mu_nodes[k], (u2[k] - s * u1[k]).abs() / u2[k].abs()))
        })
        .collect::<Result<_>>()?;
    Ok(DiagonalizationReport {
        max_defect: defects.iter().fold(0.0, |m: f64, v| m.max(v.1)),
        nodes_used: defects.len(),
        per_node: defects,
    })
}
