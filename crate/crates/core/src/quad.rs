//! Gauss–Legendre rules and the panel layouts built from them.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` points; nodes by Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn sixteen() -> &'static Self {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| Self::new(16))
    }

    /// Shared 8-point rule, used as the coarse half of adaptive error estimates.
    pub fn eight() -> &'static Self {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| Self::new(8))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

/// `P_n(x)` and `P_n'(x)`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = if (1.0 - x * x).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * x.powi(n as i32 + 1)
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, d)
}

/// Adaptive bisection with a 16-point panel checked against its two halves.
///
/// Recursion stops when the halves agree with the whole panel to
/// `abs_tol + rel_tol·|value|` or at `max_depth`.
pub fn adaptive_complex<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Complex64 {
    let rule = GaussLegendre::sixteen();
    let whole = rule.integrate_complex(a, b, &mut *f);
    refine(f, rule, a, b, whole, abs_tol, rel_tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: Complex64,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let left = rule.integrate_complex(a, m, &mut *f);
    let right = rule.integrate_complex(m, b, &mut *f);
    let sum = left + right;
    if depth == 0 || (sum - whole).norm() <= abs_tol.max(rel_tol * sum.norm()) {
        return sum;
    }
    refine(f, rule, a, m, left, 0.5 * abs_tol, rel_tol, depth - 1)
        + refine(f, rule, m, b, right, 0.5 * abs_tol, rel_tol, depth - 1)
}

/// Real-valued front end of [`adaptive_complex`].
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> f64 {
    adaptive_complex(
        &mut |x| Complex64::new(f(x), 0.0),
        a,
        b,
        abs_tol,
        rel_tol,
        max_depth,
    )
    .re
}

/// Geometric panels covering `[lo, hi]` with `per_decade` panels per factor of ten.
pub fn log_graded_panels(lo: f64, hi: f64, per_decade: usize) -> Vec<(f64, f64)> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0);
    let decades = (hi / lo).log10();
    let count = ((decades * per_decade as f64).ceil() as usize).max(1);
    let ratio = (hi / lo).powf(1.0 / count as f64);
    let mut panels = Vec::with_capacity(count);
    let mut left = lo;
    for i in 0..count {
        let right = if i + 1 == count { hi } else { left * ratio };
        panels.push((left, right));
        left = right;
    }
    panels
}
