//! Analytic continuation of real solutions by local Taylor series.
//!
//! Between the singular points the coefficients of `(P y')' + (Q - λ) y = 0`
//! are polynomials, so each step re-expands the solution about the current
//! point by the coefficient recurrence and sums it at the step end. The
//! expansions are kept for dense output.

use crate::operator::{local_coefficients, IntervalPair};
use crate::{Error, Result};

const TERM_CAP: usize = 80;
const STOP: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Segment {
    pub x0: f64,
    pub h: f64,
    pub c: Vec<f64>,
}

impl Segment {
    /// Value, first and second derivative.
    pub fn eval_full(&self, x: f64) -> [f64; 3] {
        let t = x - self.x0;
        let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
        for (n, &cn) in self.c.iter().enumerate().rev() {
            let nf = n as f64;
            v = v * t + cn;
            if n > 0 {
                d = d * t + nf * cn;
            }
            if n > 1 {
                dd = dd * t + nf * (nf - 1.0) * cn;
            }
        }
        [v, d, dd]
    }

    pub fn eval(&self, x: f64) -> (f64, f64) {
        let t = x - self.x0;
        let mut v = 0.0;
        let mut d = 0.0;
        for (n, &cn) in self.c.iter().enumerate().rev() {
            v = v * t + cn;
            if n > 0 {
                d = d * t + n as f64 * cn;
            }
        }
        (v, d)
    }
}

/// Taylor coefficients at `x0` of the solution with `y(x0) = y0`, `y'(x0) = y1`,
/// summed to convergence for step `h`; `None` if the term cap is reached.
fn local_series(p: &[f64; 5], q: &[f64; 3], y0: f64, y1: f64, h: f64) -> Option<Vec<f64>> {
    let mut c = Vec::with_capacity(TERM_CAP);
    c.push(y0);
    c.push(y1);
    let mut scale = y0.abs().max((y1 * h).abs());
    let mut quiet = 0;
    for n in 2..TERM_CAP {
        let mut sum = 0.0;
        for (k, &pk) in p.iter().enumerate().skip(1) {
            if k <= n {
                let m = n - k;
                let mf = m as f64;
                sum += pk * mf * (mf + k as f64 - 1.0) * c[m];
            }
        }
        for (j, &qj) in q.iter().enumerate() {
            if n >= 2 + j {
                sum += qj * c[n - 2 - j];
            }
        }
        let nf = n as f64;
        let cn = -sum / (p[0] * nf * (nf - 1.0));
        c.push(cn);
        let mag = (cn * h.powi(n as i32)).abs();
        scale = scale.max(mag);
        if mag <= STOP * scale {
            quiet += 1;
            if quiet == 2 {
                return Some(c);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// Continues `(y, y')` from `x_start` to `x_end`, returning the segments.
pub(crate) fn continue_solution(
    geom: &IntervalPair,
    lambda: f64,
    x_start: f64,
    y: f64,
    dy: f64,
    x_end: f64,
) -> Result<Vec<Segment>> {
    let dir = (x_end - x_start).signum();
    let (mut x, mut y, mut dy) = (x_start, y, dy);
    let mut segments = Vec::new();
    while (x_end - x) * dir > 0.0 {
        let (p, q) = local_coefficients(geom, lambda, x);
        let dist = (x - geom.a1())
            .abs()
            .min(x.abs())
            .min((x - geom.a2()).abs());
        let k_local = ((q[0]).abs() / p[0].abs()).sqrt();
        let mut h = (0.3 * dist).min(2.0 / k_local.max(1e-300));
        let remaining = (x_end - x).abs();
        if h >= remaining {
            h = remaining;
        } else if h > 0.6 * remaining {
            // avoid a sliver as the final step
            h = 0.5 * remaining;
        }
        let mut h = h * dir;
        let c = loop {
            if let Some(c) = local_series(&p, &q, y, dy, h) {
                break c;
            }
            h *= 0.5;
            if h.abs() < 1e-14 * dist.max(1e-300) {
                return Err(Error::NonConvergence {
                    routine: "Taylor continuation",
                    terms: TERM_CAP,
                });
            }
        };
        let seg = Segment { x0: x, h, c };
        let x_new = if h.abs() >= remaining { x_end } else { x + h };
        let (ny, ndy) = seg.eval(x_new);
        if !ny.is_finite() || !ndy.is_finite() {
            return Err(Error::NonFinite("Taylor continuation"));
        }
        segments.push(seg);
        x = x_new;
        y = ny;
        dy = ndy;
    }
    Ok(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_polynomial_solution_structure() {
        // Away from singular points the continuation must reproduce itself:
        // forward then backward returns to the initial data.
        let geom = IntervalPair::new(-1.0, 2.0).unwrap();
        let lambda = 7.0;
        let seg = continue_solution(&geom, lambda, -0.9, 0.3, -1.2, -0.2).unwrap();
        let last = seg.last().unwrap();
        let (y, dy) = last.eval(-0.2);
        let back = continue_solution(&geom, lambda, -0.2, y, dy, -0.9).unwrap();
        let (y0, dy0) = back.last().unwrap().eval(-0.9);
        assert!((y0 - 0.3).abs() < 1e-12, "{y0}");
        assert!((dy0 + 1.2).abs() < 1e-11, "{dy0}");
    }
}
