use super::{eval_ppp, eval_pq, IntervalPair};
use crate::quad::adaptive;
use crate::{Error, Result};

const TOL: f64 = 1e-15;

/// Liouville variable `t(x) = ∫ ds/√(-P(s))` measured from the regular endpoint.
///
/// On `(a1, 0)` the integral runs from `a1` to `x`; on `(0, a2)` from `x` to
/// `a2`, so `t` is increasing towards the origin on the first interval and
/// decreasing away from it on the second. Near the regular endpoint the
/// substitution `s = a_j ∓ u²` removes the square-root singularity, and near
/// the origin `s = ±e^v` removes the `1/|s|` growth.
pub fn liouville_map(geom: &IntervalPair, x: f64) -> Result<f64> {
    let id = geom.locate(x).ok_or(Error::Domain {
        what: "liouville_map",
        x,
    })?;
    let e = geom.endpoint(id);
    let other = geom.endpoint(id.other());
    let side = id.side();
    // -P(s) = |s - e| s² |s - other|
    let mid = 0.5 * e;
    let near_end = |u: f64| {
        let s = e - side * u * u;
        2.0 / (s.abs() * (s - other).abs().sqrt())
    };
    let near_zero = |v: f64| {
        let s = side * v.exp();
        1.0 / ((s - e).abs() * (s - other).abs()).sqrt()
    };
    let t = if (x - e).abs() <= (mid - e).abs() {
        adaptive(near_end, 0.0, (x - e).abs().sqrt(), 0.0, TOL, 50)
    } else {
        adaptive(near_end, 0.0, (mid - e).abs().sqrt(), 0.0, TOL, 50)
            + adaptive(near_zero, x.abs().ln(), mid.abs().ln(), 0.0, TOL, 50)
    };
    Ok(t)
}

/// Potential of the Liouville normal form `-F'' + q F = λ F`, as a function of `x`:
/// `q = Q + (P')²/(16 P) - P''/4`.
pub fn potential_q(geom: &IntervalPair, x: f64) -> Result<f64> {
    if geom.locate(x).is_none() {
        return Err(Error::Domain {
            what: "potential_q",
            x,
        });
    }
    let (p, pp, q) = eval_pq(geom, x);
    Ok(q + pp * pp / (16.0 * p) - 0.25 * eval_ppp(geom, x))
}

/// Closed form of the Liouville variable on either interval, used as a test oracle.
#[cfg(test)]
pub(crate) fn liouville_closed_form(geom: &IntervalPair, x: f64) -> f64 {
    let (a1, a2) = (geom.a1(), geom.a2());
    let c = -a1 * a2;
    let b = a1 + a2;
    let r = (-x * x + b * x + c).sqrt();
    let sc = c.sqrt();
    let f = |x: f64, r: f64| ((2.0 * c + b * x + 2.0 * sc * r) / x.abs()).ln() / sc;
    let e = if x < 0.0 { a1 } else { a2 };
    f(x, r) - f(e, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_closed_form() {
        for (a1, a2) in [(-1.0, 1.0), (-1.0, 2.0), (-2.5, 0.7)] {
            let geom = IntervalPair::new(a1, a2).unwrap();
            for frac in [0.999, 0.7, 0.3, 0.05, 1e-4] {
                for x in [a1 * frac, a2 * frac] {
                    let t = liouville_map(&geom, x).unwrap();
                    let want = liouville_closed_form(&geom, x);
                    assert!(
                        (t - want).abs() < 1e-12 * want.max(1.0),
                        "x={x}: {t} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn endpoint_and_origin_limits() {
        let geom = IntervalPair::new(-1.0, 1.0).unwrap();
        assert!(liouville_map(&geom, -1.0 + 1e-14).unwrap() < 1e-6);
        let x: f64 = -1e-6;
        let t = liouville_map(&geom, x).unwrap();
        assert!((t + (-x).ln() - 2f64.ln()).abs() < 1e-5);
        assert!(liouville_map(&geom, -1.5).is_err());
        assert!(liouville_map(&geom, 0.0).is_err());
    }

    #[test]
    fn derivative_is_inverse_sqrt_of_minus_p() {
        let geom = IntervalPair::new(-1.0, 2.0).unwrap();
        for x in [-0.8f64, -0.3, -0.02] {
            let h = 1e-5 * x.abs();
            let fd = (liouville_map(&geom, x + h).unwrap() - liouville_map(&geom, x - h).unwrap())
                / (2.0 * h);
            let want = 1.0 / (-eval_pq(&geom, x).0).sqrt();
            assert!((fd - want).abs() < 1e-9 * want, "x={x}: {fd} vs {want}");
        }
    }

    #[test]
    fn potential_tends_to_threshold() {
        let geom = IntervalPair::new(-1.0, 1.0).unwrap();
        assert!((potential_q(&geom, -1e-4).unwrap() - 0.25).abs() < 1e-3);
        let geom = IntervalPair::new(-1.0, 2.0).unwrap();
        assert!((potential_q(&geom, 1e-6).unwrap() - geom.lambda_min()).abs() < 1e-4);
        assert!(potential_q(&geom, 3.0).is_err());
    }

    #[test]
    fn potential_is_even_in_symmetric_geometry() {
        let geom = IntervalPair::symmetric(1.0).unwrap();
        let a = potential_q(&geom, -0.3).unwrap();
        let b = potential_q(&geom, 0.3).unwrap();
        assert!((a - b).abs() < 1e-14);
        let ta = liouville_map(&geom, -0.3).unwrap();
        let tb = liouville_map(&geom, 0.3).unwrap();
        assert!((ta - tb).abs() < 1e-13);
    }
}
