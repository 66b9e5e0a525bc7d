use thiserror::Error;

use crate::IntervalId;

/// Errors produced by the spectral pipeline and its special functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma/digamma pole at non-positive integer argument {0}")]
    Pole(f64),
    #[error("{routine} did not converge within {terms} terms")]
    NonConvergence { routine: &'static str, terms: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid geometry: need a1 < 0 < a2, got a1 = {a1}, a2 = {a2}")]
    Geometry { a1: f64, a2: f64 },
    #[error("lambda = {lambda} lies below the continuous-spectrum threshold {lambda_min}")]
    BelowThreshold { lambda: f64, lambda_min: f64 },
    #[error("{what}: x = {x} outside the admissible domain")]
    Domain { what: &'static str, x: f64 },
    #[error("indicial exponents collide at mu = 0 (threshold point excluded)")]
    ExponentCollision,
    #[error("ill-conditioned connection fit on interval {interval:?} at x_m = {x_m} (cond = {cond:.3e}); move the matching point")]
    MatchingPoint {
        interval: IntervalId,
        x_m: f64,
        cond: f64,
    },
    #[error("accuracy check failed for {what}: deviation {deviation:.3e}")]
    Accuracy { what: &'static str, deviation: f64 },
    #[error("routes disagree for {what} at lambda = {lambda}: {a:.6e} vs {b:.6e}")]
    Consistency {
        what: &'static str,
        lambda: f64,
        a: f64,
        b: f64,
    },
    #[error("principal-value FHT not supported: y = {0} lies inside the source interval")]
    PrincipalValue(f64),
    #[error("tail truncation too large: T = {t} must be at least 10 y = {min}")]
    TailTooLarge { t: f64, min: f64 },
    #[error("matching window is empty at lambda = {0}")]
    EmptyWindow(f64),
    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
