//! Numerical diagonalization of the finite Hilbert transform acting from
//! `L²(a1, 0)` to `L²(0, a2)`.
//!
//! The transform commutes with the singular Sturm–Liouville operator
//! `L f = (P f')' + Q f`, `P(x) = (x - a1) x² (x - a2)`. Its eigenfunctions
//! φ₁, φ₂ (bounded at the outer endpoints) and spectral densities ρ₁′, ρ₂′
//! turn `H₁` into multiplication by `σ(λ) = ν(λ) ρ₁′/ρ₂′`, where
//! `H₁ φ₁ = ν φ₂`.
//!
//! Module map:
//!
//! * [`specfun`]: complex Γ, ψ, ₂F₁ (with the logarithmic `c = 1` partner), J₀/Y₀.
//! * [`operator`]: geometry, coefficient polynomials, Frobenius series, Liouville map.
//! * [`solve`]: Taylor continuation, connection coefficients, m-function, ν and σ.
//! * [`symmetric`]: closed forms for `a2 = -a1`.
//! * [`fht`]: FHT quadrature, half-line identity, commutation check, Galerkin SVD.
//! * [`transform`]: the spectral transforms `U₁`, `U₂` and their checks.
//! * [`asymptotics`]: WKB eigenfunctions, inner matching, asymptotic ρ′ and σ.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
mod error;
pub mod fht;
pub mod operator;
pub mod quad;
pub mod solve;
pub mod specfun;
pub mod symmetric;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operator::{IntervalId, IntervalPair, SpectralPoint};
