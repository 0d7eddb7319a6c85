//! Numerical verification of the Mellin-transform derivation of the Riemann
//! zeta functional equation.
//!
//! The derivation starts from the Mellin representation of the fractional
//! part ρ(x),
//!
//! ```text
//! ζ(s)/(-s) = ∫₀^∞ x^{-s-1} ρ(x) dx,            0 < ℜs < 1,
//! ```
//!
//! telescopes it with ρ(2x), expands ρ(x) − ρ(2x) in a sine series, swaps sum
//! and integral for -1 < ℜs < 0 and sums the term-wise integrals in closed
//! form, which yields ζ(s) = χ(s) ζ(1 − s). Each equality in that chain is
//! evaluated independently here and compared against zeta oracles that never
//! use the functional equation.

pub mod cli;
pub mod error;
pub mod fracfourier;
pub mod funceq;
pub mod mellin;
pub mod quadrature;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};

/// A complex number (re, im) carrying s, ζ(s), Γ(z), χ(s), ...
pub type ComplexValue = num_complex::Complex64;
