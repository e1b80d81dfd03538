//! Circular, elliptic and hyperbolic Clausen functions of CL type.
//!
//! The three families share one integral recursion and differ only in their
//! logarithmic kernel (`log sin`, `log θ₁`, `log sinh`) and hence in their
//! boundary constants. The crate is organised bottom-up:
//!
//! - [`numerics`]: compensated summation, Bernoulli numbers, integer zeta
//!   values, polylogarithm expansion and adaptive Gauss–Kronrod quadrature.
//! - [`theta`]: Jacobi θ₁ on the imaginary τ axis with S-transform reduction.
//! - [`kernel`]: the normalised elliptic kernel and its Taylor coefficients,
//!   computed both by fitting and by a Lambert series.
//! - [`clausen`]: `Cl_n`, `ECl_n` and `HCl_n`.
//! - [`recursion`]: quadrature lifts that rebuild each level from the one below.
//! - [`boundary`]: the odd boundary constants `B_{2m+1}(it)` and their limits.
//!
//! All evaluation routines are pure functions of their arguments.

pub mod boundary;
pub mod clausen;
pub mod cli;
mod error;
pub mod kernel;
pub mod numerics;
pub mod recursion;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::{EvalResult, Precision};
pub use theta::Modulus;
