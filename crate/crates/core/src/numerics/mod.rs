//! Shared numeric substrate.

mod bernoulli;
mod polylog;
mod quadrature;
mod summation;
mod zeta;

pub use bernoulli::{bernoulli_even, MAX_BERNOULLI_INDEX};
pub use polylog::polylog_exp;
pub use quadrature::adaptive_integrate;
pub use summation::{compensated_sum, NeumaierSum};
pub use zeta::{zeta, zeta_even_closed_form, zeta_int};

use crate::{Error, Result};

/// Accuracy targets shared by every series and integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    abs_tol: f64,
    max_terms: usize,
    quad_tol: f64,
}

impl Precision {
    pub const DEFAULT_ABS_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 1_000_000;
    pub const DEFAULT_QUAD_TOL: f64 = 1e-11;

    pub fn new(abs_tol: f64, max_terms: usize, quad_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if !(quad_tol > 0.0 && quad_tol.is_finite()) {
            return Err(Error::Domain(format!(
                "quad_tol must be positive, got {quad_tol}"
            )));
        }
        if max_terms < 8 {
            return Err(Error::Domain(format!(
                "max_terms must be at least 8, got {max_terms}"
            )));
        }
        Ok(Self {
            abs_tol,
            max_terms,
            quad_tol,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            abs_tol: Self::DEFAULT_ABS_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
            quad_tol: Self::DEFAULT_QUAD_TOL,
        }
    }
}

/// A computed value together with a claimed absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub err_bound: f64,
    pub terms_used: usize,
}

impl<T> EvalResult<T> {
    pub fn new(value: T, err_bound: f64, terms_used: usize) -> Self {
        debug_assert!(err_bound >= 0.0 || err_bound.is_nan());
        Self {
            value,
            err_bound,
            terms_used,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> EvalResult<U> {
        EvalResult {
            value: f(self.value),
            err_bound: self.err_bound,
            terms_used: self.terms_used,
        }
    }
}

/// Smallest `K` with `K^{1-p}/(p-1) <= bound`, i.e. the p-series cutoff whose
/// integral tail bound meets `bound`.
pub(crate) fn p_series_cutoff(p: f64, bound: f64) -> f64 {
    ((p - 1.0) * bound).recip().powf((p - 1.0).recip()).ceil()
}
