//! Jacobi θ₁ on the imaginary τ axis.
//!
//! Conventions: `τ = i·t` with `t > 0`, nome `q = e^{-πt}`, and the period-1
//! argument `v`, so that
//!
//! ```text
//! θ₁(v | it) = 2 Σ_{n≥0} (-1)^n q^{(n+1/2)²} sin((2n+1)πv)
//! ```
//!
//! vanishes at the integers. For `t < 0.5` evaluation goes through the
//! modular S-transform
//!
//! ```text
//! θ₁(-iv/t | i/t) = -i √t e^{πv²/t} θ₁(v | it)
//! ```
//!
//! so the series is always summed with a nome of at most `e^{-π/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{EvalResult, NeumaierSum, Precision};
use crate::{Error, Result};

/// Below this imaginary part evaluations route through the S-transform.
pub const S_TRANSFORM_THRESHOLD: f64 = 0.5;

// exp() of anything larger overflows, with some headroom for the prefactors
const MAX_EXPONENT: f64 = 700.0;

/// A point `τ = i·t` on the imaginary axis together with its nome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    t: f64,
    q: f64,
}

impl Modulus {
    pub fn new(t: f64) -> Result<Self> {
        let q = nome(t)?;
        Ok(Self { t, q })
    }

    /// Imaginary part of τ.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// The nome `e^{-πt}`. May underflow to zero for very large `t`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `q²` computed directly as `e^{-2πt}`.
    pub fn q2(&self) -> f64 {
        (-2.0 * PI * self.t).exp()
    }

    /// The S-dual modulus `i/t`.
    pub fn dual(&self) -> Self {
        Self::new(self.t.recip()).expect("reciprocal of a positive finite t")
    }

    fn needs_s_transform(&self) -> bool {
        self.t < S_TRANSFORM_THRESHOLD
    }
}

/// Nome `q = e^{-πt}` for `τ = it`.
pub fn nome(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "imaginary part of tau must be positive and finite, got {t}"
        )));
    }
    Ok((-PI * t).exp())
}

/// Shift `Re v` into `[-1/2, 1/2)`; returns the reduced argument and the sign
/// `(-1)^k` picked up from `θ₁(v + 1) = -θ₁(v)`.
fn reduce_period(v: Complex64) -> (Complex64, f64) {
    let k = (v.re + 0.5).floor();
    let sign = if k.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    (Complex64::new(v.re - k, v.im), sign)
}

struct Partial {
    value: Complex64,
    err: f64,
    terms: usize,
}

/// `θ₁(v|it) / q^{1/4} = 2 Σ (-1)^n q^{n(n+1)} sin((2n+1)πv)` summed directly
/// at the given `t`, without period reduction. The tail is dropped once it is
/// below a quarter ulp of the accumulated magnitude.
fn scaled_series(v: Complex64, t: f64, max_terms: usize) -> Result<Partial> {
    let im = v.im.abs();
    let mut re = NeumaierSum::new();
    let mut imag = NeumaierSum::new();
    let mut magnitude = 0.0;
    for n in 0..max_terms {
        let nf = n as f64;
        let growth = (2.0 * nf + 1.0) * PI * im;
        if growth > MAX_EXPONENT {
            return Err(Error::Overflow(format!(
                "theta series term {n} grows like e^{growth:.0} (|Im v| = {im})"
            )));
        }
        let weight = 2.0 * (-PI * t * nf * (nf + 1.0)).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = (Complex64::new(0.0, 0.0) + (2.0 * nf + 1.0) * PI * v).sin() * (sign * weight);
        re += term.re;
        imag += term.im;
        magnitude += weight * growth.exp();

        // bound on the next term and ratio of consecutive bounds, both decreasing
        let next = 2.0 * (-PI * t * (nf + 1.0) * (nf + 2.0) + (2.0 * nf + 3.0) * PI * im).exp();
        let ratio = (-2.0 * PI * t * (nf + 2.0) + 2.0 * PI * im).exp();
        if ratio < 1.0 {
            let tail = next / (1.0 - ratio);
            if tail <= 0.25 * f64::EPSILON * magnitude {
                return Ok(Partial {
                    value: Complex64::new(re.value(), imag.value()),
                    err: tail + 4.0 * f64::EPSILON * magnitude,
                    terms: n + 1,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        max_terms,
        tail_bound: f64::NAN,
    })
}

/// `Σ_{n≥0} (-1)^n (2n+1) q^{n(n+1)}`, which equals `Π_{n≥1} (1 - q^{2n})³`.
fn eta_cubed_series(t: f64, max_terms: usize) -> Result<Partial> {
    let mut acc = NeumaierSum::new();
    for n in 0..max_terms {
        let nf = n as f64;
        let term = (2.0 * nf + 1.0) * (-PI * t * nf * (nf + 1.0)).exp();
        acc += if n % 2 == 0 { term } else { -term };
        let next = (2.0 * nf + 3.0) * (-PI * t * (nf + 1.0) * (nf + 2.0)).exp();
        // alternating with decreasing magnitude once past the first few terms
        if next <= 0.25 * f64::EPSILON * acc.abs_sum() {
            return Ok(Partial {
                value: Complex64::new(acc.value(), 0.0),
                err: next + 4.0 * f64::EPSILON * acc.abs_sum(),
                terms: n + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        max_terms,
        tail_bound: f64::NAN,
    })
}

/// `Π_{n≥1} (1 - q^{2n})³` at `t` by its series, with an error bound.
pub(crate) fn eta_cubed(t: f64, max_terms: usize) -> Result<(f64, f64)> {
    eta_cubed_series(t, max_terms).map(|p| (p.value.re, p.err))
}

/// `θ₁(v | it)` by the direct q-series at the given modulus, with period
/// reduction but without S-transform routing.
fn theta1_direct(v: Complex64, t: f64, max_terms: usize) -> Result<EvalResult<Complex64>> {
    let (v, sign) = reduce_period(v);
    let s = scaled_series(v, t, max_terms)?;
    let pre = (-0.25 * PI * t).exp();
    Ok(EvalResult::new(
        s.value * (sign * pre),
        s.err * pre,
        s.terms,
    ))
}

/// The odd Jacobi theta function `θ₁(v | it)` for complex `v`.
///
/// The real part of `v` is first reduced modulo 1. For `t < 0.5` the value is
/// obtained from the dual modulus `i/t`.
pub fn theta1(v: Complex64, modulus: &Modulus, prec: &Precision) -> Result<EvalResult<Complex64>> {
    check_finite(v)?;
    if !modulus.needs_s_transform() {
        return theta1_direct(v, modulus.t, prec.max_terms());
    }
    let t = modulus.t;
    let (v, sign) = reduce_period(v);
    let w = Complex64::new(0.0, -1.0) * v / t;
    let (w, sign_w) = reduce_period(w);
    let dual = scaled_series(w, t.recip(), prec.max_terms())?;
    // θ₁(v|it) = i t^{-1/2} e^{-πv²/t} e^{-π/(4t)} · scaled(w)
    let exponent = -PI * v * v / t - PI / (4.0 * t);
    if exponent.re > MAX_EXPONENT {
        return Err(Error::Overflow(format!(
            "S-transform prefactor e^{:.0}",
            exponent.re
        )));
    }
    let factor = Complex64::new(0.0, sign * sign_w) * exponent.exp() / t.sqrt();
    Ok(EvalResult::new(
        dual.value * factor,
        dual.err * factor.norm(),
        dual.terms,
    ))
}

fn check_finite(v: Complex64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "theta argument must be finite, got {v}"
        )))
    }
}

/// `θ₁'(0 | it) = 2π Σ (-1)^n (2n+1) q^{(n+1/2)²}`.
///
/// For `t < 0.5` uses `θ₁'(0|it) = t^{-3/2} θ₁'(0|i/t)`.
pub fn theta1_prime0(modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    let (t, scale) = if modulus.needs_s_transform() {
        (modulus.t.recip(), modulus.t.powf(-1.5))
    } else {
        (modulus.t, 1.0)
    };
    let s = eta_cubed_series(t, prec.max_terms())?;
    let pre = 2.0 * PI * (-0.25 * PI * t).exp() * scale;
    Ok(EvalResult::new(s.value.re * pre, s.err * pre, s.terms))
}

/// `Π_{n≥1} (1 - q^{2n})³` by the product, truncated once the factors are
/// within rounding of 1. Independent of the series routes above.
pub fn eta_cubed_product(modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    let q2 = modulus.q2();
    let mut prod = 1.0;
    let mut q2n = q2;
    for n in 1..=prec.max_terms() {
        prod *= (1.0 - q2n).powi(3);
        q2n *= q2;
        if 3.0 * q2n / (1.0 - q2) <= 0.25 * f64::EPSILON {
            return Ok(EvalResult::new(
                prod,
                4.0 * n as f64 * f64::EPSILON * prod,
                n,
            ));
        }
    }
    Err(Error::NonConvergence {
        max_terms: prec.max_terms(),
        tail_bound: 3.0 * q2n / (1.0 - q2),
    })
}

/// `θ₁'(0|it)` from the product `2π q^{1/4} Π (1 - q^{2n})³`.
pub fn theta1_prime0_product(modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    let p = eta_cubed_product(modulus, prec)?;
    let pre = 2.0 * PI * (-0.25 * PI * modulus.t).exp();
    Ok(EvalResult::new(
        p.value * pre,
        p.err_bound * pre,
        p.terms_used,
    ))
}

/// `θ₁(v|it)` from the Jacobi triple product
/// `2 q^{1/4} sin(πv) Π (1 - q^{2n})(1 - q^{2n} e^{2πiv})(1 - q^{2n} e^{-2πiv})`.
pub fn theta1_product(
    v: Complex64,
    modulus: &Modulus,
    prec: &Precision,
) -> Result<EvalResult<Complex64>> {
    check_finite(v)?;
    let (v, sign) = reduce_period(v);
    let q2 = modulus.q2();
    let e = (Complex64::new(0.0, 2.0 * PI) * v).exp();
    let e_inv = e.inv();
    let spread = 1.0 + e.norm() + e_inv.norm();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut q2n = q2;
    for n in 1..=prec.max_terms() {
        prod *= (1.0 - q2n) * (1.0 - q2n * e) * (1.0 - q2n * e_inv);
        q2n *= q2;
        if q2n * spread / (1.0 - q2) <= 0.25 * f64::EPSILON {
            let value = (PI * v).sin() * prod * (2.0 * sign * (-0.25 * PI * modulus.t).exp());
            return Ok(EvalResult::new(
                value,
                8.0 * n as f64 * f64::EPSILON * value.norm(),
                n,
            ));
        }
    }
    Err(Error::NonConvergence {
        max_terms: prec.max_terms(),
        tail_bound: q2n * spread / (1.0 - q2),
    })
}

/// `θ̂₁(v|it) = θ₁(v|it) / (q^{1/4} Π (1 - q^{2n})³)` for complex `v`.
///
/// This normalisation tends to `2 sin(πv)` as `t → ∞` and satisfies
/// `θ̂₁(v|it) = i t e^{-πv²/t} θ̂₁(-iv/t | i/t)`.
pub(crate) fn theta1_normalized_complex(
    v: Complex64,
    modulus: &Modulus,
    prec: &Precision,
) -> Result<EvalResult<Complex64>> {
    check_finite(v)?;
    let (v, sign) = reduce_period(v);
    if !modulus.needs_s_transform() {
        let s = scaled_series(v, modulus.t, prec.max_terms())?;
        let d = eta_cubed_series(modulus.t, prec.max_terms())?;
        let value = s.value * sign / d.value.re;
        let err = s.err / d.value.re + value.norm() * d.err / d.value.re;
        return Ok(EvalResult::new(value, err, s.terms + d.terms));
    }
    let t = modulus.t;
    let w = Complex64::new(0.0, -1.0) * v / t;
    let (w, sign_w) = reduce_period(w);
    let s = scaled_series(w, t.recip(), prec.max_terms())?;
    let d = eta_cubed_series(t.recip(), prec.max_terms())?;
    let exponent = -PI * v * v / t;
    let factor = Complex64::new(0.0, t * sign * sign_w) * exponent.exp() / d.value.re;
    let value = s.value * factor;
    let err = s.err * factor.norm() + value.norm() * d.err / d.value.re;
    Ok(EvalResult::new(value, err, s.terms + d.terms))
}

/// `θ̂₁(v|it)` for real `v`; tends to `2 sin(πv)` as `t → ∞`.
pub fn theta1_normalized(v: f64, modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    theta1_normalized_complex(Complex64::new(v, 0.0), modulus, prec).map(|r| r.map(|z| z.re))
}

/// Residual of the modular S-transform,
/// `|θ₁(v/(it) | i/t) - (-i) √t e^{πi v²/(it)} θ₁(v | it)|`,
/// with both sides summed directly at their own modulus.
pub fn s_transform_residual(v: f64, modulus: &Modulus, prec: &Precision) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Domain(format!(
            "theta argument must be finite, got {v}"
        )));
    }
    let t = modulus.t;
    let lhs = theta1_direct(Complex64::new(0.0, -v / t), t.recip(), prec.max_terms())?;
    let rhs = theta1_direct(Complex64::new(v, 0.0), t, prec.max_terms())?;
    let factor = Complex64::new(0.0, -t.sqrt()) * (PI * v * v / t).exp();
    Ok((lhs.value - factor * rhs.value).norm())
}
