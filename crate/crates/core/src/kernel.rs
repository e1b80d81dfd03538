//! Logarithmic kernels and the Taylor coefficients of the elliptic kernel.
//!
//! All three kernels share the normalisation that makes them vanish at the
//! origin:
//!
//! ```text
//! circular:    -2 log(sin(πv) / (πv))
//! elliptic:    -2 log(θ₁(v|it) / (θ₁'(0|it) v))      = Σ_{m≥1} c_{2m}(t) v^{2m}
//! hyperbolic:  -2 log(sinh(πv) / (πv))
//! ```
//!
//! The coefficients `c_{2m}(t)` are available by two independent routes: a
//! least-squares fit to kernel samples on the circle `|v| = 0.1`, and the
//! Lambert series
//!
//! ```text
//! c_{2m}(t) = 2ζ(2m)/m + 4 (-1)^m (2π)^{2m}/(2m)! Σ_{k≥1} k^{2m-1} q^{2k}/(1-q^{2k})
//! ```
//!
//! obtained by expanding the logarithm of the triple product.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::numerics::{zeta, EvalResult, NeumaierSum, Precision};
use crate::theta::{eta_cubed, Modulus, S_TRANSFORM_THRESHOLD};
use crate::{Error, Result};

/// Largest number of coefficients either route will produce.
pub const MAX_COEFFS: usize = 8;

const FIT_RADIUS: f64 = 0.1;
const FIT_NODES: usize = 64;
const FIT_GUARD: usize = 2;

/// How a set of kernel coefficients was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Taylor,
    Lambert,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Taylor => "taylor",
            Route::Lambert => "lambert",
        }
    }
}

/// `c_{2m}(t)` for `m = 1..=coeffs.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoefficients {
    pub t: f64,
    pub route: Route,
    /// `coeffs[m - 1] = c_{2m}(t)`.
    pub coeffs: Vec<f64>,
    /// Maximum absolute residual of the fit; `None` for the Lambert route.
    pub fit_residual: Option<f64>,
}

impl KernelCoefficients {
    /// `c_{2m}`, if computed.
    pub fn c(&self, m: usize) -> Option<f64> {
        m.checked_sub(1).and_then(|i| self.coeffs.get(i).copied())
    }
}

/// `sin z - z` without cancellation for small `|z|`.
fn sin_minus_id(z: Complex64) -> Complex64 {
    if z.norm() >= 1.0 {
        return z.sin() - z;
    }
    let z2 = z * z;
    let mut term = -z * z2 / 6.0;
    let mut acc = term;
    let mut k = 3.0;
    loop {
        term = -term * z2 / ((k + 1.0) * (k + 2.0));
        acc += term;
        k += 2.0;
        if term.norm() <= 0.25 * f64::EPSILON * acc.norm() {
            return acc;
        }
    }
}

fn sinh_minus_id(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return x.sinh() - x;
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut acc = term;
    let mut k = 3.0;
    loop {
        term = term * x2 / ((k + 1.0) * (k + 2.0));
        acc += term;
        k += 2.0;
        if term.abs() <= 0.25 * f64::EPSILON * acc.abs() {
            return acc;
        }
    }
}

/// `log(1 + z)` for complex `z`, accurate for small `|z|`.
fn ln_1p(z: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * z.re + z.re * z.re + z.im * z.im).ln_1p();
    Complex64::new(re, z.im.atan2(1.0 + z.re))
}

/// The elliptic kernel at complex `v`, returning the value and an absolute
/// error estimate.
///
/// `θ₁(v)/(θ₁'(0) v) - 1 = Σ (-1)^n q^{n(n+1)} (sin((2n+1)πv) - (2n+1)πv) / (πv Π(1-q^{2n})³)`
/// is formed directly so the kernel keeps full relative accuracy near 0.
pub(crate) fn k_ell_complex(
    v: Complex64,
    t: f64,
    max_terms: usize,
) -> Result<(Complex64, f64, usize)> {
    if v.norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), 0.0, 0));
    }
    if t < S_TRANSFORM_THRESHOLD {
        // K(v|it) = 2πv²/t + K(-iv/t | i/t)
        let w = Complex64::new(0.0, -1.0) * v / t;
        let (k, err, terms) = k_ell_complex(w, t.recip(), max_terms)?;
        let shift = 2.0 * PI * v * v / t;
        return Ok((shift + k, err + 2.0 * f64::EPSILON * shift.norm(), terms));
    }

    let im = v.im.abs();
    let mut re_acc = NeumaierSum::new();
    let mut im_acc = NeumaierSum::new();
    let mut magnitude = 0.0;
    let mut terms = 0;
    let mut converged = false;
    for n in 0..max_terms {
        let nf = n as f64;
        let growth = (2.0 * nf + 1.0) * PI * im;
        if growth > 700.0 {
            return Err(Error::Overflow(format!("kernel series at |Im v| = {im}")));
        }
        let weight = (-PI * t * nf * (nf + 1.0)).exp();
        let y = (2.0 * nf + 1.0) * PI * v;
        let term = sin_minus_id(y) * if n % 2 == 0 { weight } else { -weight };
        re_acc += term.re;
        im_acc += term.im;
        magnitude += term.norm();
        terms = n + 1;
        // |sin y - y| <= |y| e^{|Im y|}
        let next_y = (2.0 * nf + 3.0) * PI * v.norm();
        let next = (-PI * t * (nf + 1.0) * (nf + 2.0) + (2.0 * nf + 3.0) * PI * im).exp() * next_y;
        let ratio = 2.0 * (-2.0 * PI * t * (nf + 2.0) + 2.0 * PI * im).exp();
        if ratio < 1.0 && next / (1.0 - ratio) <= 0.25 * f64::EPSILON * magnitude {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            max_terms,
            tail_bound: f64::NAN,
        });
    }
    let (d, d_err) = eta_cubed(t, max_terms)?;
    let num = Complex64::new(re_acc.value(), im_acc.value());
    let z = num / (PI * v * d);
    let kernel = -2.0 * ln_1p(z);
    let rel = 4.0 * f64::EPSILON * magnitude / num.norm().max(f64::MIN_POSITIVE) + d_err / d;
    let err = 2.0 * z.norm() * rel / (1.0 + z).norm() + 2.0 * f64::EPSILON * kernel.norm();
    Ok((kernel, err, terms))
}

/// `K_ell(v|it) = -2 log(θ₁(v|it) / (θ₁'(0|it) v))` for real `|v| < 1`.
///
/// `K_ell(0) = 0` by continuity.
pub fn k_ell(v: f64, modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    if !v.is_finite() || v.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "elliptic kernel needs |v| < 1 (theta vanishes at the integers), got {v}"
        )));
    }
    let (k, err, terms) = k_ell_complex(Complex64::new(v, 0.0), modulus.t(), prec.max_terms())?;
    Ok(EvalResult::new(k.re, err, terms))
}

/// `-2 log(sin(πv)/(πv))` for `|v| < 1`.
pub fn circular_kernel(v: f64) -> Result<f64> {
    if !v.is_finite() || v.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "circular kernel needs |v| < 1, got {v}"
        )));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let x = PI * v;
    let z = sin_minus_id(Complex64::new(x, 0.0)).re / x;
    Ok(-2.0 * z.ln_1p())
}

/// `-2 log(sinh(πv)/(πv))` for finite `v`.
pub fn hyperbolic_kernel(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::Domain(format!(
            "hyperbolic kernel needs finite v, got {v}"
        )));
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let x = PI * v.abs();
    if x > 30.0 {
        // sinh x = e^x (1 - e^{-2x}) / 2
        return Ok(-2.0 * (x - (2.0 * x).ln() + (-(-2.0 * x).exp()).ln_1p()));
    }
    Ok(-2.0 * (sinh_minus_id(x) / x).ln_1p())
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 || count > MAX_COEFFS {
        return Err(Error::Domain(format!(
            "number of kernel coefficients must be in 1..={MAX_COEFFS}, got {count}"
        )));
    }
    Ok(())
}

/// `c_{2m}(t)` for `m = 1..=count` by least squares on kernel samples.
///
/// An even polynomial of degree `2·count + 4` is fitted to `K_ell` sampled at
/// equally spaced angles on the circle `|v| = 0.1` (shrunk to `t/4` for small
/// `t` to stay inside the disc of convergence); the two highest coefficients
/// are guard terms and are discarded.
pub fn kernel_coeffs_taylor(
    modulus: &Modulus,
    count: usize,
    prec: &Precision,
) -> Result<KernelCoefficients> {
    check_count(count)?;
    let t = modulus.t();
    let radius = FIT_RADIUS.min(0.25 * t);
    let unknowns = count + FIT_GUARD;

    let mut a = DMatrix::<f64>::zeros(2 * FIT_NODES, unknowns);
    let mut b = DVector::<f64>::zeros(2 * FIT_NODES);
    let mut scale: f64 = 0.0;
    for j in 0..FIT_NODES {
        let angle = 2.0 * PI * (j as f64 + 0.5) / FIT_NODES as f64;
        let v = Complex64::from_polar(radius, angle);
        let (k, _, _) = k_ell_complex(v, t, prec.max_terms())?;
        b[2 * j] = k.re;
        b[2 * j + 1] = k.im;
        scale = scale.max(k.norm());
        // unknowns are c_{2m} r^{2m}, so every column has unit modulus
        for m in 1..=unknowns {
            let phase = 2.0 * m as f64 * angle;
            a[(2 * j, m - 1)] = phase.cos();
            a[(2 * j + 1, m - 1)] = phase.sin();
        }
    }
    let svd = a.clone().svd(true, true);
    let d = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Domain(format!("kernel fit failed: {e}")))?;
    let residual = (&a * &d - &b).amax();
    let tol = 1e-4 * scale + prec.abs_tol();
    if residual.is_nan() || residual > tol {
        return Err(Error::FitResidual { residual, tol });
    }
    let coeffs = (1..=count)
        .map(|m| d[m - 1] / radius.powi(2 * m as i32))
        .collect();
    Ok(KernelCoefficients {
        t,
        route: Route::Taylor,
        coeffs,
        fit_residual: Some(residual),
    })
}

/// `c_{2m}(t)` for `m = 1..=count` from the Lambert series.
///
/// Requires `t >= 0.5`; smaller `t` must be reduced first, see
/// [`kernel_coeffs_lambert_reduced`].
pub fn kernel_coeffs_lambert(
    modulus: &Modulus,
    count: usize,
    prec: &Precision,
) -> Result<KernelCoefficients> {
    check_count(count)?;
    let t = modulus.t();
    if t < S_TRANSFORM_THRESHOLD {
        return Err(Error::Domain(format!(
            "Lambert route needs t >= {S_TRANSFORM_THRESHOLD}, got {t}; reduce with the S-transform first"
        )));
    }
    let coeffs = (1..=count as u32)
        .map(|m| lambert_coefficient(m, t, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelCoefficients {
        t,
        route: Route::Lambert,
        coeffs,
        fit_residual: None,
    })
}

fn lambert_coefficient(m: u32, t: f64, prec: &Precision) -> Result<f64> {
    let power = 2 * m as i32 - 1;
    // 4 (2π)^{2m} / (2m)!
    let pre: f64 = 4.0 * (1..=2 * m).map(|j| 2.0 * PI / j as f64).product::<f64>();
    let q2 = (-2.0 * PI * t).exp();
    let mut acc = NeumaierSum::new();
    let mut tail = f64::INFINITY;
    for k in 1..=prec.max_terms() {
        let kf = k as f64;
        let term = kf.powi(power) / (2.0 * PI * kf * t).exp_m1();
        acc += term;
        let ratio = ((kf + 1.0) / kf).powi(power) * q2;
        if ratio < 1.0 {
            tail = term * ratio / (1.0 - ratio);
            if pre * tail <= 0.01 * prec.abs_tol() && tail <= f64::EPSILON * acc.value() {
                break;
            }
        }
    }
    if pre * tail > 0.01 * prec.abs_tol() {
        return Err(Error::NonConvergence {
            max_terms: prec.max_terms(),
            tail_bound: pre * tail,
        });
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(2.0 * zeta(2 * m) / m as f64 + sign * pre * acc.value())
}

/// Lambert route for any `t > 0`: for `t < 0.5` the coefficients are computed
/// at the dual modulus and mapped back through
/// `c₂(t) = 2π/t - c₂(1/t)/t²` and `c_{2m}(t) = (-1)^m c_{2m}(1/t)/t^{2m}` (m ≥ 2).
pub fn kernel_coeffs_lambert_reduced(
    modulus: &Modulus,
    count: usize,
    prec: &Precision,
) -> Result<KernelCoefficients> {
    let t = modulus.t();
    if t >= S_TRANSFORM_THRESHOLD {
        return kernel_coeffs_lambert(modulus, count, prec);
    }
    let dual = kernel_coeffs_lambert(&modulus.dual(), count, prec)?;
    let coeffs = dual
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let m = i as i32 + 1;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mapped = sign * c / t.powi(2 * m);
            if m == 1 {
                2.0 * PI / t + mapped
            } else {
                mapped
            }
        })
        .collect();
    Ok(KernelCoefficients {
        t,
        route: Route::Lambert,
        coeffs,
        fit_residual: None,
    })
}
