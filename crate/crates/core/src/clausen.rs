//! The CL-type Clausen families.
//!
//! ```text
//! Cl_n(x)    = Σ_k w_n(kx) / k^n                       (circular)
//! ECl_n(x;t) = Σ_k coth(πkt) w_n(kx) / k^n             (elliptic)
//! HCl_n(x)   = Li_n(e^{-x}) + (-1)^n x^n / (2·n!)      (hyperbolic)
//! ```
//!
//! with `w_n = cos` for odd `n` and `w_n = sin` for even `n`. The elliptic
//! weights `coth(πkt) = 1 + 2q^{2k}/(1 - q^{2k})` come from expanding
//! `-log θ̂₁` with the triple product and reduce to 1 as `t → ∞`.
//!
//! Derivative conventions: for the circular and elliptic families
//! `d/dx F_{n+1} = F_n` when `n+1` is even and `-F_n` when `n+1` is odd; the
//! hyperbolic family satisfies `d/dx HCl_{n+1} = -HCl_n` at every level.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::boundary::boundary_constant;
use crate::numerics::{polylog_exp, zeta, EvalResult, NeumaierSum, Precision};
use crate::theta::{theta1_normalized, Modulus};
use crate::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Distance from `x ≡ 0 (mod 2π)` below which level 1 is reported singular.
pub const SINGULARITY_GUARD: f64 = 1e-8;

// direct summation is used when its cutoff stays below this
const DIRECT_SERIES_LIMIT: f64 = 256.0;
const DIRECT_SERIES_ACCURACY: f64 = 1e-17;

// the hyperbolic polylog switches from the zeta expansion to direct summation
const HYPERBOLIC_SWITCH: f64 = 2.0;

/// One of the three CL-type families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Circular,
    Elliptic(Modulus),
    Hyperbolic,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Circular => "circular",
            Family::Elliptic(_) => "elliptic",
            Family::Hyperbolic => "hyperbolic",
        }
    }

    /// Evaluate level `n` at `x`.
    pub fn eval(&self, n: u32, x: f64, prec: &Precision) -> Result<EvalResult> {
        match self {
            Family::Circular => circular_cl(n, x, prec),
            Family::Elliptic(m) => elliptic_cl(n, x, m, prec),
            Family::Hyperbolic => hyperbolic_cl(n, x, prec),
        }
    }

    /// Level `n` without the guard around the level-1 singularity. Used as a
    /// quadrature integrand, which samples arbitrarily close to `x = 0`.
    pub(crate) fn eval_unguarded(&self, n: u32, x: f64, prec: &Precision) -> Result<f64> {
        if n == 1 {
            let r = reduce_angle(x);
            if r == 0.0 {
                return Err(Error::Singular("level 1 at x = 0".into()));
            }
            return match self {
                Family::Circular => Ok(cl1_closed(r)),
                Family::Elliptic(m) => Ok(ecl1_theta(r, m, prec)?.value),
                Family::Hyperbolic => Ok(hcl1_closed(x)),
            };
        }
        self.eval(n, x, prec).map(|r| r.value)
    }

    /// `σ` in `d/dx F_{level} = σ F_{level-1}`.
    pub fn recursion_sign(&self, level: u32) -> f64 {
        match self {
            Family::Hyperbolic => -1.0,
            _ if level.is_multiple_of(2) => 1.0,
            _ => -1.0,
        }
    }

    /// `F_level(0)`, the constant the integral recursion starts from.
    pub fn boundary_value(&self, level: u32, prec: &Precision) -> Result<f64> {
        if level < 2 {
            return Err(Error::Domain("level 1 has no finite boundary value".into()));
        }
        match self {
            Family::Hyperbolic => Ok(zeta(level)),
            _ if level.is_multiple_of(2) => Ok(0.0),
            Family::Circular => Ok(zeta(level)),
            Family::Elliptic(m) => Ok(boundary_constant((level - 1) / 2, m, prec)?.value),
        }
    }
}

/// Weight `a_k` multiplying `w_n(kx)/k^n` in the Fourier families.
///
/// 1 for the circular family and `coth(πkt) = 1 + 2q^{2k}/(1 - q^{2k})` for
/// the elliptic one. The hyperbolic family has no Fourier form.
pub fn fourier_weight(k: u64, family: &Family) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("Fourier index starts at k = 1".into()));
    }
    match family {
        Family::Circular => Ok(1.0),
        Family::Elliptic(m) => Ok(1.0 + elliptic_excess(k, m.t())),
        Family::Hyperbolic => Err(Error::Domain(
            "the hyperbolic family has no Fourier weights".into(),
        )),
    }
}

/// `coth(πkt) - 1 = 2/(e^{2πkt} - 1)`.
fn elliptic_excess(k: u64, t: f64) -> f64 {
    2.0 / (TWO_PI * k as f64 * t).exp_m1()
}

/// Reduce `x` into `[-π, π]`.
fn reduce_angle(x: f64) -> f64 {
    x - TWO_PI * (x / TWO_PI).round()
}

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("Clausen order must be at least 1".into()));
    }
    Ok(())
}

fn check_level_one(x_reduced: f64, x: f64) -> Result<()> {
    if x_reduced.abs() < SINGULARITY_GUARD {
        return Err(Error::Singular(format!(
            "level-1 Clausen function has a logarithmic singularity at x ≡ 0 (mod 2π); got x = {x}"
        )));
    }
    Ok(())
}

fn cl1_closed(x: f64) -> f64 {
    -(2.0 * (0.5 * x).sin().abs()).ln()
}

fn hcl1_closed(x: f64) -> f64 {
    // -log(2 sinh(x/2)) = -x/2 - log(1 - e^{-x})
    -0.5 * x - (-(-x).exp_m1()).ln()
}

fn wave(n: u32, angle: f64) -> f64 {
    if n.is_multiple_of(2) {
        angle.sin()
    } else {
        angle.cos()
    }
}

/// Classical `Cl_n(x)`.
///
/// `n = 1` uses `-log|2 sin(x/2)|`. Higher orders use the direct series when
/// its tail bound `K^{1-n}/(n-1)` is met within a few hundred terms and
/// otherwise the expansion of `Li_n(e^{ix})` about `x = 0` on `[-π, π]`.
pub fn circular_cl(n: u32, x: f64, prec: &Precision) -> Result<EvalResult> {
    check_order(n)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let r = reduce_angle(x);
    if n == 1 {
        check_level_one(r, x)?;
        let v = cl1_closed(r);
        return Ok(EvalResult::new(v, 2.0 * f64::EPSILON * v.abs().max(1.0), 1));
    }
    if r == 0.0 {
        let v = if n.is_multiple_of(2) { 0.0 } else { zeta(n) };
        return Ok(EvalResult::new(v, f64::EPSILON * v, 1));
    }
    // direct summation only when it is short even at rounding-level accuracy
    let bound = (0.5 * prec.abs_tol()).min(DIRECT_SERIES_ACCURACY);
    if crate::numerics::p_series_cutoff(n as f64, bound) <= DIRECT_SERIES_LIMIT || n > 100 {
        return series_to(n, r, bound, prec.max_terms());
    }
    let li = polylog_exp(n, Complex64::new(0.0, r), prec)?;
    let v = if n.is_multiple_of(2) {
        li.value.im
    } else {
        li.value.re
    };
    Ok(EvalResult::new(v, li.err_bound, li.terms_used))
}

/// `Cl_n(x)` for `n >= 2` by the raw Fourier series, truncated where the
/// integral tail bound meets half of `prec.abs_tol`.
pub fn circular_cl_series(n: u32, x: f64, prec: &Precision) -> Result<EvalResult> {
    if n < 2 {
        return Err(Error::Domain(
            "the cosine series of Cl_1 converges only conditionally; use circular_cl".into(),
        ));
    }
    series_to(n, x, 0.5 * prec.abs_tol(), prec.max_terms())
}

fn series_to(n: u32, x: f64, bound: f64, max_terms: usize) -> Result<EvalResult> {
    let nf = n as f64;
    let cutoff = crate::numerics::p_series_cutoff(nf, bound);
    if cutoff > max_terms as f64 {
        let k = max_terms as f64;
        return Err(Error::NonConvergence {
            max_terms,
            tail_bound: k.powf(1.0 - nf) / (nf - 1.0),
        });
    }
    let cutoff = cutoff.max(1.0) as u64;
    let r = reduce_angle(x);
    let mut acc = NeumaierSum::new();
    for k in (1..=cutoff).rev() {
        let kf = k as f64;
        acc += wave(n, kf * r) / kf.powi(n as i32);
    }
    let tail = (cutoff as f64).powf(1.0 - nf) / (nf - 1.0);
    Ok(EvalResult::new(
        acc.value(),
        tail + acc.rounding_bound(),
        cutoff as usize,
    ))
}

/// `Σ_k (a_k - 1) w_n(kx)/k^n`, the geometric part of the elliptic series.
fn elliptic_correction(
    n: u32,
    x_reduced: f64,
    modulus: &Modulus,
    prec: &Precision,
) -> Result<EvalResult> {
    let t = modulus.t();
    let q2 = modulus.q2();
    let mut acc = NeumaierSum::new();
    let tol = 0.1 * prec.abs_tol();
    for k in 1..=prec.max_terms() as u64 {
        let kf = k as f64;
        let weight = elliptic_excess(k, t) / kf.powi(n as i32);
        acc += weight * wave(n, kf * x_reduced);
        // the next weight is at most q² times this one
        let tail = weight * q2 / (1.0 - q2);
        if tail <= tol && tail <= f64::EPSILON * acc.abs_sum() || weight == 0.0 {
            return Ok(EvalResult::new(
                acc.value(),
                tail + acc.rounding_bound(),
                k as usize,
            ));
        }
    }
    Err(Error::NonConvergence {
        max_terms: prec.max_terms(),
        tail_bound: f64::NAN,
    })
}

/// `C(t) = 2 Σ_k q^{2k} / (k (1 - q^{2k}))`, the constant separating `ECl_1`
/// from `-log θ̂₁`.
pub fn elliptic_log_constant(modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    elliptic_correction(1, 0.0, modulus, prec)
}

/// `ECl_1(x) = -log θ̂₁(x/2π | it) + C(t)` for `x` already reduced to `[-π, π]`.
fn ecl1_theta(r: f64, modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    let theta = theta1_normalized(r.abs() / TWO_PI, modulus, prec)?;
    let c = elliptic_log_constant(modulus, prec)?;
    let value = -theta.value.ln() + c.value;
    let err = theta.err_bound / theta.value + c.err_bound + f64::EPSILON * value.abs();
    Ok(EvalResult::new(value, err, theta.terms_used + c.terms_used))
}

/// Elliptic Clausen function `ECl_n(x; it)`.
///
/// Level 1 goes through the theta kernel, `-log θ̂₁(x/2π) + C(t)`. Higher
/// levels are `Cl_n(x)` plus the geometrically convergent weighted excess.
pub fn elliptic_cl(n: u32, x: f64, modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    check_order(n)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let r = reduce_angle(x);
    if n == 1 {
        check_level_one(r, x)?;
        return ecl1_theta(r, modulus, prec);
    }
    elliptic_cl_weighted(n, x, modulus, prec)
}

/// `ECl_n` from the weighted Fourier series alone: the circular part in
/// closed or accelerated form plus `Σ (a_k - 1) w_n(kx)/k^n`.
pub fn elliptic_cl_weighted(
    n: u32,
    x: f64,
    modulus: &Modulus,
    prec: &Precision,
) -> Result<EvalResult> {
    check_order(n)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let r = reduce_angle(x);
    let base = circular_cl(n, x, prec)?;
    let corr = elliptic_correction(n, r, modulus, prec)?;
    Ok(EvalResult::new(
        base.value + corr.value,
        base.err_bound + corr.err_bound,
        base.terms_used + corr.terms_used,
    ))
}

/// Hyperbolic Clausen function `HCl_n(x) = Li_n(e^{-x}) + (-1)^n x^n/(2·n!)`
/// for `x >= 0` (`x > 0` when `n = 1`). `HCl_1(x) = -log(2 sinh(x/2))`.
pub fn hyperbolic_cl(n: u32, x: f64, prec: &Precision) -> Result<EvalResult> {
    check_order(n)?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "hyperbolic Clausen functions need x >= 0, got {x}"
        )));
    }
    if n == 1 {
        if x < SINGULARITY_GUARD {
            return Err(Error::Singular(format!(
                "HCl_1 has a logarithmic singularity at x = 0; got x = {x}"
            )));
        }
        let v = hcl1_closed(x);
        return Ok(EvalResult::new(v, 2.0 * f64::EPSILON * v.abs().max(1.0), 1));
    }
    let inv_fact: f64 = (1..=n).map(|j| 1.0 / j as f64).product();
    let poly = if n.is_multiple_of(2) { 0.5 } else { -0.5 } * x.powi(n as i32) * inv_fact;
    let li = if x == 0.0 {
        let z = zeta(n);
        EvalResult::new(z, f64::EPSILON * z, 1)
    } else if x < HYPERBOLIC_SWITCH && n <= 100 {
        polylog_exp(n, Complex64::new(-x, 0.0), prec)?.map(|z| z.re)
    } else {
        polylog_direct(n, x, prec)?
    };
    let value = li.value + poly;
    Ok(EvalResult::new(
        value,
        li.err_bound + 2.0 * f64::EPSILON * poly.abs(),
        li.terms_used,
    ))
}

/// `Σ e^{-kx}/k^n` for `x > 0`, geometric tail with ratio `e^{-x}`.
fn polylog_direct(n: u32, x: f64, prec: &Precision) -> Result<EvalResult> {
    let ratio = (-x).exp();
    let mut acc = NeumaierSum::new();
    let mut zk = 1.0;
    for k in 1..=prec.max_terms() {
        zk *= ratio;
        let term = zk / (k as f64).powi(n as i32);
        acc += term;
        let tail = term * ratio / (1.0 - ratio);
        if tail <= 0.1 * prec.abs_tol() && tail <= f64::EPSILON * acc.value() {
            return Ok(EvalResult::new(acc.value(), tail + acc.rounding_bound(), k));
        }
    }
    Err(Error::NonConvergence {
        max_terms: prec.max_terms(),
        tail_bound: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn m(t: f64) -> Modulus {
        Modulus::new(t).unwrap()
    }

    /// Catalan's constant from Σ (-1)^k/(2k+1)², averaging two consecutive
    /// partial sums of the alternating series.
    fn catalan_oracle() -> f64 {
        let mut s = 0.0;
        let mut prev = 0.0;
        for k in 0..2_000_000u64 {
            prev = s;
            let d = (2 * k + 1) as f64;
            s += if k % 2 == 0 { 1.0 } else { -1.0 } / (d * d);
        }
        0.5 * (s + prev)
    }

    #[test]
    fn circular_examples() {
        let p = prec();
        assert!(circular_cl(1, PI / 3.0, &p).unwrap().value.abs() < 1e-14);
        let cat = catalan_oracle();
        let v = circular_cl(2, PI / 2.0, &p).unwrap().value;
        assert!((v - cat).abs() < 1e-12, "{v} vs {cat}");
        assert!((v - 0.915_965_594_2).abs() < 1e-10);
        assert!((circular_cl(3, 0.0, &p).unwrap().value - zeta(3)).abs() < 1e-15);
        assert!(matches!(circular_cl(1, 0.0, &p), Err(Error::Singular(_))));
        assert!(matches!(
            circular_cl(1, 4.0 * PI + 1e-9, &p),
            Err(Error::Singular(_))
        ));
        assert!(circular_cl(0, 1.0, &p).is_err());
    }

    #[test]
    fn expansion_agrees_with_direct_series() {
        let loose = Precision::new(1e-6, 10_000_000, 1e-11).unwrap();
        for n in [2, 3, 4, 5] {
            for x in [0.3, 1.0, 2.5, -3.0, 7.0] {
                let a = circular_cl(n, x, &prec()).unwrap();
                let b = circular_cl_series(n, x, &loose).unwrap();
                assert!(
                    (a.value - b.value).abs() <= a.err_bound + b.err_bound,
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn high_orders_use_direct_series() {
        let a = circular_cl(12, 1.3, &prec()).unwrap();
        let b: f64 = (1..200)
            .map(|k| ((k as f64) * 1.3).sin() / (k as f64).powi(12))
            .sum();
        assert!(a.terms_used < 200);
        assert!((a.value - b).abs() <= a.err_bound);
    }

    #[test]
    fn fourier_weights() {
        assert_eq!(fourier_weight(7, &Family::Circular).unwrap(), 1.0);
        let w = fourier_weight(1, &Family::Elliptic(m(1.0))).unwrap();
        assert!((w - 1.0 / PI.tanh()).abs() < 1e-15);
        assert!((w - 1.003_741_873_197_321).abs() < 1e-15);
        assert_eq!(fourier_weight(1, &Family::Elliptic(m(200.0))).unwrap(), 1.0);
        assert!(fourier_weight(0, &Family::Circular).is_err());
        assert!(fourier_weight(1, &Family::Hyperbolic).is_err());
    }

    #[test]
    fn elliptic_level_one_two_routes() {
        // Σ (-1)^k coth(πk)/k = -log 2 + Σ (-1)^k (coth(πk) - 1)/k
        let mut excess = 0.0;
        for k in 1..40 {
            let kf = k as f64;
            excess += if k % 2 == 0 { 1.0 } else { -1.0 } * (1.0 / (PI * kf).tanh() - 1.0) / kf;
        }
        let oracle = -(2f64).ln() + excess;
        let a = elliptic_cl(1, PI, &m(1.0), &prec()).unwrap();
        let b = elliptic_cl_weighted(1, PI, &m(1.0), &prec()).unwrap();
        assert!((a.value - oracle).abs() < 1e-14);
        assert!((b.value - oracle).abs() < 1e-14);
        assert!((a.value + 0.696_885_5).abs() < 1e-7);
        let c = elliptic_log_constant(&m(1.0), &prec()).unwrap();
        assert!((c.value - 0.003_745_4).abs() < 1e-7);
    }

    #[test]
    fn elliptic_examples() {
        let p = prec();
        assert_eq!(elliptic_cl(2, 0.0, &m(1.3), &p).unwrap().value, 0.0);
        let q2 = m(5.0).q2();
        let e = elliptic_cl(3, 0.7, &m(5.0), &p).unwrap().value;
        let c = circular_cl(3, 0.7, &p).unwrap().value;
        assert!((e - c).abs() <= 2.0 * q2 + 1e-10);
        assert!(matches!(
            elliptic_cl(1, 0.0, &m(1.0), &p),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn hyperbolic_examples() {
        let p = prec();
        let root = 2.0 * (0.5f64).asinh();
        assert!(hyperbolic_cl(1, root, &p).unwrap().value.abs() < 1e-15);
        let v = hyperbolic_cl(1, 1.0, &p).unwrap().value;
        assert!((v + (2.0 * 0.5f64.sinh()).ln()).abs() < 1e-15);
        assert!((v + 0.041_324_9).abs() < 1e-7);
        assert!((hyperbolic_cl(2, 0.0, &p).unwrap().value - PI * PI / 6.0).abs() < 1e-15);
        assert!(hyperbolic_cl(2, -1.0, &p).is_err());
        assert!(matches!(hyperbolic_cl(1, 0.0, &p), Err(Error::Singular(_))));
    }

    #[test]
    fn hyperbolic_routes_meet_at_the_switch() {
        let p = prec();
        for n in [2, 3, 5] {
            let below = polylog_exp(n, Complex64::new(-HYPERBOLIC_SWITCH, 0.0), &p)
                .unwrap()
                .value
                .re;
            let above = polylog_direct(n, HYPERBOLIC_SWITCH, &p).unwrap().value;
            assert!((below - above).abs() < 5e-14, "n={n}");
        }
    }

    #[test]
    fn signs_and_boundaries() {
        let p = prec();
        let ell = Family::Elliptic(m(1.0));
        assert_eq!(Family::Circular.recursion_sign(2), 1.0);
        assert_eq!(Family::Circular.recursion_sign(3), -1.0);
        assert_eq!(ell.recursion_sign(4), 1.0);
        assert_eq!(Family::Hyperbolic.recursion_sign(2), -1.0);
        assert_eq!(Family::Circular.boundary_value(2, &p).unwrap(), 0.0);
        assert_eq!(Family::Circular.boundary_value(3, &p).unwrap(), zeta(3));
        assert!((ell.boundary_value(3, &p).unwrap() - 1.205_799_7).abs() < 1e-7);
        assert_eq!(Family::Hyperbolic.boundary_value(2, &p).unwrap(), zeta(2));
        assert!(Family::Circular.boundary_value(1, &p).is_err());
    }
}
