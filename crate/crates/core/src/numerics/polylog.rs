use std::f64::consts::PI;

use num_complex::Complex64;

use super::{zeta, EvalResult, NeumaierSum, Precision};
use crate::{Error, Result};

const MAX_RADIUS: f64 = 1.5 * PI;
const MAX_ORDER: u32 = 120;

/// `Li_n(e^μ)` for `n >= 2` and `|μ| <= 1.5π` via the expansion about `μ = 0`:
///
/// ```text
/// Li_n(e^μ) = Σ_{k≠n-1} ζ(n-k) μ^k/k! + μ^{n-1}/(n-1)! (H_{n-1} - log(-μ))
/// ```
///
/// The zeta values at non-positive integers are rewritten through
/// `ζ(1-2p) = (-1)^p 2 (2p-1)! ζ(2p) / (2π)^{2p}` so every term stays small.
/// The principal branch of `log(-μ)` is used.
pub fn polylog_exp(n: u32, mu: Complex64, prec: &Precision) -> Result<EvalResult<Complex64>> {
    if !(2..=MAX_ORDER).contains(&n) {
        return Err(Error::Domain(format!(
            "polylog expansion needs 2 <= n <= {MAX_ORDER}, got {n}"
        )));
    }
    let radius = mu.norm();
    if !radius.is_finite() || radius > MAX_RADIUS {
        return Err(Error::Domain(format!(
            "polylog expansion needs |mu| <= 1.5π, got {radius}"
        )));
    }
    if radius == 0.0 {
        let z = zeta(n);
        return Ok(EvalResult::new(
            Complex64::new(z, 0.0),
            2.0 * f64::EPSILON * z,
            1,
        ));
    }

    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut push = |z: Complex64| {
        re += z.re;
        im += z.im;
    };

    // μ^k / k!
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 0..=(n - 2) {
        push(pow * zeta(n - k));
        pow = pow * mu / (k + 1) as f64;
    }
    let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
    let mu_pow = pow; // μ^{n-1}/(n-1)!
    push(mu_pow * (harmonic - (-mu).ln()));
    push(-mu_pow * mu / (2.0 * n as f64));

    let mu_n1 = mu.powu(n - 1);
    let w = mu / (2.0 * PI);
    let w2 = w * w;
    let rho2 = w.norm_sqr();
    let mut g = -w2 / (2..=n + 1).map(|j| j as f64).product::<f64>();
    let mut terms = n as usize + 2;
    let tol = 0.1 * prec.abs_tol();
    let mut tail = f64::INFINITY;
    for p in 1..=prec.max_terms() {
        let term = g * mu_n1 * (2.0 * zeta(2 * p as u32));
        push(term);
        terms += 1;
        tail = term.norm() * rho2 / (1.0 - rho2);
        if tail <= tol {
            break;
        }
        let p = p as f64;
        g = -g * w2 * (2.0 * p * (2.0 * p + 1.0))
            / ((n as f64 + 2.0 * p) * (n as f64 + 2.0 * p + 1.0));
    }
    if tail > tol {
        return Err(Error::NonConvergence {
            max_terms: prec.max_terms(),
            tail_bound: tail,
        });
    }
    let value = Complex64::new(re.value(), im.value());
    let rounding = 8.0 * f64::EPSILON * (re.abs_sum() + im.abs_sum());
    Ok(EvalResult::new(value, tail + rounding, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(n: u32, mu: Complex64) -> Complex64 {
        // only for Re μ < 0 where the series converges geometrically
        let z = mu.exp();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zk = z;
        for k in 1..4000 {
            acc += zk / (k as f64).powi(n as i32);
            zk *= z;
        }
        acc
    }

    #[test]
    fn matches_direct_series_inside_the_disc() {
        let prec = Precision::default();
        for &(n, mu) in &[
            (2, Complex64::new(-1.0, 0.0)),
            (3, Complex64::new(-0.5, 2.0)),
            (4, Complex64::new(-2.0, -1.0)),
            (5, Complex64::new(-0.1, 0.0)),
        ] {
            let e = polylog_exp(n, mu, &prec).unwrap();
            let d = direct(n, mu);
            assert!(
                (e.value - d).norm() < 1e-12,
                "n={n} mu={mu}: {} vs {d}",
                e.value
            );
        }
    }

    #[test]
    fn at_the_origin() {
        let prec = Precision::default();
        let v = polylog_exp(3, Complex64::new(0.0, 0.0), &prec).unwrap();
        assert_eq!(v.value.re, zeta(3));
    }

    #[test]
    fn rejects_outside_radius() {
        let prec = Precision::default();
        assert!(polylog_exp(2, Complex64::new(0.0, 5.0), &prec).is_err());
        assert!(polylog_exp(1, Complex64::new(0.0, 1.0), &prec).is_err());
    }
}
