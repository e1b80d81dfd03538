use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{bernoulli_even, p_series_cutoff, EvalResult, NeumaierSum, Precision};
use crate::{Error, Result};

const EM_CUTOFF: u32 = 10;
const EM_CORRECTIONS: u32 = 10;
const TABLE_MAX: u32 = 512;

/// `ζ(2m)` from `(-1)^{m+1} B_{2m} (2π)^{2m} / (2 (2m)!)`, for `1 <= m <= 15`.
pub fn zeta_even_closed_form(m: u32) -> Result<f64> {
    let b = bernoulli_even(m)?;
    // (2π)^{2m} / (2m)! as a running product keeps every factor near 1
    let scale: f64 = (1..=2 * m).map(|j| 2.0 * PI / j as f64).product();
    let b = *b.numer() as f64 / *b.denom() as f64;
    Ok(b.abs() * scale / 2.0)
}

/// `ζ(s)` for integer `s >= 2` to full double precision.
///
/// Euler–Maclaurin summation with ten explicit terms and ten Bernoulli
/// corrections; the values are tabulated on first use.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta(s) requires s >= 2, got {s}");
    if s > TABLE_MAX {
        return 1.0;
    }
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=TABLE_MAX)
            .map(|s| if s < 2 { f64::NAN } else { euler_maclaurin(s) })
            .collect()
    })[s as usize]
}

fn euler_maclaurin(s: u32) -> f64 {
    let sf = s as f64;
    let n = EM_CUTOFF as f64;
    let mut acc = NeumaierSum::new();
    for k in (1..EM_CUTOFF).rev() {
        acc += (k as f64).powi(-(s as i32));
    }
    let n_pow = n.powf(-sf);
    acc += n * n_pow / (sf - 1.0);
    acc += 0.5 * n_pow;
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = sf; // s(s+1)...(s+2j-2)
    let mut fact = 2.0; // (2j)!
    let mut n_term = n_pow / n; // N^{-s-2j+1}
    for j in 1..=EM_CORRECTIONS {
        let b = bernoulli_even(j).expect("index within table");
        let b = *b.numer() as f64 / *b.denom() as f64;
        acc += b / fact * rising * n_term;
        let j2 = 2.0 * j as f64;
        rising *= (sf + j2 - 1.0) * (sf + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        n_term /= n * n;
    }
    acc.value()
}

/// `ζ(s)` for integer `s >= 2` with an explicit error bound.
///
/// Even `s <= 30` use the Bernoulli closed form. Everything else is the raw
/// p-series summed up to the cutoff `K` at which the integral tail bound
/// `∫_K^∞ u^{-s} du` meets half of `prec.abs_tol`.
pub fn zeta_int(s: u32, prec: &Precision) -> Result<EvalResult> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta_int requires s >= 2, got {s}")));
    }
    if s.is_multiple_of(2) && s / 2 <= super::MAX_BERNOULLI_INDEX {
        let value = zeta_even_closed_form(s / 2)?;
        return Ok(EvalResult::new(value, 4.0 * f64::EPSILON * value, 0));
    }
    let sf = s as f64;
    let budget = 0.5 * prec.abs_tol();
    let cutoff = p_series_cutoff(sf, budget).max(1.0);
    if cutoff > prec.max_terms() as f64 {
        let k = prec.max_terms() as f64;
        return Err(Error::NonConvergence {
            max_terms: prec.max_terms(),
            tail_bound: k.powf(1.0 - sf) / (sf - 1.0),
        });
    }
    let cutoff = cutoff as usize;
    let mut acc = NeumaierSum::new();
    // smallest terms first
    for k in (1..=cutoff).rev() {
        acc += (k as f64).powf(-sf);
    }
    let tail = (cutoff as f64).powf(1.0 - sf) / (sf - 1.0);
    Ok(EvalResult::new(
        acc.value(),
        tail + acc.rounding_bound(),
        cutoff,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_basel() {
        let z2 = zeta_even_closed_form(1).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-15);
        let z4 = zeta_even_closed_form(2).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn euler_maclaurin_matches_closed_form() {
        for m in 1..=15 {
            let em = zeta(2 * m);
            let cf = zeta_even_closed_form(m).unwrap();
            assert!((em - cf).abs() < 4e-15, "m={m}: {em} vs {cf}");
        }
    }

    #[test]
    fn zeta_int_odd_values() {
        let prec = Precision::default();
        let z3 = zeta_int(3, &prec).unwrap();
        assert!(z3.err_bound <= prec.abs_tol());
        assert!((z3.value - 1.202_056_903_159_594_3).abs() <= z3.err_bound);
        let z5 = zeta_int(5, &prec).unwrap();
        assert!((z5.value - 1.036_927_755_143_37).abs() <= z5.err_bound);
    }

    #[test]
    fn zeta_int_errors() {
        let prec = Precision::default();
        assert!(zeta_int(1, &prec).is_err());
        let tight = Precision::new(1e-15, 1000, 1e-11).unwrap();
        assert!(matches!(
            zeta_int(3, &tight),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn large_arguments_approach_one() {
        assert!((zeta(60) - 1.0).abs() < 1e-17);
        assert_eq!(zeta(1000), 1.0);
        assert!((zeta(20) - 1.000_000_953_962_033_9).abs() < 1e-16);
    }
}
