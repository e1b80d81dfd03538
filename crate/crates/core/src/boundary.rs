//! Odd boundary constants `B_{2m+1}(it) = ECl_{2m+1}(0; it)` and their limits.
//!
//! ```text
//! B_{2m+1}(it) = Σ_k coth(πkt)/k^{2m+1} = ζ(2m+1) + 2 Σ_k 1/(k^{2m+1}(e^{2πkt} - 1))
//! ```
//!
//! As `t → ∞` the constants fall to `ζ(2m+1)`. The hyperbolic limit is
//! tabulated as `ζ(2m+1)/2^{2m-1}`, which is not what `HCl_{2m+1}(0)` gives.

use std::collections::BTreeMap;

use crate::numerics::{zeta, EvalResult, NeumaierSum, Precision};
use crate::theta::Modulus;
use crate::{Error, Result};

/// Explanation attached to every degeneration report.
pub const HYPERBOLIC_DISCREPANCY_NOTE: &str = "open discrepancy: the tabulated hyperbolic limit \
     zeta(2m+1)/2^(2m-1) does not follow from the hyperbolic family used here, whose boundary \
     value is HCl_(2m+1)(0) = zeta(2m+1); the regularization behind the tabulated value is \
     unspecified, so it is reported as stated and not derived";

/// `B_{2m+1}(it)` for `m >= 1`.
pub fn boundary_constant(m: u32, modulus: &Modulus, prec: &Precision) -> Result<EvalResult> {
    if m == 0 {
        return Err(Error::Domain(
            "B_1 does not exist: ECl_1(x) diverges like -log|x| at x = 0".into(),
        ));
    }
    let s = 2 * m + 1;
    let two_pi_t = 2.0 * std::f64::consts::PI * modulus.t();
    let q2 = modulus.q2();
    let mut acc = NeumaierSum::new();
    let mut terms = 0;
    let mut converged = false;
    for k in 1..=prec.max_terms() {
        let kf = k as f64;
        let term = 2.0 / (kf.powi(s as i32) * (two_pi_t * kf).exp_m1());
        acc += term;
        terms = k;
        let tail = term * q2 / (1.0 - q2);
        if term == 0.0 || (tail <= 0.1 * prec.abs_tol() && tail <= f64::EPSILON * acc.value()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            max_terms: prec.max_terms(),
            tail_bound: f64::NAN,
        });
    }
    let z = zeta(s);
    let value = z + acc.value();
    let err = f64::EPSILON * z + acc.rounding_bound() + 2.0 * f64::EPSILON * acc.value();
    Ok(EvalResult::new(value, err, terms + 1))
}

/// `ζ(2m+1)`, the `t → ∞` limit.
pub fn circular_limit_constant(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("limit constants start at m = 1".into()));
    }
    Ok(zeta(2 * m + 1))
}

/// `ζ(2m+1)/2^{2m-1}`, the tabulated hyperbolic limit.
pub fn hyperbolic_limit_constant(m: u32) -> Result<f64> {
    let z = circular_limit_constant(m)?;
    Ok(z * 2f64.powi(1 - 2 * m as i32))
}

/// Which member of the family a set of constants belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryTag {
    Elliptic(f64),
    CircularLimit,
    HyperbolicLimit,
}

/// `m ↦ B_{2m+1}` for one modulus or one of the two limits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFamily {
    pub tag: BoundaryTag,
    pub values: BTreeMap<u32, f64>,
}

impl BoundaryFamily {
    pub fn elliptic(modulus: &Modulus, m_max: u32, prec: &Precision) -> Result<Self> {
        let values = (1..=m_max)
            .map(|m| boundary_constant(m, modulus, prec).map(|r| (m, r.value)))
            .collect::<Result<_>>()?;
        Ok(Self {
            tag: BoundaryTag::Elliptic(modulus.t()),
            values,
        })
    }

    pub fn circular_limit(m_max: u32) -> Result<Self> {
        let values = (1..=m_max)
            .map(|m| circular_limit_constant(m).map(|v| (m, v)))
            .collect::<Result<_>>()?;
        Ok(Self {
            tag: BoundaryTag::CircularLimit,
            values,
        })
    }

    pub fn hyperbolic_limit(m_max: u32) -> Result<Self> {
        let values = (1..=m_max)
            .map(|m| hyperbolic_limit_constant(m).map(|v| (m, v)))
            .collect::<Result<_>>()?;
        Ok(Self {
            tag: BoundaryTag::HyperbolicLimit,
            values,
        })
    }
}

/// One `(m, t)` row of the circular degeneration table.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationRow {
    pub m: u32,
    pub t: f64,
    pub value: f64,
    pub limit: f64,
    pub residual: f64,
    /// `2q²/(1 - q²)`, the size of the leading correction.
    pub envelope: f64,
    pub flagged: bool,
}

/// Stated hyperbolic limit next to the value the hyperbolic family produces.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicRow {
    pub m: u32,
    pub stated: f64,
    pub family_value: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationReport {
    pub rows: Vec<DegenerationRow>,
    pub hyperbolic: Vec<HyperbolicRow>,
    pub note: &'static str,
}

impl DegenerationReport {
    pub fn all_inside(&self) -> bool {
        self.rows.iter().all(|r| !r.flagged)
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Tabulate `B_{2m+1}(it) - ζ(2m+1)` for `m = 1..=m_max` and each `t`,
/// flagging residuals above `3·envelope + abs_tol`.
pub fn degeneration_report(
    m_max: u32,
    t_list: &[f64],
    prec: &Precision,
) -> Result<DegenerationReport> {
    if m_max == 0 {
        return Err(Error::Domain("m_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &t in t_list {
        let modulus = Modulus::new(t)?;
        let q2 = modulus.q2();
        let envelope = 2.0 * q2 / (1.0 - q2);
        for m in 1..=m_max {
            let value = boundary_constant(m, &modulus, prec)?.value;
            let limit = circular_limit_constant(m)?;
            let residual = (value - limit).abs();
            rows.push(DegenerationRow {
                m,
                t,
                value,
                limit,
                residual,
                envelope,
                flagged: residual > 3.0 * envelope + prec.abs_tol(),
            });
        }
    }
    let hyperbolic = (1..=m_max)
        .map(|m| {
            let stated = hyperbolic_limit_constant(m)?;
            let family_value = zeta(2 * m + 1);
            Ok(HyperbolicRow {
                m,
                stated,
                family_value,
                discrepancy: family_value - stated,
            })
        })
        .collect::<Result<_>>()?;
    Ok(DegenerationReport {
        rows,
        hyperbolic,
        note: HYPERBOLIC_DISCREPANCY_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p() -> Precision {
        Precision::default()
    }

    fn m(t: f64) -> Modulus {
        Modulus::new(t).unwrap()
    }

    #[test]
    fn known_values() {
        let b3 = boundary_constant(1, &m(1.0), &p()).unwrap().value;
        // first two correction terms written out
        let e1 = (2.0 * PI).exp() - 1.0;
        let e2 = (4.0 * PI).exp() - 1.0;
        let approx = zeta(3) + 2.0 / e1 + 2.0 / (8.0 * e2);
        assert!((b3 - approx).abs() < 1e-8);
        assert!((b3 - 1.205_799_648_678_326).abs() < 1e-14);
        let b5 = boundary_constant(2, &m(1.0), &p()).unwrap().value;
        assert!((b5 - 1.040_669_846_353_972).abs() < 1e-14);
        let far = boundary_constant(1, &m(400.0), &p()).unwrap().value;
        assert_eq!(far, zeta(3));
    }

    #[test]
    fn rejects_b1() {
        let e = boundary_constant(0, &m(1.0), &p()).unwrap_err();
        assert!(e.to_string().contains("log"));
    }

    #[test]
    fn limit_constants() {
        assert!((circular_limit_constant(1).unwrap() - 1.202_056_9).abs() < 1e-7);
        assert!((hyperbolic_limit_constant(1).unwrap() - 0.601_028_5).abs() < 1e-7);
        assert!((hyperbolic_limit_constant(2).unwrap() - 0.129_616_0).abs() < 1e-7);
        for k in 1..=4 {
            let r = hyperbolic_limit_constant(k).unwrap() / circular_limit_constant(k).unwrap();
            assert_eq!(r, 2f64.powi(1 - 2 * k as i32));
        }
    }

    #[test]
    fn degeneration_examples() {
        let rep = degeneration_report(3, &[2.0, 3.0, 5.0], &p()).unwrap();
        assert!(rep.all_inside());
        let r31 = rep.rows.iter().find(|r| r.t == 3.0 && r.m == 1).unwrap();
        assert!((r31.residual - 2.0 * (-6.0 * PI).exp()).abs() < 1e-10);
        let r51 = rep.rows.iter().find(|r| r.t == 5.0 && r.m == 1).unwrap();
        assert!(r51.residual <= 1e-12);
        assert_eq!(rep.hyperbolic.len(), 3);
        assert!(rep.note.contains("discrepancy"));
    }

    #[test]
    fn families() {
        let e = BoundaryFamily::elliptic(&m(1.0), 3, &p()).unwrap();
        let c = BoundaryFamily::circular_limit(3).unwrap();
        for k in 1..=3 {
            assert!(e.values[&k] > c.values[&k]);
        }
        assert_eq!(BoundaryFamily::hyperbolic_limit(2).unwrap().values.len(), 2);
    }
}
