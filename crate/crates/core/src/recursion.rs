//! Integral recursion `F_{n+1}(x) = F_{n+1}(0) + σ ∫₀ˣ F_n(u) du`.
//!
//! The same [`lift`] runs for every family; only the boundary value and the
//! sign `σ` differ. It only ever evaluates the level below the one it
//! produces, so it serves as an independent check on the series routes.

use std::cell::RefCell;

use crate::clausen::Family;
use crate::numerics::{adaptive_integrate, Precision};
use crate::{Error, Result};

/// Central-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Bound on `|ΔF_{n+1}/Δx - σ F_n|`.
pub const FD_BOUND: f64 = 1e-6;
/// Bound on `|lift - series|`.
pub const QUAD_BOUND: f64 = 1e-8;

/// `boundary + sign·∫₀ˣ f`. Negative `x` integrates over `[x, 0]`.
pub fn lift<F>(f: F, boundary: f64, sign: f64, x: f64, prec: &Precision) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let integral = if x >= 0.0 {
        adaptive_integrate(&f, 0.0, x, prec)?.value
    } else {
        -adaptive_integrate(&f, x, 0.0, prec)?.value
    };
    Ok(boundary + sign * integral)
}

/// `∫₀ˣ f`: the even (sine-type) level above `f`, which vanishes at 0.
pub fn lift_even<F: Fn(f64) -> f64>(f: F, x: f64, prec: &Precision) -> Result<f64> {
    lift(f, 0.0, 1.0, x, prec)
}

/// `b - ∫₀ˣ f`: the odd (cosine-type) level above `f` with value `b` at 0.
pub fn lift_odd<F: Fn(f64) -> f64>(f: F, b: f64, x: f64, prec: &Precision) -> Result<f64> {
    lift(f, b, -1.0, x, prec)
}

/// Level `level` of `family` at `x`, built by lifting `level - 1`.
pub fn lift_level(family: &Family, level: u32, x: f64, prec: &Precision) -> Result<f64> {
    if level < 2 {
        return Err(Error::Domain("only levels >= 2 can be lifted".into()));
    }
    let boundary = family.boundary_value(level, prec)?;
    let sign = family.recursion_sign(level);
    let failure = RefCell::new(None);
    let integrand = |u: f64| match family.eval_unguarded(level - 1, u, prec) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let value = lift(integrand, boundary, sign, x, prec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

/// Worst residuals for one step `level - 1 → level`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResidual {
    pub level: u32,
    pub sign: f64,
    pub fd_residual: f64,
    pub quad_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionReport {
    pub family: &'static str,
    pub levels: Vec<LevelResidual>,
    /// Evaluation failures, each also counted as an infinite residual.
    pub failures: Vec<String>,
}

impl RecursionReport {
    pub fn max_fd_residual(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.fd_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_quad_residual(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.quad_residual)
            .fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
            && self.max_fd_residual() <= FD_BOUND
            && self.max_quad_residual() <= QUAD_BOUND
    }
}

/// Check `d/dx F_{n+1} = σ F_n` by central differences and `F_{n+1}` against
/// its quadrature lift, for `n = 1..=n_max` at every grid point.
pub fn verify_recursion(
    family: &Family,
    n_max: u32,
    grid: &[f64],
    prec: &Precision,
) -> Result<RecursionReport> {
    if n_max < 2 {
        return Err(Error::Domain("verify_recursion needs n_max >= 2".into()));
    }
    let mut levels = Vec::new();
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let level = n + 1;
        let sign = family.recursion_sign(level);
        let mut fd_residual: f64 = 0.0;
        let mut quad_residual: f64 = 0.0;
        for &x in grid {
            let fd = (|| -> Result<f64> {
                let up = family.eval(level, x + FD_STEP, prec)?.value;
                let down = family.eval(level, x - FD_STEP, prec)?.value;
                let below = family.eval(n, x, prec)?.value;
                Ok(((up - down) / (2.0 * FD_STEP) - sign * below).abs())
            })();
            match fd {
                Ok(r) => fd_residual = fd_residual.max(r),
                Err(e) => {
                    fd_residual = f64::INFINITY;
                    failures.push(format!("level {level}, x = {x}, difference check: {e}"));
                }
            }
            let quad = (|| -> Result<f64> {
                let lifted = lift_level(family, level, x, prec)?;
                Ok((lifted - family.eval(level, x, prec)?.value).abs())
            })();
            match quad {
                Ok(r) => quad_residual = quad_residual.max(r),
                Err(e) => {
                    quad_residual = f64::INFINITY;
                    failures.push(format!("level {level}, x = {x}, quadrature check: {e}"));
                }
            }
        }
        levels.push(LevelResidual {
            level,
            sign,
            fd_residual,
            quad_residual,
        });
    }
    Ok(RecursionReport {
        family: family.name(),
        levels,
        failures,
    })
}
