//! Bracketed root finding on an interval: bisection followed by a Newton
//! polish that never leaves the bracket.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

/// A solved root with its residual and final bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootResult {
    pub r: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Finds a root of `f` in `[lo, hi]`. `df` is the derivative used for the
/// Newton polish.
pub fn bisect_newton<F, D>(f: F, df: D, lo: f64, hi: f64) -> Result<RootResult, RootError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(RootResult {
            r: a,
            residual: 0.0,
            bracket: (a, a),
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            r: b,
            residual: 0.0,
            bracket: (b, b),
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(RootError::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut iterations = 0;
    while b - a > 1e-9 * (1.0 + a.abs()) && iterations < 200 {
        iterations += 1;
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return Ok(RootResult {
                r: m,
                residual: 0.0,
                bracket: (m, m),
                iterations,
            });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }

    let mut r = 0.5 * (a + b);
    for _ in 0..50 {
        iterations += 1;
        let fr = f(r);
        if fr == 0.0 {
            break;
        }
        if fr.signum() == fa.signum() {
            a = r;
            fa = fr;
        } else {
            b = r;
        }
        let d = df(r);
        let mut next = r - fr / d;
        if !(next > a && next < b) || !next.is_finite() {
            next = 0.5 * (a + b);
        }
        if next == r || b - a <= f64::EPSILON * r.abs().max(1.0) {
            r = next;
            break;
        }
        r = next;
    }
    Ok(RootResult {
        r,
        residual: f(r).abs(),
        bracket: (a, b),
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let res = bisect_newton(|x| x * x - 2.0, |x| 2.0 * x, 0.0, 2.0).unwrap();
        assert!((res.r - 2f64.sqrt()).abs() < 1e-15);
        assert!(res.residual < 1e-15);
        assert!(res.bracket.0 <= res.r && res.r <= res.bracket.1);
    }

    #[test]
    fn endpoint_root_and_missing_sign_change() {
        let res = bisect_newton(|x| 1.0 - x, |_| -1.0, 0.0, 1.0).unwrap();
        assert_eq!(res.r, 1.0);
        assert_eq!(res.residual, 0.0);
        let err = bisect_newton(|x| x * x + 1.0, |x| 2.0 * x, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, RootError::NoSignChange { .. }));
    }
}
