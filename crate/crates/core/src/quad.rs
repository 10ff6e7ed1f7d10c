//! Adaptive Simpson quadrature for complex-valued integrands on `[a, b]`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("adaptive Simpson did not converge on [{a}, {b}] within depth {max_depth}")]
pub struct QuadratureError {
    pub a: f64,
    pub b: f64,
    pub max_depth: u32,
}

pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Complex64, QuadratureError>
where
    F: Fn(f64) -> Complex64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    step(&f, a, b, fa, fm, fb, whole, tol, max_depth).ok_or(QuadratureError { a, b, max_depth })
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Option<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        // Richardson correction
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_oscillatory() {
        let v = adaptive_simpson(|x| Complex64::new(x * x * x, 0.0), 0.0, 2.0, 1e-12, 40).unwrap();
        assert!((v.re - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(
            |x| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            1e-12,
            40,
        )
        .unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let err = adaptive_simpson(
            |x| Complex64::new(1.0 / x.abs().max(1e-300).sqrt(), 0.0),
            -1.0,
            1.0,
            1e-14,
            3,
        );
        assert!(err.is_err());
    }
}
