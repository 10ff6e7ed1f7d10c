//! Class members and the extremal functions `f_n` defined by
//! `z f_n'/f_n = φ(z^{n-1})`, plus the growth, distortion and rotation
//! envelopes built from `f̃ = f_2`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::HerglotzMeasure;
use crate::generator::phi_series;
use crate::optim::scan_then_golden;
use crate::series::{exp_integral_lift, PowerSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtremalError {
    #[error("extremal index n = {0} must be at least 2")]
    IndexTooSmall(usize),
    #[error("truncation order {order} must be at least n = {n}")]
    OrderTooSmall { n: usize, order: usize },
    #[error("radius {0} outside [0, 1)")]
    RadiusOutOfRange(f64),
    #[error("member must have c0 = 0 and c1 = 1, found c0 = {c0}, c1 = {c1}")]
    NotNormalized { c0: Complex64, c1: Complex64 },
    #[error("series did not converge at r = {r}: tail {tail:e}")]
    NoConvergence { r: f64, tail: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Extremal { n: usize },
    Herglotz { measure: HerglotzMeasure },
    Manual,
}

/// A normalized analytic function `z + a_2 z^2 + ...` given by its truncated
/// coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMember {
    coeffs: PowerSeries,
    provenance: Provenance,
}

impl ClassMember {
    pub fn new(coeffs: PowerSeries, provenance: Provenance) -> Result<Self, ExtremalError> {
        let (c0, c1) = (coeffs.coeff(0), coeffs.coeff(1));
        if coeffs.order() < 1 || c0 != Complex64::new(0.0, 0.0) || c1 != Complex64::new(1.0, 0.0) {
            return Err(ExtremalError::NotNormalized { c0, c1 });
        }
        Ok(Self { coeffs, provenance })
    }

    /// `f(z) = z` at the given order.
    pub fn identity(order: usize) -> Self {
        let coeffs = PowerSeries::monomial(Complex64::new(1.0, 0.0), 1, order.max(1));
        Self {
            coeffs,
            provenance: Provenance::Manual,
        }
    }

    pub fn series(&self) -> &PowerSeries {
        &self.coeffs
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    /// `a_n` (zero beyond the truncation order).
    pub fn a(&self, n: usize) -> Complex64 {
        self.coeffs.coeff(n)
    }

    /// `z f'(z)/f(z)` as a series of the same order.
    pub fn log_derivative_series(&self) -> Result<PowerSeries, SeriesError> {
        // z f'/f = f' / (f/z); the top coefficient is lost to the shifts
        self.coeffs.derivative().div(&self.coeffs.shift_down())
    }
}

/// `f_n` through `(k-1) a_k = Σ_{j=1}^{k-1} q_{k-j} a_j` with
/// `q = φ(z^{n-1})`.
pub fn build_extremal(n: usize, order: usize) -> Result<ClassMember, ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::IndexTooSmall(n));
    }
    if order < n {
        return Err(ExtremalError::OrderTooSmall { n, order });
    }
    let q = extremal_q(n, order);
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    a[1] = Complex64::new(1.0, 0.0);
    for k in 2..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..k {
            acc += q.coeff(k - j) * a[j];
        }
        a[k] = acc / (k - 1) as f64;
    }
    ClassMember::new(PowerSeries::new(a), Provenance::Extremal { n })
}

/// `φ(z^{n-1})` at the given order, built by substitution.
pub fn extremal_q(n: usize, order: usize) -> PowerSeries {
    let inner = PowerSeries::monomial(Complex64::new(1.0, 0.0), n - 1, order);
    phi_series(order)
        .compose(&inner)
        .expect("inner has zero constant term")
}

/// The same `f_n` through the exponential-integral route, for cross-checks.
pub fn build_extremal_by_lift(n: usize, order: usize) -> Result<ClassMember, ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::IndexTooSmall(n));
    }
    let f = exp_integral_lift(&extremal_q(n, order))?;
    ClassMember::new(f, Provenance::Extremal { n })
}

const BASE_ORDER: usize = 64;
const CHECK_ORDER: usize = 48;
const MAX_ORDER: usize = 256;
const TAIL_TOLERANCE: f64 = 1e-10;

/// `f̃` at the largest order in use; coefficients do not depend on the
/// truncation order, so lower orders are exact slices of this one.
fn f_tilde() -> &'static ClassMember {
    static CACHE: OnceLock<ClassMember> = OnceLock::new();
    CACHE.get_or_init(|| build_extremal(2, MAX_ORDER).expect("valid extremal"))
}

/// Evaluates `f̃^{(deriv)}` at `z` with the smallest series order whose
/// tail estimate (difference to a lower order) falls below tolerance.
fn eval_converged(z: Complex64, derivative: bool) -> Result<(Complex64, f64), ExtremalError> {
    let full = f_tilde().series();
    let base = if derivative {
        full.derivative()
    } else {
        full.clone()
    };
    let (mut lo, mut hi) = (CHECK_ORDER, BASE_ORDER);
    loop {
        let v_hi = base.truncate(hi).evaluate(z);
        let v_lo = base.truncate(lo).evaluate(z);
        let tail = (v_hi - v_lo).norm();
        if tail < TAIL_TOLERANCE {
            return Ok((v_hi, tail));
        }
        if hi * 3 / 2 > MAX_ORDER - 1 {
            return Err(ExtremalError::NoConvergence { r: z.norm(), tail });
        }
        lo = hi;
        hi = hi * 3 / 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lower: f64,
    pub upper: f64,
    /// Largest observed series tail estimate.
    pub tail: f64,
}

fn check_radius(r: f64) -> Result<(), ExtremalError> {
    if !(0.0..1.0).contains(&r) {
        return Err(ExtremalError::RadiusOutOfRange(r));
    }
    Ok(())
}

/// `(-f̃(-r), f̃(r))`: bounds on `|f(z)|` over `|z| = r`.
pub fn growth_envelope(r: f64) -> Result<Envelope, ExtremalError> {
    check_radius(r)?;
    let (minus, t1) = eval_converged(Complex64::new(-r, 0.0), false)?;
    let (plus, t2) = eval_converged(Complex64::new(r, 0.0), false)?;
    Ok(Envelope {
        lower: -minus.re,
        upper: plus.re,
        tail: t1.max(t2),
    })
}

/// `(f̃'(-r), f̃'(r))`: bounds on `|f'(z)|` over `|z| = r`.
pub fn distortion_envelope(r: f64) -> Result<Envelope, ExtremalError> {
    check_radius(r)?;
    let (minus, t1) = eval_converged(Complex64::new(-r, 0.0), true)?;
    let (plus, t2) = eval_converged(Complex64::new(r, 0.0), true)?;
    Ok(Envelope {
        lower: minus.re,
        upper: plus.re,
        tail: t1.max(t2),
    })
}

/// `max_{|z| = r} |arg(f̃(z)/z)|`.
pub fn rotation_bound(r: f64, samples: usize) -> Result<f64, ExtremalError> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let quotient = f_tilde().series().shift_down().truncate(BASE_ORDER);
    let arg_at = |theta: f64| {
        quotient
            .evaluate(Complex64::from_polar(r, theta))
            .arg()
            .abs()
    };
    let (_, best) = scan_then_golden(arg_at, -PI, PI, samples.max(256), 1e-12);
    Ok(best)
}

/// Continued-fraction rational approximation `p/q` of `x` with `q <= max_den`
/// and `|x - p/q| <= tol`, when one exists.
pub fn rational_guess(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..40 {
        let a = rest.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = rest - a as f64;
        if frac.abs() < 1e-300 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}
