//! Truncated power series with complex coefficients.
//!
//! A [`PowerSeries`] of order `N` carries the coefficients `c_0..=c_N` of a
//! Maclaurin expansion. Every binary operation requires both operands to have
//! the same order; mismatches are reported rather than silently padded.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Divisors whose constant term is smaller than this are rejected.
pub const SINGULAR_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("division by a series with (near-)zero constant term {0}")]
    SingularDivisor(Complex64),
    #[error("composition requires an inner series with zero constant term, found {0}")]
    NonzeroInnerConstant(Complex64),
    #[error("expected constant term {expected}, found {found}")]
    ConstantTerm {
        expected: Complex64,
        found: Complex64,
    },
    #[error("logarithm of a series with zero constant term")]
    LogOfZero,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// Named Maclaurin building blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Elementary {
    Cos,
    Sin,
    Exp,
    /// `1/(1 - z)`
    Geometric,
    /// `z`
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from `c_0..=c_N`. An empty input yields the zero
    /// series of order 0.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zeros(0);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    /// `c * z^k` truncated at `order` (zero if `k > order`).
    pub fn monomial(c: Complex64, k: usize, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn elementary(kind: Elementary, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        match kind {
            Elementary::Geometric => coeffs.iter_mut().for_each(|c| c.re = 1.0),
            Elementary::Identity => {
                if order >= 1 {
                    coeffs[1].re = 1.0;
                }
            }
            Elementary::Exp | Elementary::Cos | Elementary::Sin => {
                let mut fact = 1.0;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    let inv = 1.0 / fact;
                    c.re = match kind {
                        Elementary::Exp => inv,
                        Elementary::Cos if k % 2 == 0 => {
                            if (k / 2) % 2 == 0 {
                                inv
                            } else {
                                -inv
                            }
                        }
                        Elementary::Sin if k % 2 == 1 => {
                            if (k / 2) % 2 == 0 {
                                inv
                            } else {
                                -inv
                            }
                        }
                        _ => 0.0,
                    };
                }
            }
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Same coefficients re-truncated (or zero-extended) to `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Series quotient `self / other` by forward substitution.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let b0 = other.coeffs[0];
        if b0.norm() <= SINGULAR_THRESHOLD {
            return Err(SeriesError::SingularDivisor(b0));
        }
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= other.coeffs[j] * out[k - j];
            }
            out[k] = acc / b0;
        }
        Ok(Self { coeffs: out })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(Complex64::new(1.0, 0.0), self.order()).div(self)
    }

    /// Term-wise derivative; the top coefficient becomes zero so the order is
    /// preserved.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            out[k - 1] = self.coeffs[k] * k as f64;
        }
        Self { coeffs: out }
    }

    /// Term-wise antiderivative with zero constant; `c_N z^{N+1}/(N+1)` falls
    /// off the truncation.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            out[k] = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs: out }
    }

    /// `(self - c_0) / z`; the top coefficient is unknown and set to zero.
    pub fn shift_down(&self) -> Self {
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[..n].copy_from_slice(&self.coeffs[1..]);
        Self { coeffs: out }
    }

    /// `z * self`, dropping the top coefficient.
    pub fn shift_up(&self) -> Self {
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[1..].copy_from_slice(&self.coeffs[..n]);
        Self { coeffs: out }
    }

    /// `exp(self)` through the recurrence `k g_k = sum_j j f_j g_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
        g[0] = self.coeffs[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * g[k - j] * j as f64;
            }
            g[k] = acc / k as f64;
        }
        Self { coeffs: g }
    }

    /// Principal logarithm, from `f h' = f'`.
    pub fn log(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0.norm() <= SINGULAR_THRESHOLD {
            return Err(SeriesError::LogOfZero);
        }
        let n = self.order();
        let mut h = vec![Complex64::new(0.0, 0.0); n + 1];
        h[0] = f0.ln();
        for k in 1..=n {
            let mut acc = self.coeffs[k] * k as f64;
            for j in 1..k {
                acc -= h[j] * self.coeffs[k - j] * j as f64;
            }
            h[k] = acc / (f0 * k as f64);
        }
        Ok(Self { coeffs: h })
    }

    /// `self ∘ inner` by Horner accumulation over powers of `inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if inner.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonzeroInnerConstant(inner.coeffs[0]));
        }
        let n = self.order();
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "{}{:+}i", c.re, c.im)?;
            }
        }
        write!(f, "]")
    }
}

/// Builds `f(z) = z exp ∫_0^z (q(t) - 1)/t dt` from `q` with `q(0) = 1`.
///
/// The result has `f_0 = 0`, `f_1 = 1` and satisfies `z f'/f = q` through
/// the truncation order.
pub fn exp_integral_lift(q: &PowerSeries) -> Result<PowerSeries> {
    let one = Complex64::new(1.0, 0.0);
    if (q.coeff(0) - one).norm() > 1e-12 {
        return Err(SeriesError::ConstantTerm {
            expected: one,
            found: q.coeff(0),
        });
    }
    let integrand = q.shift_down();
    Ok(integrand.integrate().exp().shift_up())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_coeffs(s: &PowerSeries, expected: &[f64], tol: f64) {
        assert_eq!(s.order() + 1, expected.len(), "{s}");
        for (k, (got, want)) in s.coeffs().iter().zip(expected).enumerate() {
            assert!((got - c(*want)).norm() <= tol, "coeff {k}: {got} vs {want}");
        }
    }

    #[test]
    fn elementary_series() {
        assert_coeffs(
            &PowerSeries::elementary(Elementary::Cos, 4),
            &[1.0, 0.0, -0.5, 0.0, 1.0 / 24.0],
            0.0,
        );
        assert_coeffs(
            &PowerSeries::elementary(Elementary::Sin, 5),
            &[0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0],
            1e-18,
        );
        assert_coeffs(
            &PowerSeries::elementary(Elementary::Identity, 2),
            &[0.0, 1.0, 0.0],
            0.0,
        );
        assert_coeffs(
            &PowerSeries::elementary(Elementary::Geometric, 3),
            &[1.0; 4],
            0.0,
        );
        assert_coeffs(
            &PowerSeries::elementary(Elementary::Identity, 0),
            &[0.0],
            0.0,
        );
    }

    #[test]
    fn products_and_quotients() {
        let one_plus_z = PowerSeries::from_real(&[1.0, 1.0, 0.0]);
        assert_coeffs(&one_plus_z.mul(&one_plus_z).unwrap(), &[1.0, 2.0, 1.0], 0.0);

        // Long division of (1+z) by cos z, done by hand.
        let num = PowerSeries::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let q = num
            .div(&PowerSeries::elementary(Elementary::Cos, 5))
            .unwrap();
        assert_coeffs(&q, &[1.0, 1.0, 0.5, 0.5, 5.0 / 24.0, 5.0 / 24.0], 1e-15);

        let f = PowerSeries::from_real(&[0.3, -1.0, 2.0, 0.25, 7.0]);
        let one_minus_z = PowerSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        let back = f
            .mul(&PowerSeries::elementary(Elementary::Geometric, 4))
            .unwrap()
            .mul(&one_minus_z)
            .unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-14);
    }

    #[test]
    fn order_mismatch_and_singular_divisor() {
        let a = PowerSeries::zeros(3);
        let b = PowerSeries::zeros(4);
        assert_eq!(
            a.mul(&b),
            Err(SeriesError::OrderMismatch { left: 3, right: 4 })
        );
        assert!(matches!(a.add(&b), Err(SeriesError::OrderMismatch { .. })));
        assert!(matches!(
            PowerSeries::from_real(&[1.0, 1.0]).div(&PowerSeries::from_real(&[0.0, 1.0])),
            Err(SeriesError::SingularDivisor(_))
        ));
    }

    #[test]
    fn composition() {
        let outer = PowerSeries::from_real(&[2.0, 3.0, -1.0, 4.0]);
        let out = outer.compose(&PowerSeries::zeros(3)).unwrap();
        assert_coeffs(&out, &[2.0, 0.0, 0.0, 0.0], 0.0);

        let exp = PowerSeries::elementary(Elementary::Exp, 8);
        let id = PowerSeries::elementary(Elementary::Identity, 8);
        assert_eq!(exp.compose(&id).unwrap(), exp);

        // (1+z)/cos z at z^2, substituted by hand.
        let phi = PowerSeries::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0])
            .div(&PowerSeries::elementary(Elementary::Cos, 5))
            .unwrap();
        let z2 = PowerSeries::monomial(c(1.0), 2, 5);
        assert_coeffs(
            &phi.compose(&z2).unwrap(),
            &[1.0, 0.0, 1.0, 0.0, 0.5, 0.0],
            1e-15,
        );

        assert!(matches!(
            outer.compose(&PowerSeries::from_real(&[0.1, 1.0, 0.0, 0.0])),
            Err(SeriesError::NonzeroInnerConstant(_))
        ));
    }

    #[test]
    fn lift_identity_and_errors() {
        let f = exp_integral_lift(&PowerSeries::constant(c(1.0), 4)).unwrap();
        assert_coeffs(&f, &[0.0, 1.0, 0.0, 0.0, 0.0], 0.0);
        assert!(matches!(
            exp_integral_lift(&PowerSeries::constant(c(2.0), 4)),
            Err(SeriesError::ConstantTerm { .. })
        ));
    }

    #[test]
    fn lift_matches_recurrence_oracle() {
        // (k-1) a_k = sum_{j<k} q_{k-j} a_j, evaluated independently.
        let q = PowerSeries::from_real(&[1.0, 0.0, 1.0, 0.0, 0.5, 0.0]);
        let mut a = vec![0.0, 1.0];
        for k in 2..=5 {
            let s: f64 = (1..k).map(|j| q.coeff(k - j).re * a[j]).sum();
            a.push(s / (k - 1) as f64);
        }
        assert_coeffs(&exp_integral_lift(&q).unwrap(), &a, 1e-15);
        assert_coeffs(
            &exp_integral_lift(&q).unwrap(),
            &[0.0, 1.0, 0.0, 0.5, 0.0, 0.25],
            1e-15,
        );
    }

    #[test]
    fn evaluation() {
        let s = PowerSeries::from_real(&[1.0, 1.0, 0.5]);
        assert_eq!(s.evaluate(c(0.0)), c(1.0));
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(PowerSeries::from_real(&[0.0, 1.0]).evaluate(i), i);
    }

    #[test]
    fn log_rejects_zero_constant() {
        assert_eq!(
            PowerSeries::from_real(&[0.0, 1.0]).log(),
            Err(SeriesError::LogOfZero)
        );
    }

    #[test]
    fn integrate_derivative_pairs() {
        let f = PowerSeries::from_real(&[0.0, 1.0, -2.0, 0.5, 3.0]);
        assert_eq!(f.derivative().integrate(), f);
        let g = PowerSeries::from_real(&[1.0, 2.0, 3.0, 4.0]);
        assert_coeffs(&g.integrate().derivative(), &[1.0, 2.0, 3.0, 0.0], 0.0);
    }
}
