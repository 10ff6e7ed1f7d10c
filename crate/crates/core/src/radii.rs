//! Radius problems and inclusion constants for the class.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::scan_then_golden;
use crate::roots::{bisect_newton, RootError, RootResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadiusError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("parameter {param} out of range for {kind}: {expected}")]
    InvalidParameter {
        kind: RadiusKind,
        param: f64,
        expected: &'static str,
    },
    #[error("unknown radius kind {0:?}")]
    UnknownKind(String),
    #[error("ellipse needs k > 1, got {0}")]
    NotAnEllipse(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusKind {
    StarlikeOrder,
    MuBeta,
    Convexity,
    MStarlike,
}

impl RadiusKind {
    pub const ALL: [RadiusKind; 4] = [
        RadiusKind::StarlikeOrder,
        RadiusKind::MuBeta,
        RadiusKind::Convexity,
        RadiusKind::MStarlike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RadiusKind::StarlikeOrder => "starlike_order",
            RadiusKind::MuBeta => "mu_beta",
            RadiusKind::Convexity => "convexity",
            RadiusKind::MStarlike => "m_starlike",
        }
    }

    /// The defining equation `F(r) = 0` for parameter `param`.
    pub fn equation(self, param: f64, r: f64) -> f64 {
        match self {
            RadiusKind::StarlikeOrder => (1.0 - r) - param * r.cos(),
            RadiusKind::MuBeta => 1.0 + r - param * r.cos(),
            RadiusKind::Convexity => {
                (1.0 - r).powi(2) - (r + param * (1.0 - r)) * r.cos() - r * (1.0 - r) * r.sin()
            }
            RadiusKind::MStarlike => 1.0 - r - 2.0 * param * r.cos(),
        }
    }

    /// `dF/dr`.
    pub fn derivative(self, param: f64, r: f64) -> f64 {
        let (s, c) = r.sin_cos();
        match self {
            RadiusKind::StarlikeOrder => -1.0 + param * s,
            RadiusKind::MuBeta => 1.0 + param * s,
            RadiusKind::Convexity => {
                -2.0 * (1.0 - r) - (1.0 - param) * c + (r + param * (1.0 - r)) * s
                    - (1.0 - 2.0 * r) * s
                    - r * (1.0 - r) * c
            }
            RadiusKind::MStarlike => -1.0 + 2.0 * param * s,
        }
    }
}

impl fmt::Display for RadiusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadiusKind {
    type Err = RadiusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadiusKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| RadiusError::UnknownKind(s.to_string()))
    }
}

fn saturated() -> RootResult {
    RootResult {
        r: 1.0,
        residual: 0.0,
        bracket: (1.0, 1.0),
        iterations: 0,
    }
}

/// Solves the radius equation of `kind` on `[0, 1]`.
///
/// `mu_beta` returns `r = 1` once `β ≥ 2/cos 1`, and `m_starlike` once
/// `M ≥ 1/2`; in both cases the defining inequality holds on the whole disk.
pub fn solve_radius(kind: RadiusKind, param: f64) -> Result<RootResult, RadiusError> {
    let invalid = |expected| {
        Err(RadiusError::InvalidParameter {
            kind,
            param,
            expected,
        })
    };
    match kind {
        RadiusKind::StarlikeOrder | RadiusKind::Convexity if !(0.0..1.0).contains(&param) => {
            return invalid("alpha in [0, 1)")
        }
        RadiusKind::MuBeta if !(param > 1.0 && param.is_finite()) => return invalid("beta > 1"),
        RadiusKind::MuBeta if param >= 2.0 / 1f64.cos() => return Ok(saturated()),
        RadiusKind::MStarlike if !(param > 0.0 && param.is_finite()) => return invalid("M > 0"),
        RadiusKind::MStarlike if param >= 0.5 => return Ok(saturated()),
        _ => {}
    }
    Ok(bisect_newton(
        |r| kind.equation(param, r),
        |r| kind.derivative(param, r),
        0.0,
        1.0,
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub k: f64,
    pub x0: f64,
    pub u: f64,
    pub v: f64,
}

/// Boundary of `{Re w > k|w - 1|}` for `k > 1` in centre/semi-axis form.
pub fn ellipse(k: f64) -> Result<Ellipse, RadiusError> {
    if !(k > 1.0) {
        return Err(RadiusError::NotAnEllipse(k));
    }
    let d = k * k - 1.0;
    Ok(Ellipse {
        k,
        x0: k * k / d,
        u: k / d,
        v: 1.0 / d.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionConstants {
    /// `4 cos 1/(4 cos 1 - cos 2 - 1)`
    pub kst_threshold: f64,
    /// `2/cos 1`
    pub mu_beta_threshold: f64,
    /// `4 cos 1/(1 + cos 2)`, equal to the previous by a double-angle identity.
    pub mu_beta_threshold_alt: f64,
    pub ellipse_at_threshold: Ellipse,
    /// `x_0 + u` at the threshold; the rightmost point of the ellipse.
    pub ellipse_right_end: f64,
}

pub fn inclusion_constants() -> InclusionConstants {
    let c1 = 1f64.cos();
    let kst_threshold = 4.0 * c1 / (4.0 * c1 - 2f64.cos() - 1.0);
    let e = ellipse(kst_threshold).expect("threshold exceeds 1");
    InclusionConstants {
        kst_threshold,
        mu_beta_threshold: 2.0 / c1,
        mu_beta_threshold_alt: 4.0 * c1 / (1.0 + 2f64.cos()),
        ellipse_at_threshold: e,
        ellipse_right_end: e.x0 + e.u,
    }
}

/// `T(θ)` written out in real form: the smallest `a` with
/// `Re w + a > |w - a|` at `w = φ(e^{iθ})`.
pub fn t_parabola(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let num = (c + 1.0) * s.sinh() * c.sin() + s * c.cos() * s.cosh();
    let den = 2.0
        * ((2.0 * c).cos() + (2.0 * s).cosh())
        * ((c + 1.0) * c.cos() * s.cosh() - s * s.sinh() * c.sin());
    num * num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaConstant {
    pub theta0: f64,
    pub a0: f64,
}

/// Maximizes `T` on `[0, π]` by a scan of `samples` points (at least 1024)
/// and golden-section refinement.
pub fn stp_constant(samples: usize) -> ParabolaConstant {
    let (theta0, a0) = scan_then_golden(t_parabola, 0.0, PI, samples.max(1024), 1e-12);
    ParabolaConstant { theta0, a0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{phi_eval, radial_real_range};
    use num_complex::Complex64;

    #[test]
    fn starlike_order_edges() {
        let r = solve_radius(RadiusKind::StarlikeOrder, 0.0).unwrap();
        assert_eq!((r.r, r.residual), (1.0, 0.0));
        let r = solve_radius(RadiusKind::StarlikeOrder, 0.5).unwrap();
        assert!(r.residual < 1e-12);
        assert!((RadiusKind::StarlikeOrder.equation(0.5, r.r)).abs() < 1e-12);
        assert!(r.bracket.0 <= r.r && r.r <= r.bracket.1);
        assert!(solve_radius(RadiusKind::StarlikeOrder, 1.0).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for kind in RadiusKind::ALL {
            for &param in &[0.2, 0.45, 1.5] {
                for i in 1..10 {
                    let r = i as f64 / 10.0;
                    let h = 1e-6;
                    let fd =
                        (kind.equation(param, r + h) - kind.equation(param, r - h)) / (2.0 * h);
                    assert!(
                        (fd - kind.derivative(param, r)).abs() < 1e-7,
                        "{kind} {param} {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn mu_beta_and_m_starlike() {
        let r = solve_radius(RadiusKind::MuBeta, 2.0).unwrap();
        assert!(r.residual < 1e-12 && r.r > 0.0 && r.r < 1.0);
        assert_eq!(solve_radius(RadiusKind::MuBeta, 3.8).unwrap().r, 1.0);
        assert!(solve_radius(RadiusKind::MuBeta, 1.0).is_err());
        assert_eq!(solve_radius(RadiusKind::MStarlike, 0.5).unwrap().r, 1.0);
        // the root of 1 - r - 2M cos r falls as M grows
        let mut last = f64::INFINITY;
        for i in 1..10 {
            let r = solve_radius(RadiusKind::MStarlike, 0.05 * i as f64).unwrap();
            assert!(r.r < last && r.residual < 1e-12);
            last = r.r;
        }
    }

    #[test]
    fn starlike_order_monotone_and_consistent() {
        let mut last = f64::INFINITY;
        for i in 0..11 {
            let alpha = 0.09 * i as f64;
            let r = solve_radius(RadiusKind::StarlikeOrder, alpha).unwrap();
            assert!(r.r < last);
            last = r.r;
            if r.r > 0.02 {
                let inner = radial_real_range(r.r - 0.01).unwrap();
                assert!(inner.lower > alpha);
            }
        }
    }

    #[test]
    fn convexity_root() {
        let r = solve_radius(RadiusKind::Convexity, 0.0).unwrap();
        assert!(RadiusKind::Convexity.equation(0.0, r.r).abs() < 1e-12);
        assert!((r.r - 0.3564772).abs() < 1e-6);
    }

    #[test]
    fn inclusion_identities() {
        let ic = inclusion_constants();
        assert!((ic.mu_beta_threshold - ic.mu_beta_threshold_alt).abs() < 1e-14);
        let k = ic.kst_threshold;
        assert!((ic.ellipse_right_end - k / (k - 1.0)).abs() < 1e-12);
        assert!((ic.ellipse_right_end - ic.mu_beta_threshold).abs() < 1e-9);
        assert!(ellipse(1.0).is_err());
        let e = ellipse(2.0).unwrap();
        // a point on the ellipse satisfies Re w = k|w - 1|
        let w = Complex64::new(e.x0 + e.u * 0.6, e.v * 0.8);
        assert!((w.re - 2.0 * (w - 1.0).norm()).abs() < 1e-12);
    }

    #[test]
    fn parabola_constant() {
        assert_eq!(t_parabola(0.0), 0.0);
        // oracle: T = (Im w)^2/(4 Re w) on the circle
        for i in 1..50 {
            let t = -3.0 + 6.0 * i as f64 / 50.0;
            let w = phi_eval(Complex64::from_polar(1.0, t));
            assert!((t_parabola(t) - w.im * w.im / (4.0 * w.re)).abs() < 1e-12);
        }
        let c = stp_constant(4096);
        assert!((c.a0 - 0.402301).abs() < 1e-3);
        assert!((c.theta0 - 0.665124).abs() < 1e-3);
        let neg = scan_then_golden(|t| t_parabola(-t), 0.0, PI, 4096, 1e-12);
        assert!((neg.1 - c.a0).abs() < 1e-9);
    }
}
