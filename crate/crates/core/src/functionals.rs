//! Coefficient functionals of class members: Hankel and Hermitian-Toeplitz
//! determinants, the Fekete–Szegő functional, the area-type coefficient sum,
//! and the convolution criterion.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::ClassMember;
use crate::generator::{phi_eval, re_max};

/// Slack applied to every bound comparison.
pub const FLAG_TOLERANCE: f64 = 1e-9;

/// μ values at which the Fekete–Szegő functional is tabulated in reports.
pub const FS_GRID: [f64; 7] = [-1.0, 0.0, 0.25, 0.5, 1.0, 1.25, 2.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("member order {0} too small; need at least {1}")]
    OrderTooSmall(usize, usize),
    #[error("coefficient bound inapplicable for n = {0}: n^2 cos^2(1) - 4 <= 0")]
    CorollaryInapplicable(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFlags {
    pub a2: bool,
    pub a3: bool,
    pub a4: bool,
    pub a5: bool,
    pub h22: bool,
    pub h31: bool,
    pub t21: bool,
    pub t31: bool,
    pub fs: bool,
    pub coeff_sum: bool,
    pub convolution: Option<bool>,
}

impl BoundFlags {
    /// All flags except the fifth-coefficient one, which is reported but not
    /// enforced.
    pub fn enforced_pass(&self) -> bool {
        self.a2 && self.a3 && self.a4 && self.h22 && self.h31 && self.t21 && self.t31 && self.fs
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub a5: Complex64,
    pub h22: Complex64,
    pub h31: Complex64,
    pub t21: f64,
    pub t31: f64,
    /// `(μ, |a_3 - μ a_2^2|)` pairs.
    pub fs: Vec<(f64, f64)>,
    /// Computed from the available coefficients only.
    pub coeff_sum_margin: f64,
    pub convolution_margin: Option<f64>,
    pub flags: BoundFlags,
}

pub fn hankel_22(a2: Complex64, a3: Complex64, a4: Complex64) -> Complex64 {
    a2 * a4 - a3 * a3
}

pub fn hankel_31(a2: Complex64, a3: Complex64, a4: Complex64, a5: Complex64) -> Complex64 {
    a3 * (a2 * a4 - a3 * a3) - a4 * (a4 - a2 * a3) + a5 * (a3 - a2 * a2)
}

pub fn toeplitz_21(a2: Complex64) -> f64 {
    1.0 - a2.norm_sqr()
}

pub fn toeplitz_31(a2: Complex64, a3: Complex64) -> f64 {
    1.0 - 2.0 * a2.norm_sqr() + 2.0 * (a2 * a2 * a3.conj()).re - a3.norm_sqr()
}

pub fn fekete_szego(a2: Complex64, a3: Complex64, mu: f64) -> f64 {
    (a3 - a2 * a2 * mu).norm()
}

/// Sharp bound on `|a_3 - μ a_2^2|` over the class.
pub fn fs_bound(mu: f64) -> f64 {
    if mu < 0.25 {
        0.75 - mu
    } else if mu <= 1.25 {
        0.5
    } else {
        mu - 0.75
    }
}

/// `(4 - cos^2 1) - Σ_{n=2}^{N} (n^2 cos^2 1 - 4)|a_n|^2` over the
/// available coefficients.
pub fn coefficient_sum_margin(f: &ClassMember) -> Result<f64, FunctionalError> {
    if f.order() < 2 {
        return Err(FunctionalError::OrderTooSmall(f.order(), 2));
    }
    let k1 = 1f64.cos().powi(2);
    let sum: f64 = (2..=f.order())
        .map(|n| ((n * n) as f64 * k1 - 4.0) * f.a(n).norm_sqr())
        .sum();
    Ok(4.0 - k1 - sum)
}

/// `sqrt((4 - cos^2 1)/(n^2 cos^2 1 - 4))`, defined once the denominator is
/// positive (n ≥ 4).
pub fn an_bound(n: usize) -> Result<f64, FunctionalError> {
    let k1 = 1f64.cos().powi(2);
    let den = (n * n) as f64 * k1 - 4.0;
    if den <= 0.0 {
        return Err(FunctionalError::CorollaryInapplicable(n));
    }
    Ok(((4.0 - k1) / den).sqrt())
}

pub fn compute_report(f: &ClassMember) -> Result<FunctionalReport, FunctionalError> {
    if f.order() < 5 {
        return Err(FunctionalError::OrderTooSmall(f.order(), 5));
    }
    let (a2, a3, a4, a5) = (f.a(2), f.a(3), f.a(4), f.a(5));
    let h22 = hankel_22(a2, a3, a4);
    let h31 = hankel_31(a2, a3, a4, a5);
    let t21 = toeplitz_21(a2);
    let t31 = toeplitz_31(a2, a3);
    let fs: Vec<(f64, f64)> = FS_GRID
        .iter()
        .map(|&mu| (mu, fekete_szego(a2, a3, mu)))
        .collect();
    let coeff_sum_margin = coefficient_sum_margin(f)?;
    let tol = FLAG_TOLERANCE;
    let flags = BoundFlags {
        a2: a2.norm() <= 1.0 + tol,
        a3: a3.norm() <= 0.75 + tol,
        a4: a4.norm() <= 7.0 / 12.0 + tol,
        a5: a5.norm() <= 1.0 / 3.0 + tol,
        h22: h22.norm() <= 0.25 + tol,
        h31: h31.norm() <= 1.0 / 9.0 + tol,
        t21: (-tol..=1.0 + tol).contains(&t21),
        t31: (-1.0 / 15.0 - tol..=1.0 + tol).contains(&t31),
        fs: fs.iter().all(|&(mu, v)| v <= fs_bound(mu) + tol),
        coeff_sum: coeff_sum_margin >= -tol,
        convolution: None,
    };
    Ok(FunctionalReport {
        a2,
        a3,
        a4,
        a5,
        h22,
        h31,
        t21,
        t31,
        fs,
        coeff_sum_margin,
        convolution_margin: None,
        flags,
    })
}

/// Report including the (more expensive) convolution margin.
pub fn compute_report_with_convolution(
    f: &ClassMember,
    grid: ConvolutionGrid,
) -> Result<FunctionalReport, FunctionalError> {
    let mut report = compute_report(f)?;
    let margin = convolution_margin(f, grid).margin;
    report.convolution_margin = Some(margin);
    report.flags.convolution = Some(margin > FLAG_TOLERANCE);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvolutionGrid {
    pub theta_samples: usize,
    pub radii: usize,
    pub angles: usize,
}

impl Default for ConvolutionGrid {
    fn default() -> Self {
        Self {
            theta_samples: 720,
            radii: 24,
            angles: 96,
        }
    }
}

pub const CONVOLUTION_MAX_RADIUS: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionMargin {
    pub margin: f64,
    pub theta: f64,
    pub z: Complex64,
}

/// `1 + Σ_{n≥2} (n - w) a_n z^{n-1} - w` with `w = φ(e^{iθ})`.
fn convolution_expr(f: &ClassMember, w: Complex64, z: Complex64) -> Complex64 {
    // Horner over n = order..2 of (n - w) a_n, then times z
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (2..=f.order()).rev() {
        acc = acc * z + (Complex64::new(n as f64, 0.0) - w) * f.a(n);
    }
    Complex64::new(1.0, 0.0) + acc * z - w
}

/// Infimum of `|1 + Σ (n - φ(e^{iθ})) a_n z^{n-1} - φ(e^{iθ})|` over a θ
/// grid and a polar z grid reaching `|z| = 0.99`, refined once around the
/// minimizing cell.
pub fn convolution_margin(f: &ClassMember, grid: ConvolutionGrid) -> ConvolutionMargin {
    let theta_step = 2.0 * PI / grid.theta_samples as f64;
    let radius_step = CONVOLUTION_MAX_RADIUS / grid.radii as f64;
    let angle_step = 2.0 * PI / grid.angles as f64;
    let ws: Vec<(f64, Complex64)> = (0..grid.theta_samples)
        .map(|i| {
            let t = -PI + theta_step * i as f64;
            (t, phi_eval(Complex64::from_polar(1.0, t)))
        })
        .collect();

    let mut best = ConvolutionMargin {
        margin: f64::INFINITY,
        theta: 0.0,
        z: Complex64::new(0.0, 0.0),
    };
    let mut best_cell = (0.0, 0.0, 0.0);
    for ri in 0..=grid.radii {
        let r = radius_step * ri as f64;
        let angle_count = if ri == 0 { 1 } else { grid.angles };
        for ai in 0..angle_count {
            let alpha = angle_step * ai as f64;
            let z = Complex64::from_polar(r, alpha);
            for &(t, w) in &ws {
                let v = convolution_expr(f, w, z).norm();
                if v < best.margin {
                    best = ConvolutionMargin {
                        margin: v,
                        theta: t,
                        z,
                    };
                    best_cell = (t, r, alpha);
                }
            }
        }
    }

    let (t0, r0, a0) = best_cell;
    const FINE: i32 = 10;
    for i in -FINE..=FINE {
        let t = t0 + theta_step * i as f64 / FINE as f64;
        let w = phi_eval(Complex64::from_polar(1.0, t));
        for j in -FINE..=FINE {
            let r = (r0 + radius_step * j as f64 / FINE as f64).clamp(0.0, CONVOLUTION_MAX_RADIUS);
            for k in -FINE..=FINE {
                let alpha = a0 + angle_step * k as f64 / FINE as f64;
                let z = Complex64::from_polar(r, alpha);
                let v = convolution_expr(f, w, z).norm();
                if v < best.margin {
                    best = ConvolutionMargin {
                        margin: v,
                        theta: t,
                        z,
                    };
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientCheck {
    /// `sup_θ Σ |n - φ(e^{iθ})| |a_n| + M`
    pub lhs: f64,
    pub holds: bool,
}

/// Sufficient coefficient condition `Σ |n - φ(e^{iθ})||a_n| + M < 1` with
/// `M = 4 cos 1/(1 + cos 2)`. Since `M > 1` it can never hold.
pub fn sufficient_coefficient_check(f: &ClassMember, theta_samples: usize) -> SufficientCheck {
    let m = 4.0 * 1f64.cos() / (1.0 + 2f64.cos());
    let step = 2.0 * PI / theta_samples.max(1) as f64;
    let sup = (0..theta_samples.max(1))
        .map(|i| {
            let w = phi_eval(Complex64::from_polar(1.0, -PI + step * i as f64));
            (2..=f.order())
                .map(|n| (Complex64::new(n as f64, 0.0) - w).norm() * f.a(n).norm())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let lhs = sup + m;
    debug_assert!((m - re_max()).abs() < 1e-12);
    SufficientCheck {
        lhs,
        holds: lhs < 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::build_extremal;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_member() {
        let r = compute_report(&ClassMember::identity(8)).unwrap();
        assert_eq!(r.h22, c(0.0));
        assert_eq!(r.h31, c(0.0));
        assert_eq!(r.t21, 1.0);
        assert_eq!(r.t31, 1.0);
        assert!(r.flags.enforced_pass() && r.flags.a5 && r.flags.coeff_sum);
        let k1 = 1f64.cos().powi(2);
        assert!((r.coeff_sum_margin - (4.0 - k1)).abs() < 1e-15);
        assert!((r.coeff_sum_margin - 3.708_073).abs() < 1e-6);
    }

    #[test]
    fn extremal_members() {
        let ft = compute_report(&build_extremal(2, 8).unwrap()).unwrap();
        assert!((ft.h22 - c(1.0 / 48.0)).norm() < 1e-12);
        assert!(ft.t21.abs() < 1e-12);
        assert!((ft.t31 + 1.0 / 16.0).abs() < 1e-12);
        let fs0 = ft.fs.iter().find(|(mu, _)| *mu == 0.0).unwrap().1;
        assert!((fs0 - 0.75).abs() < 1e-12);
        assert!(!ft.flags.a5, "a5 = 5/12 exceeds 1/3");
        assert!(ft.flags.enforced_pass());

        let f3 = compute_report(&build_extremal(3, 8).unwrap()).unwrap();
        assert!((f3.h22 - c(-0.25)).norm() < 1e-12);
        let f4 = compute_report(&build_extremal(4, 8).unwrap()).unwrap();
        assert!((f4.h31 - c(-1.0 / 9.0)).norm() < 1e-12);
        // t21 recomputes from a2
        assert_eq!(f4.t21, toeplitz_21(f4.a2));
    }

    #[test]
    fn report_requires_order_five() {
        assert_eq!(
            compute_report(&ClassMember::identity(4)),
            Err(FunctionalError::OrderTooSmall(4, 5))
        );
    }

    #[test]
    fn fs_bound_branches() {
        assert_eq!(fs_bound(0.0), 0.75);
        assert_eq!(fs_bound(1.0), 0.5);
        assert_eq!(fs_bound(2.0), 1.25);
        assert_eq!(fs_bound(0.25), 0.5);
        assert_eq!(fs_bound(1.25), 0.5);
    }

    #[test]
    fn fs_at_extremal_on_grid() {
        let f = build_extremal(2, 8).unwrap();
        for i in 0..=100 {
            let mu = -1.0 + 4.0 * i as f64 / 100.0;
            assert!(
                fekete_szego(f.a(2), f.a(3), mu) <= fs_bound(mu) + 1e-9,
                "mu={mu}"
            );
        }
    }

    #[test]
    fn coefficient_bound_corollary() {
        let k1 = 1f64.cos().powi(2);
        let want = ((4.0 - k1) / (16.0 * k1 - 4.0)).sqrt();
        assert!((an_bound(4).unwrap() - want).abs() < 1e-15);
        assert_eq!(an_bound(3), Err(FunctionalError::CorollaryInapplicable(3)));
        assert_eq!(an_bound(2), Err(FunctionalError::CorollaryInapplicable(2)));
        let f = build_extremal(2, 8).unwrap();
        let margin = coefficient_sum_margin(&f).unwrap();
        // direct sum, written out
        let direct = 4.0
            - k1
            - (2..=8)
                .map(|n| ((n * n) as f64 * k1 - 4.0) * f.a(n).norm_sqr())
                .sum::<f64>();
        assert_eq!(margin, direct);
    }

    #[test]
    fn convolution_identity_member() {
        let grid = ConvolutionGrid {
            theta_samples: 360,
            radii: 4,
            angles: 8,
        };
        let m = convolution_margin(&ClassMember::identity(5), grid);
        let direct = (0..360)
            .map(|i| {
                (c(1.0)
                    - phi_eval(Complex64::from_polar(
                        1.0,
                        -PI + 2.0 * PI * i as f64 / 360.0,
                    )))
                .norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!(m.margin > 0.0);
        assert!(m.margin <= direct + 1e-15);
        assert!(!sufficient_coefficient_check(&ClassMember::identity(5), 360).holds);
    }

    #[test]
    fn convolution_extremal_positive() {
        let grid = ConvolutionGrid {
            theta_samples: 360,
            radii: 12,
            angles: 48,
        };
        let m = convolution_margin(&build_extremal(2, 32).unwrap(), grid);
        assert!(m.margin > 0.0, "{m:?}");
    }
}
