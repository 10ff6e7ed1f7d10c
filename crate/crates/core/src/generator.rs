//! The generating function `φ(z) = (1 + z)/cos z`, its Maclaurin series,
//! the geometry of its image of the unit disk, and the primitive
//! `g(z) = ∫_0^z (1 + t - cos t)/(t cos t) dt`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::optim::scan_then_golden;
use crate::quad::{adaptive_simpson, QuadratureError, DEFAULT_MAX_DEPTH};
use crate::series::{Elementary, PowerSeries};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("radius {0} outside [0, 1)")]
    RadiusOutOfRange(f64),
    #[error("point {0} lies outside the closed unit disk")]
    OutsideDisk(Complex64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Default boundary resolution of the image domain.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 4096;

/// Points closer than this to the sampled boundary are classified as on it.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;

/// Absolute tolerance of the `g` quadrature.
pub const G_TOLERANCE: f64 = 1e-10;

pub fn phi_eval(z: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) + z) / z.cos()
}

/// `2 sec 1`, the supremum of `Re φ` on the disk. Equals `4 cos 1/(1 + cos 2)`.
pub fn re_max() -> f64 {
    2.0 / 1f64.cos()
}

pub fn phi_series(order: usize) -> PowerSeries {
    let mut one_plus_z = PowerSeries::constant(Complex64::new(1.0, 0.0), order);
    if order >= 1 {
        one_plus_z = PowerSeries::from_real(&[1.0, 1.0]).truncate(order);
    }
    let sec = PowerSeries::elementary(Elementary::Cos, order)
        .recip()
        .expect("cos series has unit constant term");
    one_plus_z.mul(&sec).expect("equal orders")
}

/// `z φ'(z)/φ(z) = z/(1 + z) + z tan z`.
pub fn phi_log_derivative(z: Complex64) -> Complex64 {
    z / (Complex64::new(1.0, 0.0) + z) + z * z.tan()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialRange {
    pub lower: f64,
    pub upper: f64,
    /// Dense sampling of `Re φ` on `|z| = r` stayed inside `[lower, upper]`.
    pub verified: bool,
}

/// Range of `Re φ` on the circle `|z| = r`: `((1 - r)/cos r, (1 + r)/cos r)`.
pub fn radial_real_range(r: f64) -> Result<RadialRange, GeneratorError> {
    if !(0.0..1.0).contains(&r) {
        return Err(GeneratorError::RadiusOutOfRange(r));
    }
    let lower = (1.0 - r) / r.cos();
    let upper = (1.0 + r) / r.cos();
    let verified = circle_sample(r, DEFAULT_BOUNDARY_SAMPLES)
        .points
        .iter()
        .all(|(_, w)| w.re >= lower - 1e-9 && w.re <= upper + 1e-9);
    Ok(RadialRange {
        lower,
        upper,
        verified,
    })
}

/// `φ(r e^{iθ})` on `count` angles `θ_k = -π + 2πk/count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSample {
    pub radius: f64,
    pub points: Vec<(f64, Complex64)>,
}

impl CircleSample {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// `theta,re,im` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        for (theta, w) in &self.points {
            let _ = writeln!(out, "{theta:.16e},{:.16e},{:.16e}", w.re, w.im);
        }
        out
    }
}

pub fn circle_angle(k: usize, count: usize) -> f64 {
    -PI + 2.0 * PI * k as f64 / count as f64
}

pub fn circle_sample(radius: f64, count: usize) -> CircleSample {
    let points = (0..count)
        .into_par_iter()
        .map(|k| {
            let theta = circle_angle(k, count);
            (theta, phi_eval(Complex64::from_polar(radius, theta)))
        })
        .collect();
    CircleSample { radius, points }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiBounds {
    pub re_min: f64,
    pub re_max: f64,
    /// Supremum of |Im φ| on the circle.
    pub im_abs_max: f64,
    pub arg_abs_max: f64,
}

pub fn phi_global_bounds(samples: usize) -> PhiBounds {
    let samples = samples.max(256);
    let on_circle = |theta: f64| phi_eval(Complex64::from_polar(1.0, theta));
    let (_, im_abs_max) = scan_then_golden(|t| on_circle(t).im.abs(), -PI, PI, samples, 1e-12);
    let (_, arg_abs_max) = scan_then_golden(|t| on_circle(t).arg().abs(), -PI, PI, samples, 1e-12);
    PhiBounds {
        re_min: 0.0,
        re_max: re_max(),
        im_abs_max,
        arg_abs_max,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

/// Closed polyline through `φ(e^{iθ_k})`, used for point-in-domain tests.
/// The image domain is not convex, so membership is decided by winding
/// number.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    vertices: Vec<Complex64>,
    tolerance: f64,
}

impl BoundaryCurve {
    pub fn new(samples: usize) -> Self {
        Self::with_tolerance(samples, BOUNDARY_TOLERANCE)
    }

    pub fn with_tolerance(samples: usize, tolerance: f64) -> Self {
        let vertices = circle_sample(1.0, samples)
            .points
            .into_iter()
            .map(|(_, w)| w)
            .collect();
        Self {
            vertices,
            tolerance,
        }
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Winding number of the polyline about `w`.
    pub fn winding_number(&self, w: Complex64) -> i32 {
        let n = self.vertices.len();
        let mut wn = 0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let cross = (b.re - a.re) * (w.im - a.im) - (w.re - a.re) * (b.im - a.im);
            if a.im <= w.im {
                if b.im > w.im && cross > 0.0 {
                    wn += 1;
                }
            } else if b.im <= w.im && cross < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn distance(&self, w: Complex64) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| segment_distance(w, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn classify(&self, w: Complex64) -> Location {
        if self.distance(w) <= self.tolerance {
            Location::Boundary
        } else if self.winding_number(w) == 1 {
            Location::Inside
        } else {
            Location::Outside
        }
    }
}

fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (w - (a + ab * t)).norm()
}

/// True iff `w` lies strictly inside the sampled image `φ(D)`. Boundary
/// points report `false`; use [`BoundaryCurve::classify`] to tell them
/// apart from exterior points.
pub fn region_contains(w: Complex64, samples: usize) -> bool {
    BoundaryCurve::new(samples.max(1024)).classify(w) == Location::Inside
}

/// `(φ(t) - 1)/t = (1 + t - cos t)/(t cos t)`, continuous at 0 with value 1.
pub fn g_integrand(t: Complex64) -> Complex64 {
    if t.norm() < 1e-8 {
        return Complex64::new(1.0, 0.0) + t * 0.5;
    }
    let half_sin = (t * 0.5).sin();
    let numerator = t + half_sin * half_sin * 2.0;
    numerator / (t * t.cos())
}

/// `g(z)` by adaptive Simpson along the segment `[0, z]`.
pub fn g_eval(z: Complex64) -> Result<Complex64, GeneratorError> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(GeneratorError::OutsideDisk(z));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    let value = adaptive_simpson(
        |s| g_integrand(z * s) * z,
        0.0,
        1.0,
        G_TOLERANCE,
        DEFAULT_MAX_DEPTH,
    )?;
    Ok(value)
}

pub fn g_series(order: usize) -> PowerSeries {
    // one extra order so the shift does not lose the top coefficient
    let phi = phi_series(order + 1);
    let minus_one = phi
        .sub(&PowerSeries::constant(Complex64::new(1.0, 0.0), order + 1))
        .expect("orders");
    minus_one.shift_down().integrate().truncate(order)
}

/// Gudermannian `gd(x) = ∫_0^x sech t dt = 2 atan(tanh(x/2))`.
pub fn gudermannian(x: f64) -> f64 {
    2.0 * (0.5 * x).tanh().atan()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_eval(c(0.0, 0.0)), c(1.0, 0.0));
        assert!((phi_eval(c(1.0, 0.0)).re - re_max()).abs() < 1e-15);
        let cap = 4.0 * 1f64.cos() / (1.0 + 2f64.cos());
        assert!((phi_eval(c(1.0, 0.0)).re - cap).abs() < 1e-14);
        let at_i = phi_eval(c(0.0, 1.0));
        let expected = 1.0 / 1f64.cosh();
        assert!((at_i - c(expected, expected)).norm() < 1e-15);
    }

    #[test]
    fn phi_series_known_prefix() {
        let s = phi_series(5);
        let want = [1.0, 1.0, 0.5, 0.5, 5.0 / 24.0, 5.0 / 24.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s.coeff(k) - c(*w, 0.0)).norm() < 1e-15);
        }
        assert_eq!(phi_series(0).coeffs(), &[c(1.0, 0.0)]);
        let z = c(0.3, 0.0);
        assert!((phi_series(40).evaluate(z) - phi_eval(z)).norm() < 1e-10);
        let z = c(0.5, 0.0);
        assert!((phi_series(30).evaluate(z) - c(1.5 / 0.5f64.cos(), 0.0)).norm() < 1e-9);
    }

    #[test]
    fn radial_range() {
        let r0 = radial_real_range(0.0).unwrap();
        assert_eq!((r0.lower, r0.upper), (1.0, 1.0));
        let r = radial_real_range(0.5).unwrap();
        assert!((r.lower - 0.5 / 0.5f64.cos()).abs() < 1e-15);
        assert!((r.upper - 1.5 / 0.5f64.cos()).abs() < 1e-15);
        assert!(r.verified);
        let near = radial_real_range(1.0 - 1e-9).unwrap();
        assert!((near.upper - re_max()).abs() < 1e-8);
        assert!(matches!(
            radial_real_range(1.0),
            Err(GeneratorError::RadiusOutOfRange(_))
        ));
        assert!(matches!(
            radial_real_range(-0.1),
            Err(GeneratorError::RadiusOutOfRange(_))
        ));
    }

    #[test]
    fn radial_endpoints_attained_on_axis() {
        for &r in &[0.2, 0.5, 0.9] {
            let range = radial_real_range(r).unwrap();
            assert!((phi_eval(Complex64::from_polar(r, PI)).re - range.lower).abs() < 1e-9);
            assert!((phi_eval(Complex64::from_polar(r, 0.0)).re - range.upper).abs() < 1e-9);
        }
    }

    #[test]
    fn circle_sample_layout_and_csv() {
        let s = circle_sample(0.5, 8);
        assert_eq!(s.count(), 8);
        assert!(s.points.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(s.points[0].0, -PI);
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("theta,re,im"));
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(row[0], -PI);
        assert_eq!(row[1], s.points[0].1.re);
    }

    #[test]
    fn global_bounds() {
        let b = phi_global_bounds(4096);
        assert_eq!(b.re_min, 0.0);
        assert!((b.re_max - 3.701_631_435_361_85).abs() < 1e-12);
        assert!((b.im_abs_max - 1.6471).abs() < 1e-3);
        assert!(b.arg_abs_max <= PI / 2.0 + 1e-9);
    }

    #[test]
    fn region_membership() {
        assert!(region_contains(c(1.0, 0.0), 4096));
        assert!(!region_contains(c(4.0, 0.0), 4096));
        assert!(region_contains(c(0.01, 0.0), 4096));
        assert!(!region_contains(c(-0.1, 0.0), 4096));
        let curve = BoundaryCurve::new(4096);
        assert_eq!(curve.classify(curve.vertices()[100]), Location::Boundary);
        assert_eq!(curve.winding_number(c(1.0, 0.0)), 1);
    }

    #[test]
    fn g_primitive() {
        assert_eq!(g_eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let s = g_series(5);
        let want = [0.0, 1.0, 0.25, 1.0 / 6.0, 5.0 / 96.0, 1.0 / 24.0];
        for (k, w) in want.iter().enumerate() {
            assert!((s.coeff(k) - c(*w, 0.0)).norm() < 1e-15, "k={k}");
        }
        // Im g(i) = ∫_0^1 sech s ds along the imaginary segment.
        let gi = g_eval(c(0.0, 1.0)).unwrap();
        assert!((gi.im - gudermannian(1.0)).abs() < 1e-9);
        assert!(matches!(
            g_eval(c(1.1, 0.0)),
            Err(GeneratorError::OutsideDisk(_))
        ));
        let z = c(0.3, -0.4);
        assert!((g_eval(z).unwrap() - g_series(40).evaluate(z)).norm() < 1e-9);
    }

    #[test]
    fn integrand_is_continuous_at_origin() {
        let tiny = g_integrand(c(1e-9, 0.0));
        let small = g_integrand(c(1e-7, 0.0));
        assert!((tiny - c(1.0, 0.0)).norm() < 1e-8);
        assert!((small - c(1.0, 0.0)).norm() < 1e-6);
    }
}
