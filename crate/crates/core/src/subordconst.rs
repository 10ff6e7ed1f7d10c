//! Constants and thresholds from first-order differential subordination.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{g_eval, phi_log_derivative, GeneratorError};
use crate::optim::{golden_max, scan_then_golden};

pub const GAMMA1_QUOTED: f64 = -0.904233;
pub const GAMMA2_QUOTED: f64 = 1.53664;
pub const IM_G_I_QUOTED: f64 = 0.862897;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubordError {
    #[error("Janowski parameters need -1 <= B < A <= 1, got A = {a}, B = {b}")]
    JanowskiOrder { a: f64, b: f64 },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub name: String,
    pub computed: f64,
    pub paper_value: Option<f64>,
    pub abs_diff: Option<f64>,
}

impl ThresholdReport {
    pub fn new(name: &str, computed: f64, paper_value: Option<f64>) -> Self {
        Self {
            name: name.to_string(),
            computed,
            paper_value,
            abs_diff: paper_value.map(|p| (computed - p).abs()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaConstants {
    /// `g(-1)`
    pub gamma1: f64,
    /// `g(1)`
    pub gamma2: f64,
    /// `Im g(i)`
    pub im_gi: f64,
}

impl GammaConstants {
    pub fn reports(&self) -> Vec<ThresholdReport> {
        vec![
            ThresholdReport::new("gamma1", self.gamma1, Some(GAMMA1_QUOTED)),
            ThresholdReport::new("gamma2", self.gamma2, Some(GAMMA2_QUOTED)),
            ThresholdReport::new("im_g_i", self.im_gi, Some(IM_G_I_QUOTED)),
        ]
    }
}

pub fn gamma_constants() -> Result<GammaConstants, SubordError> {
    Ok(GammaConstants {
        gamma1: g_eval(Complex64::new(-1.0, 0.0))?.re,
        gamma2: g_eval(Complex64::new(1.0, 0.0))?.re,
        im_gi: g_eval(Complex64::new(0.0, 1.0))?.im,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    Janowski { a: f64, b: f64 },
    Exp,
    Cardioid,
    Sine,
}

impl Target {
    pub fn name(&self) -> String {
        match self {
            Target::Janowski { a, b } => format!("janowski({a}, {b})"),
            Target::Exp => "exp".into(),
            Target::Cardioid => "cardioid".into(),
            Target::Sine => "sine".into(),
        }
    }

    pub fn quoted(&self) -> Option<f64> {
        match self {
            Target::Janowski { .. } => None,
            Target::Exp => Some(1.4308),
            Target::Cardioid => Some(2.45796),
            Target::Sine => Some(1.82614),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub target: Target,
    pub value: f64,
    /// Lower bounds on `γ` whose maximum is `value`.
    pub candidates: Vec<(String, f64)>,
    pub note: Option<String>,
}

/// Smallest `γ` guaranteeing subordination to `target`, as the maximum of the
/// candidate lower bounds derived from `g(±1)` and `Im g(i)`.
pub fn subordination_threshold(
    target: Target,
    gc: &GammaConstants,
) -> Result<Threshold, SubordError> {
    let GammaConstants {
        gamma1,
        gamma2,
        im_gi,
    } = *gc;
    let mut note = None;
    let candidates: Vec<(String, f64)> = match target {
        Target::Janowski { a, b } => {
            if !(-1.0 <= b && b < a && a <= 1.0) {
                return Err(SubordError::JanowskiOrder { a, b });
            }
            let mut c = vec![(
                "gamma2*(1-B)/(A-B)".to_string(),
                gamma2 * (1.0 - b) / (a - b),
            )];
            let den = a - b - 1.0 - b * b;
            if den > 0.0 {
                c.push((
                    "(1+B^2)/(A-B-1-B^2)*Im g(i)".to_string(),
                    (1.0 + b * b) / den * im_gi,
                ));
            } else {
                note = Some(format!(
                    "second candidate undefined: A - B - 1 - B^2 = {den}"
                ));
            }
            c
        }
        Target::Exp => vec![
            ("e*gamma1/(1-e)".to_string(), E * gamma1 / (1.0 - E)),
            ("gamma2/(e-1)".to_string(), gamma2 / (E - 1.0)),
        ],
        Target::Cardioid => {
            note = Some("binding candidate is -e*gamma1, not gamma2".to_string());
            vec![
                ("-e*gamma1".to_string(), -E * gamma1),
                ("gamma2/e".to_string(), gamma2 / E),
            ]
        }
        Target::Sine => vec![
            ("-gamma1*sin(1)".to_string(), -gamma1 * 1f64.sin()),
            ("gamma2/sin(1)".to_string(), gamma2 / 1f64.sin()),
        ],
    };
    let value = candidates
        .iter()
        .map(|c| c.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Threshold {
        target,
        value,
        candidates,
        note,
    })
}

/// `(u, v)` with `m = 1`: real and imaginary parts of `φ(ζ) + ζφ'(ζ)/φ(ζ)`
/// at `ζ = e^{iθ}`, written out in `x = cos θ`, `y = sin θ`.
pub fn parabola_uv(theta: f64) -> (f64, f64) {
    let (y, x) = theta.sin_cos();
    let d = (2.0 * x).cos() + (2.0 * y).cosh();
    let u = 2.0 * ((x + 1.0) * x.cos() * y.cosh() - y * y.sinh() * x.sin()) / d
        + (0.5 + (x * (2.0 * x).sin() - y * (2.0 * y).sinh()) / d);
    let v = 2.0 * ((x + 1.0) * y.sinh() * x.sin() + y * x.cos() * y.cosh()) / d
        + (y / ((x + 1.0).powi(2) + y * y) + (y * (2.0 * x).sin() + x * (2.0 * y).sinh()) / d);
    (u, v)
}

pub fn parabola_objective(theta: f64) -> f64 {
    let (u, v) = parabola_uv(theta);
    v * v - 2.0 * u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaB0 {
    /// Lowest local minimum of `v^2 - 2u` away from `θ = 0`.
    pub theta_min: f64,
    pub min_value: f64,
    /// `-(min_value + 1)/2`
    pub b0: f64,
    /// True minimum over `[-π, π]`, attained at `θ = 0`.
    pub global_theta: f64,
    pub global_min: f64,
    pub global_b0: f64,
}

/// Scans `v^2 - 2u` on `[-π, π]` (at least 4096 samples, non-finite values
/// skipped), refines every discrete local minimum by golden section, and
/// reports both the off-axis minimum and the global one.
pub fn parabola_b0(samples: usize) -> ParabolaB0 {
    let n = samples.max(4096);
    let h = 2.0 * PI / n as f64;
    let vals: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let t = -PI + h * i as f64;
            (t, parabola_objective(t))
        })
        .collect();
    let mut minima: Vec<(f64, f64)> = Vec::new();
    for w in vals.windows(3) {
        let [(_, a), (t, b), (_, c)] = [w[0], w[1], w[2]];
        if a.is_finite() && b.is_finite() && c.is_finite() && b <= a && b < c {
            let (tr, neg) = golden_max(|s| -parabola_objective(s), t - h, t + h, 1e-12);
            minima.push(if -neg <= b { (tr, -neg) } else { (t, b) });
        }
    }
    let pick = |it: &mut dyn Iterator<Item = (f64, f64)>| {
        it.fold((f64::NAN, f64::INFINITY), |best, m| {
            if m.1 < best.1 - 1e-12 || ((m.1 - best.1).abs() <= 1e-12 && m.0 < best.0) {
                m
            } else {
                best
            }
        })
    };
    let (global_theta, global_min) = pick(&mut minima.iter().copied());
    let (theta_min, min_value) = pick(&mut minima.iter().copied().filter(|m| m.0.abs() > 1e-3));
    ParabolaB0 {
        theta_min,
        min_value,
        b0: -(min_value + 1.0) / 2.0,
        global_theta,
        global_min,
        global_b0: -(global_min + 1.0) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiscConstants {
    /// `sech 2`
    pub k2: f64,
    /// `1/2 + (2 + sinh 1)/cos 1`
    pub conv_sufficient: f64,
    pub circle_cos_min: f64,
    pub circle_sin_max: f64,
    /// `min Re(zφ'(z)/φ(z))` on `|z| = 1`, `z ≠ -1`.
    pub logderiv_min: f64,
    pub logderiv_min_theta: f64,
    /// `1/2 + sech 2`, the floor asserted for the same quantity.
    pub logderiv_claim: f64,
}

const CIRCLE_SAMPLES: usize = 4096;

pub fn misc_constants() -> MiscConstants {
    let on_circle = |t: f64| Complex64::from_polar(1.0, t);
    let (_, neg_cos) = scan_then_golden(
        |t| -on_circle(t).cos().norm(),
        -PI,
        PI,
        CIRCLE_SAMPLES,
        1e-12,
    );
    let (_, sin_max) = scan_then_golden(
        |t| on_circle(t).sin().norm(),
        -PI,
        PI,
        CIRCLE_SAMPLES,
        1e-12,
    );
    // skip the pole of z/(1+z) at θ = π
    let re_ld = |t: f64| {
        if (t.abs() - PI).abs() < 1e-9 {
            f64::NAN
        } else {
            -phi_log_derivative(on_circle(t)).re
        }
    };
    let (ld_theta, neg_ld) = scan_then_golden(re_ld, -PI, PI, CIRCLE_SAMPLES, 1e-12);
    let k2 = 1.0 / 2f64.cosh();
    MiscConstants {
        k2,
        conv_sufficient: 0.5 + (2.0 + 1f64.sinh()) / 1f64.cos(),
        circle_cos_min: -neg_cos,
        circle_sin_max: sin_max,
        logderiv_min: -neg_ld,
        logderiv_min_theta: ld_theta,
        logderiv_claim: 0.5 + k2,
    }
}
