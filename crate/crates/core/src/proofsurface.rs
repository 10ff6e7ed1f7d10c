//! Objective functions bounding the second- and third-order Hankel
//! determinants, their face and edge restrictions, and a deterministic box
//! maximizer for them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caratheodory::{lemma3_expand, LemmaThreePoint};
use crate::functionals::{hankel_22, hankel_31};
use crate::optim::{better, nelder_mead_max};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProofSurfaceError {
    #[error("point ({0}) outside the box")]
    OutOfBox(String),
    #[error("unknown objective {0:?}")]
    UnknownObjective(String),
    #[error("grid {0} too coarse; need at least 51 nodes")]
    GridTooSmall(usize),
}

/// `p ∈ [0, 2]`, `x, y ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxPoint {
    p: f64,
    x: f64,
    y: f64,
}

impl BoxPoint {
    pub fn new(p: f64, x: f64, y: f64) -> Result<Self, ProofSurfaceError> {
        if (0.0..=2.0).contains(&p) && (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
            Ok(Self { p, x, y })
        } else {
            Err(ProofSurfaceError::OutOfBox(format!("{p}, {x}, {y}")))
        }
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
}

/// `(p^4 + 12p^2(4-p^2)ϱ + (28p^4 + 32p^3 - 96p^2 - 128p + 192)ϱ^2 + 32p(4-p^2))/768`
pub fn eval_g_h2(p: f64, rho: f64) -> Result<f64, ProofSurfaceError> {
    if !(0.0..=2.0).contains(&p) || !(0.0..=1.0).contains(&rho) {
        return Err(ProofSurfaceError::OutOfBox(format!("{p}, {rho}")));
    }
    Ok(g_h2_raw(p, rho))
}

fn g_h2_raw(p: f64, rho: f64) -> f64 {
    let q = 4.0 - p * p;
    let p2 = p * p;
    let p4 = p2 * p2;
    (p4 + 12.0 * p2 * q * rho
        + (28.0 * p4 + 32.0 * p2 * p - 96.0 * p2 - 128.0 * p + 192.0) * rho * rho
        + 32.0 * p * q)
        / 768.0
}

/// The one-variable polynomial `(192 - 48p^2 + 17p^4)/768` obtained by
/// setting `ϱ = 1`, as printed. It does not agree with `eval_g_h2(p, 1)`.
pub fn g_h2_reduced(p: f64) -> f64 {
    let p2 = p * p;
    (192.0 - 48.0 * p2 + 17.0 * p2 * p2) / 768.0
}

/// The four summands `g_1, g_2 y, g_3 y^2, g_4` of the cuboid bound, unscaled.
pub fn g_h3_terms(pt: BoxPoint) -> [f64; 4] {
    let BoxPoint { p, x, y } = pt;
    let q = 4.0 - p * p;
    let (p2, p3, p4) = (p * p, p * p * p, p * p * p * p);
    let (x2, x3, x4) = (x * x, x * x * x, x * x * x * x);
    let g1 = 5.0 * p4 * p2
        + 26.0 * p4 * q * x
        + 144.0 * p2 * q * x2
        + 56.0 * p4 * q * x2
        + 68.0 * p2 * q * q * x2
        + 36.0 * p4 * q * x3
        + 40.0 * p2 * q * q * x3
        + 8.0 * p2 * q * q * x4;
    let g2 = q * (1.0 - x2) * (40.0 * p3 + 144.0 * p3 * x + 80.0 * p * q * x + 32.0 * p * q * x2);
    let g3 = q * (1.0 - x2) * (256.0 * q + 32.0 * q * x2 + 144.0 * p2 * x);
    let g4 = q * (1.0 - y * y) * (144.0 * p2 + 288.0 * q * x) * (1.0 - x2);
    [g1, g2 * y, g3 * y * y, g4]
}

pub fn eval_g_h3(pt: BoxPoint) -> f64 {
    g_h3_terms(pt).iter().sum::<f64>() / 36864.0
}

/// Face `p = 0`.
pub fn h1(x: f64, y: f64) -> f64 {
    (1.0 - x * x) * (x * x * y * y - 9.0 * x * (y * y - 1.0) + 8.0 * y * y) / 72.0
}

/// Face `x = 0`.
pub fn h2(p: f64, y: f64) -> f64 {
    let q = 4.0 - p * p;
    (5.0 * p.powi(6)
        + 144.0 * q * p * p * (1.0 - y * y)
        + 256.0 * q * q * y * y
        + 40.0 * q * p.powi(3) * y)
        / 36864.0
}

/// Face `x = 1`, independent of `y`.
pub fn h3(p: f64) -> f64 {
    let q = 4.0 - p * p;
    (5.0 * p.powi(6) + 144.0 * p * p * q + 118.0 * p.powi(4) * q + 116.0 * p * p * q * q) / 36864.0
}

/// Edge `x = y = 0`.
pub fn k1(p: f64) -> f64 {
    (5.0 * p.powi(6) + 144.0 * (4.0 - p * p) * p * p) / 36864.0
}

/// Edge `x = 0, y = 1`.
pub fn k2(p: f64) -> f64 {
    let q = 4.0 - p * p;
    (5.0 * p.powi(6) + 256.0 * q * q + 40.0 * q * p.powi(3)) / 36864.0
}

/// Edge `p = 0, y = 1`.
pub fn k5(x: f64) -> f64 {
    (1.0 - x * x) * (x * x + 8.0) / 72.0
}

/// Edge `p = y = 0`.
pub fn k6(x: f64) -> f64 {
    x * (1.0 - x * x) / 8.0
}

/// Closed-form maximizers and maxima of the one-variable restrictions.
pub mod closed_form {
    pub fn k1_argmax() -> f64 {
        2.0 * (2.0 * (6.0 - 21f64.sqrt()) / 5.0).sqrt()
    }
    pub fn k1_max() -> f64 {
        (7.0 * 21f64.sqrt() - 27.0) / 300.0
    }
    pub fn k6_argmax() -> f64 {
        1.0 / 3f64.sqrt()
    }
    pub fn k6_max() -> f64 {
        1.0 / (12.0 * 3f64.sqrt())
    }
    pub fn h3_argmax() -> f64 {
        2.0 * (2.0 * (25.0 - 587f64.sqrt()) / 3.0).sqrt()
    }
    pub fn h3_max() -> f64 {
        (587.0 * 587f64.sqrt() - 14200.0) / 324.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    GH3,
    GH2,
    GH2Reduced,
    H1,
    H2,
    H3,
    K1,
    K2,
    K5,
    K6,
}

impl Objective {
    pub const ALL: [Objective; 10] = [
        Objective::GH3,
        Objective::GH2,
        Objective::GH2Reduced,
        Objective::H1,
        Objective::H2,
        Objective::H3,
        Objective::K1,
        Objective::K2,
        Objective::K5,
        Objective::K6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::GH3 => "g_h3",
            Objective::GH2 => "g_h2",
            Objective::GH2Reduced => "g_h2_reduced",
            Objective::H1 => "h1",
            Objective::H2 => "h2",
            Objective::H3 => "h3",
            Objective::K1 => "k1",
            Objective::K2 => "k2",
            Objective::K5 => "k5",
            Objective::K6 => "k6",
        }
    }

    /// Per-coordinate bounds of the domain.
    pub fn bounds(self) -> Vec<(f64, f64)> {
        const P: (f64, f64) = (0.0, 2.0);
        const U: (f64, f64) = (0.0, 1.0);
        match self {
            Objective::GH3 => vec![P, U, U],
            Objective::GH2 | Objective::H2 => vec![P, U],
            Objective::H1 => vec![U, U],
            Objective::GH2Reduced | Objective::H3 | Objective::K1 | Objective::K2 => vec![P],
            Objective::K5 | Objective::K6 => vec![U],
        }
    }

    pub fn dim(self) -> usize {
        self.bounds().len()
    }

    /// Node count along the first axis used by default.
    pub fn default_grid(self) -> usize {
        match self.dim() {
            1 => 2001,
            _ => 201,
        }
    }

    /// Evaluates at an in-domain point.
    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            Objective::GH3 => eval_g_h3(BoxPoint {
                p: v[0],
                x: v[1],
                y: v[2],
            }),
            Objective::GH2 => g_h2_raw(v[0], v[1]),
            Objective::GH2Reduced => g_h2_reduced(v[0]),
            Objective::H1 => h1(v[0], v[1]),
            Objective::H2 => h2(v[0], v[1]),
            Objective::H3 => h3(v[0]),
            Objective::K1 => k1(v[0]),
            Objective::K2 => k2(v[0]),
            Objective::K5 => k5(v[0]),
            Objective::K6 => k6(v[0]),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = ProofSurfaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| ProofSurfaceError::UnknownObjective(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxMaximum {
    pub objective: Objective,
    pub argmax: Vec<f64>,
    pub value: f64,
    /// Nodes per axis.
    pub grid: Vec<usize>,
    /// True when a refinement step improved on the best grid node.
    pub refined: bool,
    /// Best grid value, for the grid-dominance check.
    pub grid_value: f64,
}

const SEEDS: usize = 10;

/// Keeps the `SEEDS` best `(value, point)` pairs under [`better`].
fn push_top(top: &mut Vec<(f64, Vec<f64>)>, v: f64, x: Vec<f64>) {
    if !v.is_finite() {
        return;
    }
    if top.len() == SEEDS && !better(v, &x, top[SEEDS - 1].0, &top[SEEDS - 1].1) {
        return;
    }
    let pos = top
        .iter()
        .position(|(tv, tx)| better(v, &x, *tv, tx))
        .unwrap_or(top.len());
    top.insert(pos, (v, x));
    top.truncate(SEEDS);
}

/// Dense grid scan (`grid` nodes on the first axis, `(grid - 1)/2 + 1` on the
/// others) followed by box-clipped Nelder–Mead from the ten best nodes.
pub fn maximize_box(
    objective: Objective,
    grid: usize,
    refine_iters: usize,
) -> Result<BoxMaximum, ProofSurfaceError> {
    if grid < 51 {
        return Err(ProofSurfaceError::GridTooSmall(grid));
    }
    let bounds = objective.bounds();
    let nodes: Vec<usize> = (0..bounds.len())
        .map(|i| if i == 0 { grid } else { (grid - 1) / 2 + 1 })
        .collect();
    let coord = |axis: usize, k: usize| {
        let (lo, hi) = bounds[axis];
        if k + 1 == nodes[axis] {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (nodes[axis] - 1) as f64
        }
    };
    let inner: usize = nodes[1..].iter().product();

    let top = (0..nodes[0])
        .into_par_iter()
        .map(|i| {
            let mut local = Vec::with_capacity(SEEDS + 1);
            for flat in 0..inner {
                let mut x = vec![coord(0, i)];
                let mut rest = flat;
                for axis in 1..nodes.len() {
                    x.push(coord(axis, rest % nodes[axis]));
                    rest /= nodes[axis];
                }
                let v = objective.eval(&x);
                push_top(&mut local, v, x);
            }
            local
        })
        .reduce(Vec::new, |mut a, b| {
            for (v, x) in b {
                push_top(&mut a, v, x);
            }
            a
        });

    let (grid_value, grid_arg) = top[0].clone();
    let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = bounds.iter().map(|b| b.1).collect();
    let step = 2.0 / (grid - 1) as f64;
    let refined_points: Vec<(Vec<f64>, f64)> = top
        .par_iter()
        .map(|(_, x)| nelder_mead_max(|v| objective.eval(v), x, &lower, &upper, step, refine_iters))
        .collect();

    let (mut best_v, mut best_x) = (grid_value, grid_arg);
    let mut refined = false;
    for (x, v) in refined_points {
        if v.is_finite() && better(v, &x, best_v, &best_x) {
            refined = refined || v > grid_value;
            best_v = v;
            best_x = x;
        }
    }
    assert!(best_v >= grid_value);
    Ok(BoxMaximum {
        objective,
        argmax: best_x,
        value: best_v,
        grid: nodes,
        refined,
        grid_value,
    })
}

/// Central finite-difference derivative.
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `a_2..a_5` from `p_1..p_4` by the coefficient-comparison formulas.
pub fn coefficients_from_p(p: &[Complex64; 4]) -> [Complex64; 4] {
    let [p1, p2, p3, p4] = *p;
    [
        p1 / 2.0,
        (p1 * p1 + p2 * 4.0) / 16.0,
        (p1.powu(3) + p1 * p2 * 4.0 + p3 * 16.0) / 96.0,
        (-p1.powu(4) + p1 * p1 * p2 * 4.0 + p1 * p3 * 4.0 + p4 * 24.0) / 192.0,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationSurvey {
    pub samples: usize,
    pub seed: u64,
    pub max_abs_a4: f64,
    pub max_abs_a5: f64,
    pub max_abs_h22: f64,
    pub max_abs_h31: f64,
    /// Points with `|H_3(1)| > G(p, |γ|, |η|) + 1e-9`.
    pub h3_violations: usize,
    pub h3_max_excess: f64,
    /// Points with `|H_2(2)| > G(p, |γ|) + 1e-9`.
    pub h2_violations: usize,
    pub h2_max_excess: f64,
}

/// Maps random parametrization points to coefficient tuples and compares the Hankel
/// determinants against the bounding surfaces at `(p, |γ|, |η|)`.
pub fn lemma3_survey(seed: u64, samples: usize) -> DominationSurvey {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<LemmaThreePoint> = (0..samples)
        .map(|_| LemmaThreePoint::random(&mut rng))
        .collect();
    let mut s = DominationSurvey {
        samples,
        seed,
        max_abs_a4: 0.0,
        max_abs_a5: 0.0,
        max_abs_h22: 0.0,
        max_abs_h31: 0.0,
        h3_violations: 0,
        h3_max_excess: f64::NEG_INFINITY,
        h2_violations: 0,
        h2_max_excess: f64::NEG_INFINITY,
    };
    for pt in &points {
        let [a2, a3, a4, a5] = coefficients_from_p(&lemma3_expand(pt));
        let h22 = hankel_22(a2, a3, a4).norm();
        let h31 = hankel_31(a2, a3, a4, a5).norm();
        let x = pt.gamma().norm().min(1.0);
        let y = pt.eta().norm().min(1.0);
        let bound3 = eval_g_h3(BoxPoint { p: pt.p(), x, y });
        let bound2 = g_h2_raw(pt.p(), x);
        s.max_abs_a4 = s.max_abs_a4.max(a4.norm());
        s.max_abs_a5 = s.max_abs_a5.max(a5.norm());
        s.max_abs_h22 = s.max_abs_h22.max(h22);
        s.max_abs_h31 = s.max_abs_h31.max(h31);
        s.h3_max_excess = s.h3_max_excess.max(h31 - bound3);
        s.h2_max_excess = s.h2_max_excess.max(h22 - bound2);
        if h31 > bound3 + 1e-9 {
            s.h3_violations += 1;
        }
        if h22 > bound2 + 1e-9 {
            s.h2_violations += 1;
        }
    }
    s
}
