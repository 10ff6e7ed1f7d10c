//! Carathéodory functions from finite Herglotz measures, the member
//! synthesis pipeline `p -> ω -> φ(ω) -> f`, the three-parameter
//! coefficient representation of `p_2, p_3, p_4`, and a Toeplitz
//! positivity check for coefficient prefixes.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::{ClassMember, ExtremalError, Provenance};
use crate::generator::{phi_eval, phi_series};
use crate::series::{exp_integral_lift, PowerSeries, SeriesError};

pub const MAX_ATOMS: usize = 8;
pub const PSD_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaratheodoryError {
    #[error("measure needs between 1 and {MAX_ATOMS} atoms, got {0}")]
    AtomCount(usize),
    #[error("atom weights must be non-negative and sum to 1 (sum = {0})")]
    Weights(f64),
    #[error("max_atoms must lie in [1, {MAX_ATOMS}], got {0}")]
    MaxAtoms(usize),
    #[error("parameter constraint violated: {0}")]
    Constraint(&'static str),
    #[error("Toeplitz size {size} needs {needed} coefficients, only {available} given")]
    NotEnoughCoefficients {
        size: usize,
        needed: usize,
        available: usize,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Member(#[from] ExtremalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: f64,
    pub angle: f64,
}

/// A probability measure on the circle with finitely many atoms, encoding
/// `p(z) = Σ λ_k (1 + e^{-iθ_k} z)/(1 - e^{-iθ_k} z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzMeasure {
    atoms: Vec<Atom>,
    seed: Option<u64>,
}

impl HerglotzMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, CaratheodoryError> {
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(CaratheodoryError::AtomCount(atoms.len()));
        }
        let sum: f64 = atoms.iter().map(|a| a.weight).sum();
        if atoms.iter().any(|a| !(a.weight >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(CaratheodoryError::Weights(sum));
        }
        Ok(Self { atoms, seed: None })
    }

    pub fn point_mass(angle: f64) -> Self {
        Self {
            atoms: vec![Atom { weight: 1.0, angle }],
            seed: None,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn kernels(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.weight, Complex64::from_polar(1.0, -a.angle)))
    }

    /// `p(z)` in closed form.
    pub fn p_eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.kernels()
            .map(|(w, x)| (one + x * z) / (one - x * z) * w)
            .sum()
    }

    /// The Schwarz function `ω = (p - 1)/(p + 1)` in closed form.
    pub fn schwarz_eval(&self, z: Complex64) -> Complex64 {
        let p = self.p_eval(z);
        let one = Complex64::new(1.0, 0.0);
        (p - one) / (p + one)
    }

    /// `z f'(z)/f(z) = φ(ω(z))` of the synthesized member, in closed form.
    pub fn log_derivative_eval(&self, z: Complex64) -> Complex64 {
        phi_eval(self.schwarz_eval(z))
    }
}

/// Coefficients `p_0 = 1`, `p_n = 2 Σ λ_k e^{-inθ_k}`.
pub fn p_series_from_measure(m: &HerglotzMeasure, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (w, x) in m.kernels() {
        let mut power = Complex64::new(1.0, 0.0);
        for c in coeffs.iter_mut().skip(1) {
            power *= x;
            *c += power * (2.0 * w);
        }
    }
    PowerSeries::new(coeffs)
}

/// `ω = (p - 1)/(p + 1)`, `q = φ∘ω`, `f = z exp ∫ (q - 1)/t`.
fn lift_p_series(p: &PowerSeries) -> Result<PowerSeries, CaratheodoryError> {
    let order = p.order();
    let one = PowerSeries::constant(Complex64::new(1.0, 0.0), order);
    let mut omega = p.sub(&one)?.div(&p.add(&one)?)?;
    // exactly zero by construction; clear rounding noise so composition is defined
    omega = {
        let mut c = omega.into_coeffs();
        c[0] = Complex64::new(0.0, 0.0);
        PowerSeries::new(c)
    };
    let q = phi_series(order).compose(&omega)?;
    Ok(exp_integral_lift(&q)?)
}

pub fn member_from_measure(
    m: &HerglotzMeasure,
    order: usize,
) -> Result<ClassMember, CaratheodoryError> {
    let f = lift_p_series(&p_series_from_measure(m, order))?;
    Ok(ClassMember::new(
        f,
        Provenance::Herglotz { measure: m.clone() },
    )?)
}

/// Same pipeline from explicit `p_1, p_2, ...`; missing coefficients are zero.
pub fn member_from_p_coeffs(
    p_coeffs: &[Complex64],
    order: usize,
) -> Result<ClassMember, CaratheodoryError> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (c, &v) in coeffs.iter_mut().skip(1).zip(p_coeffs) {
        *c = v;
    }
    let f = lift_p_series(&PowerSeries::new(coeffs))?;
    Ok(ClassMember::new(f, Provenance::Manual)?)
}

/// Draws a measure: atom count uniform in `[1, max_atoms]`, angles uniform on
/// `[-π, π)`, weights from a flat Dirichlet draw. Fully determined by `seed`.
pub fn sample_measure(seed: u64, max_atoms: usize) -> Result<HerglotzMeasure, CaratheodoryError> {
    if !(1..=MAX_ATOMS).contains(&max_atoms) {
        return Err(CaratheodoryError::MaxAtoms(max_atoms));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max_atoms);
    let mut atoms: Vec<Atom> = (0..count)
        .map(|_| {
            let angle = rng.gen_range(-PI..PI);
            // exponential spacings give a uniform point on the simplex
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            Atom {
                weight: -u.ln(),
                angle,
            }
        })
        .collect();
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    atoms.iter_mut().for_each(|a| a.weight /= total);
    Ok(HerglotzMeasure {
        atoms,
        seed: Some(seed),
    })
}

/// Members for seeds `seed, seed + 1, ...`, ordered by index regardless of
/// scheduling.
pub fn sample_members(
    seed: u64,
    count: usize,
    max_atoms: usize,
    order: usize,
) -> Result<Vec<ClassMember>, CaratheodoryError> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let m = sample_measure(seed.wrapping_add(i as u64), max_atoms)?;
            member_from_measure(&m, order)
        })
        .collect()
}

/// `p_1 = p ∈ [0, 2]` together with `|γ|, |η|, |ρ| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaThreePoint {
    p: f64,
    gamma: Complex64,
    eta: Complex64,
    rho: Complex64,
}

impl LemmaThreePoint {
    pub fn new(
        p: f64,
        gamma: Complex64,
        eta: Complex64,
        rho: Complex64,
    ) -> Result<Self, CaratheodoryError> {
        const SLACK: f64 = 1e-12;
        if !(0.0..=2.0).contains(&p) {
            return Err(CaratheodoryError::Constraint("p must lie in [0, 2]"));
        }
        if gamma.norm() > 1.0 + SLACK || eta.norm() > 1.0 + SLACK || rho.norm() > 1.0 + SLACK {
            return Err(CaratheodoryError::Constraint(
                "|gamma|, |eta|, |rho| must not exceed 1",
            ));
        }
        Ok(Self { p, gamma, eta, rho })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn eta(&self) -> Complex64 {
        self.eta
    }
    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    /// Uniform `p` and points uniform in the closed unit disk; one draw in
    /// four pushes each disk parameter onto the unit circle.
    pub fn random(rng: &mut impl Rng) -> Self {
        fn disk(rng: &mut impl Rng) -> Complex64 {
            let r = if rng.gen_bool(0.25) {
                1.0
            } else {
                rng.gen::<f64>().sqrt()
            };
            Complex64::from_polar(r, rng.gen_range(-PI..PI))
        }
        let p = rng.gen_range(0.0..=2.0);
        let gamma = disk(rng);
        let eta = disk(rng);
        let rho = disk(rng);
        Self { p, gamma, eta, rho }
    }
}

/// `(p_1, p_2, p_3, p_4)` from the representation
/// `2p_2 = p^2 + γ(4 - p^2)`,
/// `4p_3 = p^3 + 2(4 - p^2)pγ - (4 - p^2)pγ^2 + 2(4 - p^2)(1 - |γ|^2)η`,
/// `8p_4 = p^4 + (4 - p^2)γ(p^2(γ^2 - 3γ + 3) + 4γ)
///        - 4(4 - p^2)(1 - |γ|^2)(p(γ - 1)η + γ̄η^2 - (1 - |η|^2)ρ)`.
pub fn lemma3_expand(pt: &LemmaThreePoint) -> [Complex64; 4] {
    let p = Complex64::new(pt.p, 0.0);
    let (g, e, r) = (pt.gamma, pt.eta, pt.rho);
    let q = Complex64::new(4.0 - pt.p * pt.p, 0.0);
    let s = 1.0 - g.norm_sqr();
    let p2 = (p * p + g * q) / 2.0;
    let p3 = (p.powu(3) + q * p * g * 2.0 - q * p * g * g + q * e * (2.0 * s)) / 4.0;
    let p4 = (p.powu(4) + q * g * (p * p * (g * g - g * 3.0 + 3.0) + g * 4.0)
        - q * 4.0 * s * (p * (g - 1.0) * e + g.conj() * e * e - r * (1.0 - e.norm_sqr())))
        / 8.0;
    [p, p2, p3, p4]
}

/// True iff the Hermitian Toeplitz matrix with diagonal 2 and
/// super-diagonals `p_1..p_{size-1}` has smallest eigenvalue ≥ `PSD_FLOOR`.
pub fn toeplitz_psd_check(p_coeffs: &[Complex64], size: usize) -> Result<bool, CaratheodoryError> {
    Ok(toeplitz_min_eigenvalue(p_coeffs, size)? >= PSD_FLOOR)
}

/// Smallest eigenvalue of that matrix.
pub fn toeplitz_min_eigenvalue(
    p_coeffs: &[Complex64],
    size: usize,
) -> Result<f64, CaratheodoryError> {
    if size == 0 || size > p_coeffs.len() + 1 {
        return Err(CaratheodoryError::NotEnoughCoefficients {
            size,
            needed: size.saturating_sub(1),
            available: p_coeffs.len(),
        });
    }
    let entry = |i: usize, j: usize| -> Complex64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Complex64::new(2.0, 0.0),
            std::cmp::Ordering::Less => p_coeffs[j - i - 1],
            std::cmp::Ordering::Greater => p_coeffs[i - j - 1].conj(),
        }
    };
    let m = DMatrix::from_fn(size, size, entry);
    let eig = m.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_series(s: &PowerSeries, want: &[f64], tol: f64) {
        for (k, w) in want.iter().enumerate() {
            assert!(
                (s.coeff(k) - c(*w, 0.0)).norm() <= tol,
                "k={k}: {} vs {w}",
                s.coeff(k)
            );
        }
    }

    fn half_half() -> HerglotzMeasure {
        HerglotzMeasure::new(vec![
            Atom {
                weight: 0.5,
                angle: 0.0,
            },
            Atom {
                weight: 0.5,
                angle: PI,
            },
        ])
        .unwrap()
    }

    #[test]
    fn p_coefficients() {
        let p = p_series_from_measure(&HerglotzMeasure::point_mass(0.0), 4);
        assert_series(&p, &[1.0, 2.0, 2.0, 2.0, 2.0], 0.0);
        let p = p_series_from_measure(&HerglotzMeasure::point_mass(PI), 4);
        assert_series(&p, &[1.0, -2.0, 2.0, -2.0, 2.0], 1e-14);
        let p = p_series_from_measure(&half_half(), 4);
        assert_series(&p, &[1.0, 0.0, 2.0, 0.0, 2.0], 1e-14);
    }

    #[test]
    fn measure_validation() {
        assert!(matches!(
            HerglotzMeasure::new(vec![]),
            Err(CaratheodoryError::AtomCount(0))
        ));
        assert!(matches!(
            HerglotzMeasure::new(vec![Atom {
                weight: 0.7,
                angle: 0.0
            }]),
            Err(CaratheodoryError::Weights(_))
        ));
        assert!(matches!(
            HerglotzMeasure::new(vec![
                Atom {
                    weight: 1.5,
                    angle: 0.0
                },
                Atom {
                    weight: -0.5,
                    angle: 1.0
                }
            ]),
            Err(CaratheodoryError::Weights(_))
        ));
        let many = vec![
            Atom {
                weight: 1.0 / 9.0,
                angle: 0.0
            };
            9
        ];
        assert!(matches!(
            HerglotzMeasure::new(many),
            Err(CaratheodoryError::AtomCount(9))
        ));
    }

    #[test]
    fn members_from_simple_measures() {
        let f = member_from_measure(&HerglotzMeasure::point_mass(0.0), 6).unwrap();
        assert_series(
            f.series(),
            &[0.0, 1.0, 1.0, 0.75, 7.0 / 12.0, 5.0 / 12.0],
            1e-14,
        );
        let f3 = member_from_measure(&half_half(), 5).unwrap();
        assert_series(f3.series(), &[0.0, 1.0, 0.0, 0.5, 0.0, 0.25], 1e-14);
        let rot = member_from_measure(&HerglotzMeasure::point_mass(PI), 5).unwrap();
        assert!((rot.a(2) - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(matches!(rot.provenance(), Provenance::Herglotz { .. }));
    }

    #[test]
    fn lemma3_special_points() {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let pt = LemmaThreePoint::new(2.0, c(0.3, 0.2), c(-0.5, 0.1), c(0.0, 0.9)).unwrap();
        for v in lemma3_expand(&pt) {
            assert!((v - c(2.0, 0.0)).norm() < 1e-15);
        }
        let out = lemma3_expand(&LemmaThreePoint::new(0.0, one, z, z).unwrap());
        for (v, w) in out.iter().zip([0.0, 2.0, 0.0, 2.0]) {
            assert!((v - c(w, 0.0)).norm() < 1e-15);
        }
        let out = lemma3_expand(&LemmaThreePoint::new(0.0, z, one, z).unwrap());
        for (v, w) in out.iter().zip([0.0, 0.0, 2.0, 0.0]) {
            assert!((v - c(w, 0.0)).norm() < 1e-15);
        }
        let out = lemma3_expand(&LemmaThreePoint::new(0.0, z, z, one).unwrap());
        assert!((out[3] - c(2.0, 0.0)).norm() < 1e-15);
        let pt = LemmaThreePoint::new(
            0.0,
            z,
            c(0.9079692421410861, 0.0),
            c(0.839195668819163, 0.0),
        )
        .unwrap();
        assert!(toeplitz_psd_check(&lemma3_expand(&pt), 5).unwrap());
        // γ = 0 gives 2p_2 = p^2
        let out = lemma3_expand(&LemmaThreePoint::new(1.3, z, c(0.2, 0.4), one).unwrap());
        assert!((out[1] * 2.0 - c(1.69, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lemma3_constraints() {
        let z = c(0.0, 0.0);
        assert!(LemmaThreePoint::new(2.1, z, z, z).is_err());
        assert!(LemmaThreePoint::new(-0.1, z, z, z).is_err());
        assert!(LemmaThreePoint::new(1.0, c(1.0, 0.1), z, z).is_err());
        assert!(LemmaThreePoint::new(1.0, z, z, c(0.0, -1.01)).is_err());
    }

    #[test]
    fn toeplitz_checks() {
        let two = vec![c(2.0, 0.0); 4];
        assert!(toeplitz_psd_check(&two, 5).unwrap());
        assert!(!toeplitz_psd_check(&[c(3.0, 0.0)], 2).unwrap());
        assert!(toeplitz_psd_check(&two, 6).is_err());
        let rotated: Vec<Complex64> = (1..=4)
            .map(|n| Complex64::from_polar(2.0, -0.7 * n as f64))
            .collect();
        assert!(toeplitz_psd_check(&rotated, 5).unwrap());
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = sample_measure(0, 1).unwrap();
        assert_eq!(m.atoms().len(), 1);
        assert_eq!(m.atoms()[0].weight, 1.0);
        assert_eq!(
            sample_measure(42, 8).unwrap(),
            sample_measure(42, 8).unwrap()
        );
        assert_ne!(
            sample_measure(42, 8).unwrap(),
            sample_measure(43, 8).unwrap()
        );
        assert!(matches!(
            sample_measure(1, 0),
            Err(CaratheodoryError::MaxAtoms(0))
        ));
        assert!(matches!(
            sample_measure(1, 9),
            Err(CaratheodoryError::MaxAtoms(9))
        ));
    }

    #[test]
    fn closed_form_matches_series_inside() {
        let m = sample_measure(7, 5).unwrap();
        let f = member_from_measure(&m, 40).unwrap();
        let q = f.log_derivative_series().unwrap();
        for &(r, t) in &[(0.2, 0.3), (0.3, -2.0), (0.25, 3.0)] {
            let z = Complex64::from_polar(r, t);
            assert!((q.evaluate(z) - m.log_derivative_eval(z)).norm() < 1e-9);
            assert!((p_series_from_measure(&m, 40).evaluate(z) - m.p_eval(z)).norm() < 1e-9);
        }
    }
}
