//! Derivative-free maximization: golden-section search on an interval and a
//! box-clipped Nelder–Mead simplex.

use std::cmp::Ordering;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `width`. Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut guard = 0;
    while hi - lo > width && guard < 400 {
        guard += 1;
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let candidates = [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))];
    candidates.into_iter().filter(|(_, v)| v.is_finite()).fold(
        (x1, f64::NEG_INFINITY),
        |best, c| if c.1 > best.1 { c } else { best },
    )
}

/// Samples `f` at `count` evenly spaced points of `[lo, hi)` and refines the
/// best sample by golden section on its neighbouring cells.
pub fn scan_then_golden<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    count: usize,
    width: f64,
) -> (f64, f64) {
    let h = (hi - lo) / count as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..count {
        let x = lo + h * i as f64;
        let v = f(x);
        if v.is_finite() && v > best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_max(&f, a, b, width);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

/// Lexicographic order on points, used for deterministic tie-breaks.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// True when `(va, a)` beats `(vb, b)`: higher value, ties to the
/// lexicographically smaller point.
pub fn better(va: f64, a: &[f64], vb: f64, b: &[f64]) -> bool {
    match va.total_cmp(&vb) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => lex_cmp(a, b) == Ordering::Less,
    }
}

/// Nelder–Mead maximization with every trial point clipped into the box
/// `[lower_i, upper_i]`.
pub fn nelder_mead_max<F: Fn(&[f64]) -> f64>(
    f: F,
    start: &[f64],
    lower: &[f64],
    upper: &[f64],
    initial_step: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let clip = |x: &mut Vec<f64>| {
        for i in 0..n {
            x[i] = x[i].clamp(lower[i], upper[i]);
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut x0 = start.to_vec();
    clip(&mut x0);
    let v0 = f(&x0);
    simplex.push((x0.clone(), v0));
    for i in 0..n {
        let mut x = x0.clone();
        let span = (upper[i] - lower[i]) * initial_step;
        x[i] = if x[i] + span <= upper[i] {
            x[i] + span
        } else {
            x[i] - span
        };
        clip(&mut x);
        let v = f(&x);
        simplex.push((x, v));
    }

    let sort = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| {
            if better(a.1, &a.0, b.1, &b.0) {
                Ordering::Less
            } else if better(b.1, &b.0, a.1, &a.0) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    };

    for _ in 0..max_iters {
        sort(&mut simplex);
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size < 1e-15 {
            break;
        }
        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let towards = |t: f64| {
            let mut p: Vec<f64> = (0..n)
                .map(|i| centroid[i] + t * (worst.0[i] - centroid[i]))
                .collect();
            clip(&mut p);
            p
        };
        let xr = towards(-1.0);
        let vr = f(&xr);
        if vr > simplex[0].1 {
            let xe = towards(-2.0);
            let ve = f(&xe);
            simplex[n] = if ve > vr { (xe, ve) } else { (xr, vr) };
        } else if vr > simplex[n - 1].1 {
            simplex[n] = (xr, vr);
        } else {
            let (xc, vc) = if vr > worst.1 {
                let x = towards(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = towards(0.5);
                let v = f(&x);
                (x, v)
            };
            if vc > worst.1.max(vr) {
                simplex[n] = (xc, vc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let mut x: Vec<f64> = (0..n)
                        .map(|i| best[i] + 0.5 * (item.0[i] - best[i]))
                        .collect();
                    clip(&mut x);
                    let v = f(&x);
                    *item = (x, v);
                }
            }
        }
    }
    sort(&mut simplex);
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scan_handles_multimodal() {
        let f = |x: f64| (3.0 * x).sin() + 0.1 * x;
        let (x, _) = scan_then_golden(f, 0.0, 6.0, 600, 1e-12);
        let expected = golden_max(f, 4.0, 5.0, 1e-12).0;
        assert!((x - expected).abs() < 1e-6, "{x} vs {expected}");
    }

    #[test]
    fn nelder_mead_interior_and_corner() {
        let f = |p: &[f64]| -((p[0] - 0.2).powi(2) + 2.0 * (p[1] - 0.7).powi(2));
        let (x, v) = nelder_mead_max(f, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], 0.1, 500);
        assert!(
            (x[0] - 0.2).abs() < 1e-6 && (x[1] - 0.7).abs() < 1e-6,
            "{x:?}"
        );
        assert!(v.abs() < 1e-12);

        let g = |p: &[f64]| p[0] + p[1];
        let (x, v) = nelder_mead_max(g, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], 0.1, 500);
        assert_eq!(x, vec![1.0, 1.0]);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn tie_break_prefers_smaller_point() {
        assert!(better(1.0, &[0.0, 1.0], 1.0, &[0.5, 0.0]));
        assert!(!better(1.0, &[0.5, 0.0], 1.0, &[0.0, 1.0]));
        assert!(better(2.0, &[0.5, 0.0], 1.0, &[0.0, 1.0]));
    }
}
