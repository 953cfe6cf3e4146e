//! Decomposition of `w` in `R^d` as `w = [w* 0; 0 -w*] (cos g, sin g)`.
//!
//! Componentwise `w(j) = w*(j) cos g - w*(j-1) sin g` with `w*` zero-padded
//! on both ends. Normalizing `c = w / w(d)` and `s = w* / w*(d-1)` turns the
//! interior equations into a recursion for `s` in the single unknown
//! `t = 1 / s(1)`, closed by a consistency polynomial of degree `d - 1`.
//! Each real root gives two angle branches, so at most `2d - 2` elements
//! exist, and at least one when `d` is even.

mod poly;

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::signal::Signal;
use crate::tolerance::ToleranceProfile;

const REFINE_STEPS: usize = 3;

/// One element `(w*, gamma)` of the quotient set of some `w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientElement {
    pub w_star: Signal,
    /// Radians in `[0, 2 pi)`.
    pub gamma: f64,
    /// `max |reconstruct(w_star, gamma) - w|` for the decomposed `w`.
    pub residual: f64,
}

impl QuotientElement {
    pub fn reconstruct(&self) -> Signal {
        reconstruct_unchecked(self.w_star.as_slice(), self.gamma)
    }
}

/// Forward map: `w(j) = w*(j) cos g - w*(j-1) sin g`, `j = 1..=d`, where
/// `d = len(w*) + 1`.
pub fn reconstruct(w_star: &Signal, gamma: f64, d: usize) -> Result<Signal> {
    if w_star.len() + 1 != d {
        return Err(mismatch(format!("w_star of length {}", d.saturating_sub(1)), w_star.len()));
    }
    Ok(reconstruct_unchecked(w_star.as_slice(), gamma))
}

fn reconstruct_unchecked(w_star: &[f64], gamma: f64) -> Signal {
    let (sin, cos) = gamma.sin_cos();
    let d = w_star.len() + 1;
    let at = |j: isize| -> f64 {
        usize::try_from(j)
            .ok()
            .and_then(|j| w_star.get(j))
            .copied()
            .unwrap_or(0.0)
    };
    Signal::from_vec_unchecked(
        (0..d as isize)
            .map(|j| at(j) * cos - at(j - 1) * sin)
            .collect(),
    )
}

/// All elements of the quotient set of `w`, verified against the forward
/// map and sorted by angle.
///
/// Requires `d >= 2` and both endpoints above `tol.threshold(max|w|)`.
/// Every returned element reconstructs `w` within that same threshold.
/// Odd `d` may give an empty list.
pub fn quotient_decompose(w: &Signal, tol: &ToleranceProfile) -> Result<Vec<QuotientElement>> {
    let d = w.len();
    if d < 2 {
        return Err(Error::Precondition(format!(
            "quotient decomposition needs d >= 2, got {d}"
        )));
    }
    let scale = w.max_abs();
    let threshold = tol.threshold(scale);
    if w.first().abs() <= threshold || w.last().abs() <= threshold {
        return Err(Error::Precondition(format!(
            "endpoints of w must be nonzero: w(1) = {:e}, w(d) = {:e}, threshold {:e}",
            w.first(),
            w.last(),
            threshold
        )));
    }

    let wd = w.last();
    let c: Vec<f64> = w.as_slice().iter().map(|x| x / wd).collect();
    let roots = poly::real_roots(&poly::consistency_polynomial(&c))?;

    let mut out: Vec<QuotientElement> = Vec::with_capacity(2 * roots.len());
    for t in roots.into_iter().filter(|t| *t != 0.0 && t.is_finite()) {
        let s = poly::recursion_vector(&c, t);
        let base = (-s[0]).atan2(c[0]);
        for gamma in [base, base + PI] {
            let sin = gamma.sin();
            let w_star: Vec<f64> = s.iter().map(|sj| -sj * wd / sin).collect();
            let (w_star, gamma) = refine(w.as_slice(), w_star, normalize_angle(gamma));
            let residual = reconstruct_unchecked(&w_star, gamma)
                .max_abs_diff(w)
                .expect("reconstruction has length d");
            if residual > threshold || !residual.is_finite() {
                continue;
            }
            let candidate = QuotientElement {
                w_star: Signal::from_vec_unchecked(w_star),
                gamma,
                residual,
            };
            if !out.iter().any(|e| same_element(e, &candidate, tol)) {
                out.push(candidate);
            }
        }
    }
    out.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    Ok(out)
}

fn normalize_angle(gamma: f64) -> f64 {
    let g = gamma.rem_euclid(TAU);
    if g >= TAU {
        0.0
    } else {
        g
    }
}

fn same_element(a: &QuotientElement, b: &QuotientElement, tol: &ToleranceProfile) -> bool {
    let scale = a.w_star.max_abs().max(b.w_star.max_abs());
    let dg = (a.gamma - b.gamma).abs();
    let dg = dg.min(TAU - dg);
    dg <= 1e-8
        && a.w_star
            .max_abs_diff(&b.w_star)
            .is_ok_and(|diff| diff <= tol.threshold(scale).max(1e-8 * scale))
}

/// Newton steps on the square system `reconstruct(w*, g) = w`, kept only
/// while they reduce the residual.
fn refine(w: &[f64], mut w_star: Vec<f64>, mut gamma: f64) -> (Vec<f64>, f64) {
    let d = w.len();
    let residual_of = |ws: &[f64], g: f64| -> (DVector<f64>, f64) {
        let r = reconstruct_unchecked(ws, g);
        let v = DVector::from_iterator(d, r.as_slice().iter().zip(w).map(|(a, b)| a - b));
        let norm = v.amax();
        (v, norm)
    };
    let (mut r, mut norm) = residual_of(&w_star, gamma);
    for _ in 0..REFINE_STEPS {
        if norm == 0.0 {
            break;
        }
        let (sin, cos) = gamma.sin_cos();
        let mut jac = DMatrix::<f64>::zeros(d, d);
        for j in 0..d {
            if j < d - 1 {
                jac[(j, j)] = cos;
            }
            if j >= 1 {
                jac[(j, j - 1)] = -sin;
            }
            let here = w_star.get(j).copied().unwrap_or(0.0);
            let prev = if j >= 1 { w_star[j - 1] } else { 0.0 };
            jac[(j, d - 1)] = -here * sin - prev * cos;
        }
        let Some(step) = jac.lu().solve(&r) else {
            break;
        };
        let next: Vec<f64> = w_star.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
        let next_gamma = normalize_angle(gamma - step[d - 1]);
        let (next_r, next_norm) = residual_of(&next, next_gamma);
        if next_norm.partial_cmp(&norm) != Some(std::cmp::Ordering::Less) {
            break;
        }
        (w_star, gamma, r, norm) = (next, next_gamma, next_r, next_norm);
    }
    (w_star, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{endpoint_safe_signal, rng_from_seed, uniform_signal};
    use proptest::prelude::*;
    use rand::Rng;

    fn sig(v: &[f64]) -> Signal {
        Signal::from_slice(v).unwrap()
    }

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn forward_map_small_cases() {
        assert_eq!(reconstruct(&sig(&[1.0]), 0.0, 2).unwrap().as_slice(), &[1.0, 0.0]);
        let gamma = (-0.8f64).atan2(0.6);
        let w = reconstruct(&sig(&[5.0]), gamma, 2).unwrap();
        assert!((w[0] - 3.0).abs() < 1e-15 && (w[1] - 4.0).abs() < 1e-15);
        assert!(reconstruct(&sig(&[1.0, 2.0]), 0.3, 4).is_err());
    }

    #[test]
    fn three_four_five() {
        let els = quotient_decompose(&sig(&[3.0, 4.0]), &tol()).unwrap();
        assert_eq!(els.len(), 2);
        let pos = els.iter().find(|e| e.w_star[0] > 0.0).unwrap();
        let neg = els.iter().find(|e| e.w_star[0] < 0.0).unwrap();
        assert!((pos.w_star[0] - 5.0).abs() < 1e-14);
        assert!((pos.gamma.cos() - 0.6).abs() < 1e-14);
        assert!((pos.gamma.sin() + 0.8).abs() < 1e-14);
        assert!((neg.w_star[0] + 5.0).abs() < 1e-14);
        let dg = (neg.gamma - pos.gamma).rem_euclid(TAU);
        assert!((dg - PI).abs() < 1e-14);
    }

    #[test]
    fn planted_element_is_recovered() {
        let gamma = PI / 5.0;
        let w_star = sig(&[1.0, 2.0, 1.0]);
        let w = reconstruct(&w_star, gamma, 4).unwrap();
        let els = quotient_decompose(&w, &tol()).unwrap();
        assert!(els.iter().any(|e| {
            e.w_star.max_abs_diff(&w_star).unwrap() < 1e-9 && (e.gamma - gamma).abs() < 1e-9
        }));
        for e in &els {
            assert!(e.reconstruct().max_abs_diff(&w).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn endpoint_and_length_preconditions() {
        assert!(quotient_decompose(&sig(&[1.0]), &tol()).is_err());
        assert!(quotient_decompose(&sig(&[0.0, 1.0, 2.0]), &tol()).is_err());
        assert!(quotient_decompose(&sig(&[1.0, 1.0, 0.0]), &tol()).is_err());
    }

    #[test]
    fn angle_constraints_hold() {
        let mut rng = rng_from_seed(21);
        for d in [4, 6, 8] {
            let w = endpoint_safe_signal(&mut rng, d);
            for e in quotient_decompose(&w, &tol()).unwrap() {
                let (s, c) = e.gamma.sin_cos();
                assert!((c - w.first() / e.w_star[0]).abs() < 1e-8);
                assert!((s + w.last() / e.w_star[d - 2]).abs() < 1e-8);
                assert!((0.0..TAU).contains(&e.gamma));
            }
        }
    }

    #[test]
    fn odd_dimension_may_be_empty() {
        // d = 3 with c = (1, 0, 1): t s1 - 1 = -1 - t^2 has no real root
        assert!(quotient_decompose(&sig(&[1.0, 0.0, 1.0]), &tol()).unwrap().is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn even_dimension_is_nonempty_and_bounded(seed in any::<u64>(), half in 1usize..6) {
            let d = 2 * half;
            let mut rng = rng_from_seed(seed);
            let w = endpoint_safe_signal(&mut rng, d);
            let els = quotient_decompose(&w, &tol()).unwrap();
            prop_assert!(!els.is_empty());
            prop_assert!(els.len() <= 2 * d - 2);
            for e in &els {
                prop_assert!(e.reconstruct().max_abs_diff(&w).unwrap() <= tol().threshold(w.max_abs()));
            }
        }

        #[test]
        fn forward_generated_instances_round_trip(seed in any::<u64>(), d in 2usize..10) {
            let mut rng = rng_from_seed(seed);
            let w_star = endpoint_safe_signal(&mut rng, d - 1);
            let gamma: f64 = rng.gen_range(0.1..(PI / 2.0 - 0.1)) + PI / 2.0 * rng.gen_range(0..4) as f64;
            let w = reconstruct(&w_star, gamma, d).unwrap();
            let els = quotient_decompose(&w, &tol()).unwrap();
            prop_assert!(els.iter().any(|e| e.reconstruct().max_abs_diff(&w).unwrap() <= 1e-8 * w.max_abs()));
            prop_assert!(els.len() <= 2 * d - 2);
        }

        #[test]
        fn scaling_w_scales_w_star(seed in any::<u64>(), alpha in 0.1f64..10.0) {
            let mut rng = rng_from_seed(seed);
            let w = endpoint_safe_signal(&mut rng, 6);
            let base = quotient_decompose(&w, &tol()).unwrap();
            let scaled = quotient_decompose(&w.scaled(alpha), &tol()).unwrap();
            prop_assert_eq!(base.len(), scaled.len());
            for (a, b) in base.iter().zip(&scaled) {
                prop_assert!((a.gamma - b.gamma).abs() < 1e-7);
                prop_assert!(a.w_star.scaled(alpha).max_abs_diff(&b.w_star).unwrap() < 1e-7 * alpha.max(1.0) * a.w_star.max_abs());
            }
        }
    }

    #[test]
    fn uniform_interior_entries() {
        let mut rng = rng_from_seed(5);
        for _ in 0..50 {
            let mut v = uniform_signal(&mut rng, 8).into_vec();
            v[0] = 1.0;
            v[7] = -0.5;
            let w = sig(&v);
            assert!(!quotient_decompose(&w, &tol()).unwrap().is_empty());
        }
    }
}
