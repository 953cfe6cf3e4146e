//! Pairs of inputs that the convolution map cannot tell apart.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::lifted::convolve;
use crate::quotient::{quotient_decompose, reconstruct, QuotientElement};
use crate::signal::Signal;
use crate::tolerance::ToleranceProfile;

/// Angle degeneracy cutoff for `|cos phi|` and `|sin(phi - theta)|`.
pub const ANGLE_EPS: f64 = 1e-6;

/// Collinearity strictly below `1 - COLLINEARITY_MARGIN` counts as
/// linearly independent.
pub const COLLINEARITY_MARGIN: f64 = 1e-9;

/// An input pair together with a second pair claimed to share its
/// convolution output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguousPair {
    pub x: Signal,
    pub y: Signal,
    pub x_alt: Signal,
    pub y_alt: Signal,
    /// `max |x * y - x_alt * y_alt|`.
    #[serde(default)]
    pub residual: f64,
    /// `|<x, x_alt>| / (|x| |x_alt|)`.
    #[serde(default)]
    pub collinearity: f64,
}

impl AmbiguousPair {
    /// Builds the pair and fills in both diagnostics.
    pub fn new(x: Signal, y: Signal, x_alt: Signal, y_alt: Signal) -> Result<Self> {
        check_lengths(&x, &y, &x_alt, &y_alt)?;
        let residual = convolve(&x, &y).max_abs_diff(&convolve(&x_alt, &y_alt))?;
        let collinearity = x.collinearity(&x_alt)?;
        Ok(Self {
            x,
            y,
            x_alt,
            y_alt,
            residual,
            collinearity,
        })
    }
}

fn check_lengths(x: &Signal, y: &Signal, x_alt: &Signal, y_alt: &Signal) -> Result<()> {
    if x.len() != x_alt.len() {
        return Err(mismatch(format!("x_alt of length {}", x.len()), x_alt.len()));
    }
    if y.len() != y_alt.len() {
        return Err(mismatch(format!("y_alt of length {}", y.len()), y_alt.len()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub residual: f64,
    pub collinearity: f64,
    /// `max |x * y|`, the scale used for the residual threshold.
    pub scale: f64,
    pub certifies_unidentifiability: bool,
}

/// Recomputes both convolutions and decides whether the pair witnesses
/// unidentifiability: equal outputs at tolerance and `x`, `x_alt` not
/// collinear.
pub fn verify_pair(p: &AmbiguousPair, tol: &ToleranceProfile) -> Result<VerificationReport> {
    check_lengths(&p.x, &p.y, &p.x_alt, &p.y_alt)?;
    let z = convolve(&p.x, &p.y);
    let residual = z.max_abs_diff(&convolve(&p.x_alt, &p.y_alt))?;
    let collinearity = p.x.collinearity(&p.x_alt)?;
    let scale = z.max_abs();
    Ok(VerificationReport {
        residual,
        collinearity,
        scale,
        certifies_unidentifiability: residual <= tol.threshold(scale)
            && collinearity < 1.0 - COLLINEARITY_MARGIN,
    })
}

/// Output of the two-angle rotation of a seed quadruple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationalFamily {
    pub x1p: Signal,
    pub y1p: Signal,
    pub x2p: Signal,
    pub y2p: Signal,
    /// `theta = phi (mod pi)`: both output pairs coincide up to sign.
    pub degenerate: bool,
}

/// Rotates seeds with `x1 * y1 = x2 * y2` into a second such quadruple:
///
/// ```text
/// x1' = x1 cos(theta) - x2 sin(theta)    y1' = y1 sin(phi)   - y2 cos(phi)
/// x2' = x1 cos(phi)   - x2 sin(phi)      y2' = y1 sin(theta) - y2 cos(theta)
/// ```
pub fn rotational_family(
    x1: &Signal,
    x2: &Signal,
    y1: &Signal,
    y2: &Signal,
    theta: f64,
    phi: f64,
    tol: &ToleranceProfile,
) -> Result<RotationalFamily> {
    if x1.len() != x2.len() {
        return Err(mismatch(format!("x2 of length {}", x1.len()), x2.len()));
    }
    if y1.len() != y2.len() {
        return Err(mismatch(format!("y2 of length {}", y1.len()), y2.len()));
    }
    let z1 = convolve(x1, y1);
    let z2 = convolve(x2, y2);
    let gap = z1.max_abs_diff(&z2)?;
    if gap > tol.threshold(z1.max_abs().max(z2.max_abs())) {
        return Err(Error::Precondition(format!(
            "seed pairs do not share a convolution output (max difference {gap:e})"
        )));
    }
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok(RotationalFamily {
        x1p: x1.combine(ct, x2, -st)?,
        y1p: y1.combine(sp, y2, -cp)?,
        x2p: x1.combine(cp, x2, -sp)?,
        y2p: y1.combine(st, y2, -ct)?,
        degenerate: (theta - phi).sin().abs() <= 1e-12,
    })
}

/// The zero-padding ambiguity of over-estimated model orders.
///
/// * `x(m) = 0, y(1) = 0`: `x' = (0, x(1:m-1))`, `y' = (y(2:n), 0)`.
/// * `x(1) = 0, y(n) = 0`: `x' = (x(2:m), 0)`, `y' = (0, y(1:n-1))`.
///
/// Both are pure re-indexing, so the residual is exactly zero. The first
/// pattern is used when both hold.
pub fn shift_ambiguity(x: &Signal, y: &Signal) -> Result<AmbiguousPair> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::Precondition("shift ambiguity needs nonzero x and y".into()));
    }
    let (xs, ys) = (x.as_slice(), y.as_slice());
    let (m, n) = (xs.len(), ys.len());
    let (x_alt, y_alt) = if xs[m - 1] == 0.0 && ys[0] == 0.0 {
        (prepend_zero(&xs[..m - 1]), append_zero(&ys[1..]))
    } else if xs[0] == 0.0 && ys[n - 1] == 0.0 {
        (append_zero(&xs[1..]), prepend_zero(&ys[..n - 1]))
    } else {
        return Err(Error::Precondition(
            "no zero-padding pattern: need x(m) = y(1) = 0 or x(1) = y(n) = 0".into(),
        ));
    };
    AmbiguousPair::new(x.clone(), y.clone(), x_alt, y_alt)
}

fn prepend_zero(v: &[f64]) -> Signal {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(0.0);
    out.extend_from_slice(v);
    Signal::from_vec_unchecked(out)
}

fn append_zero(v: &[f64]) -> Signal {
    let mut out = v.to_vec();
    out.push(0.0);
    Signal::from_vec_unchecked(out)
}

/// `y = [0 v; v 0] (sin phi, -cos phi)`, the negated forward map.
pub fn y_form(v: &Signal, phi: f64) -> Result<Signal> {
    Ok(reconstruct(v, phi, v.len() + 1)?.neg())
}

/// Full record of an attack: the pair and the decompositions behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackCertificate {
    pub pair: AmbiguousPair,
    pub u: Signal,
    pub v: Signal,
    pub theta: f64,
    pub phi: f64,
}

/// Adversarial pair for even orders `m, n >= 4`.
///
/// Decomposes `x = reconstruct(u, theta)` and `y = y_form(v, phi)` and
/// returns `x' = reconstruct(u, phi)`, `y' = y_form(v, theta)`; then
/// `x y^T - x' y'^T = sin(phi - theta) n0(u, v)` lies in the kernel.
/// Among angle combinations with `|cos phi|` and `|sin(phi - theta)|`
/// above [`ANGLE_EPS`], the one with the smallest collinearity whose
/// residual is within tolerance is chosen.
pub fn attack(x: &Signal, y: &Signal, tol: &ToleranceProfile) -> Result<AmbiguousPair> {
    attack_with_certificate(x, y, tol).map(|c| c.pair)
}

pub fn attack_with_certificate(
    x: &Signal,
    y: &Signal,
    tol: &ToleranceProfile,
) -> Result<AttackCertificate> {
    check_attack_input(x, y, tol)?;
    let xs = quotient_decompose(x, tol)?;
    let ys = quotient_decompose(&y.neg(), tol)?;
    for e in &ys {
        // the y-form must reproduce y itself before it is relied upon
        let back = y_form(&e.w_star, e.gamma)?;
        debug_assert!(back.max_abs_diff(y)? <= tol.threshold(y.max_abs()));
    }

    let scale = convolve(x, y).max_abs();
    let mut best: Option<(bool, f64, AttackCertificate)> = None;
    let mut admissible = 0usize;
    for QuotientElement { w_star: u, gamma: theta, .. } in &xs {
        for QuotientElement { w_star: v, gamma: phi, .. } in &ys {
            if phi.cos().abs() <= ANGLE_EPS || (phi - theta).sin().abs() <= ANGLE_EPS {
                continue;
            }
            admissible += 1;
            let x_alt = reconstruct(u, *phi, x.len())?;
            let y_alt = y_form(v, *theta)?;
            let pair = AmbiguousPair::new(x.clone(), y.clone(), x_alt, y_alt)?;
            let within = pair.residual <= tol.threshold(scale);
            let better = match &best {
                None => true,
                Some((best_within, best_col, _)) => {
                    (within && !best_within)
                        || (within == *best_within && pair.collinearity < *best_col)
                }
            };
            if better {
                let col = pair.collinearity;
                best = Some((
                    within,
                    col,
                    AttackCertificate {
                        pair,
                        u: u.clone(),
                        v: v.clone(),
                        theta: *theta,
                        phi: *phi,
                    },
                ));
            }
        }
    }
    best.map(|(_, _, c)| c).ok_or_else(|| Error::NoAdmissibleAngles {
        x_elements: xs.len(),
        y_elements: ys.len(),
        detail: format!("{admissible} admissible combinations"),
    })
}

fn check_attack_input(x: &Signal, y: &Signal, tol: &ToleranceProfile) -> Result<()> {
    let (m, n) = (x.len(), y.len());
    if m < 4 || n < 4 || m % 2 == 1 || n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "the attack needs even orders m, n >= 4, got m = {m}, n = {n}"
        )));
    }
    let zero_x = |v: f64| v.abs() <= tol.threshold(x.max_abs());
    let zero_y = |v: f64| v.abs() <= tol.threshold(y.max_abs());
    let ends = [
        ("x(1)", zero_x(x.first())),
        ("x(m)", zero_x(x.last())),
        ("y(1)", zero_y(y.first())),
        ("y(n)", zero_y(y.last())),
    ];
    let vanishing: Vec<&str> = ends.iter().filter(|e| e.1).map(|e| e.0).collect();
    if vanishing.is_empty() {
        return Ok(());
    }
    let shift_pattern = (x.last() == 0.0 && y.first() == 0.0) || (x.first() == 0.0 && y.last() == 0.0);
    let hint = if shift_pattern {
        "; the zero pattern admits a shift ambiguity instead"
    } else {
        ""
    };
    Err(Error::Precondition(format!(
        "the attack needs all four endpoints nonzero, but {} vanish{}",
        vanishing.join(", "),
        hint
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifted::outer;
    use crate::nullspace::n0_element;
    use crate::sampling::{endpoint_safe_signal, rng_from_seed};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sig(v: &[f64]) -> Signal {
        Signal::from_slice(v).unwrap()
    }

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn seeds() -> [Signal; 4] {
        [
            sig(&[1., 0., 1., 0., 0., 0., 0., 0., 1., 0., 1.]),
            sig(&[1., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0.]),
            sig(&[1., 0., 0., 0., 1., 0., 0.]),
            sig(&[1., 0., 1., 0., 1., 0., 1.]),
        ]
    }

    #[test]
    fn rotation_of_the_sparse_seeds() {
        let [x1, x2, y1, y2] = seeds();
        let f = rotational_family(&x1, &x2, &y1, &y2, PI / 3.0, PI / 6.0, &tol()).unwrap();
        let x3 = [-0.366, 0., 0.5, 0., 0., 0., 0., 0., -0.366, 0., 0.5];
        let y3 = [-0.366, 0., -0.866, 0., -0.366, 0., -0.866];
        for (a, b) in f.x1p.as_slice().iter().zip(x3) {
            assert!((a - b).abs() < 5e-4);
        }
        for (a, b) in f.y1p.as_slice().iter().zip(y3) {
            assert!((a - b).abs() < 5e-4);
        }
        let z3 = convolve(&f.x1p, &f.y1p);
        assert!(z3.max_abs_diff(&convolve(&f.x2p, &f.y2p)).unwrap() <= 1e-12);
        assert!((z3[0] - 0.134).abs() < 5e-4);
        assert!(!f.degenerate);
    }

    #[test]
    fn rotation_equal_angles_is_degenerate() {
        let [x1, x2, y1, y2] = seeds();
        let f = rotational_family(&x1, &x2, &y1, &y2, 0.4, 0.4, &tol()).unwrap();
        assert!(f.degenerate);
        assert_eq!(f.x1p, f.x2p);
        assert_eq!(f.y1p, f.y2p);
    }

    #[test]
    fn rotation_rejects_bad_seeds() {
        let [x1, x2, y1, _] = seeds();
        let err = rotational_family(&x1, &x2, &y1, &y1, 0.1, 0.2, &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn smallest_shift() {
        let p = shift_ambiguity(&sig(&[1.0, 0.0]), &sig(&[0.0, 1.0])).unwrap();
        assert_eq!(p.x_alt.as_slice(), &[0.0, 1.0]);
        assert_eq!(p.y_alt.as_slice(), &[1.0, 0.0]);
        assert_eq!(convolve(&p.x_alt, &p.y_alt).as_slice(), &[0.0, 1.0, 0.0]);
        assert_eq!(p.residual, 0.0);
    }

    #[test]
    fn shift_both_patterns() {
        let p = shift_ambiguity(&sig(&[1.0, 2.0, 0.0]), &sig(&[0.0, 3.0, 4.0])).unwrap();
        assert_eq!(p.x_alt.as_slice(), &[0.0, 1.0, 2.0]);
        assert_eq!(p.y_alt.as_slice(), &[3.0, 4.0, 0.0]);
        assert_eq!(p.residual, 0.0);
        let q = shift_ambiguity(&sig(&[0.0, 1.0, 2.0]), &sig(&[3.0, 4.0, 0.0])).unwrap();
        assert_eq!(q.x_alt.as_slice(), &[1.0, 2.0, 0.0]);
        assert_eq!(q.y_alt.as_slice(), &[0.0, 3.0, 4.0]);
        assert_eq!(q.residual, 0.0);
        assert!(verify_pair(&q, &tol()).unwrap().certifies_unidentifiability);
    }

    #[test]
    fn shift_needs_a_pattern() {
        assert!(shift_ambiguity(&sig(&[1.0, 2.0]), &sig(&[3.0, 4.0])).is_err());
        assert!(shift_ambiguity(&sig(&[0.0, 0.0]), &sig(&[0.0, 4.0])).is_err());
    }

    #[test]
    fn scaling_is_not_certified() {
        let x = sig(&[1.0, -2.0, 3.0]);
        let y = sig(&[2.0, 1.0]);
        let p = AmbiguousPair::new(x.clone(), y.clone(), x.scaled(2.0), y.scaled(0.5)).unwrap();
        let r = verify_pair(&p, &tol()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!((r.collinearity - 1.0).abs() < 1e-15);
        assert!(!r.certifies_unidentifiability);
    }

    #[test]
    fn y_form_is_negated_forward_map() {
        let v = sig(&[1.0, -2.0, 0.5]);
        let phi = 0.7;
        let y = y_form(&v, phi).unwrap();
        // y(j) = v(j-1) sin(phi) - v(j) cos(phi)
        let (s, c) = phi.sin_cos();
        let expected = [-v[0] * c, v[0] * s - v[1] * c, v[1] * s - v[2] * c, v[2] * s];
        for (a, b) in y.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn attack_small_example() {
        let x = sig(&[1.0, 2.0, 3.0, 4.0]);
        let y = sig(&[1.0, 1.0, 2.0, 1.0]);
        let c = attack_with_certificate(&x, &y, &tol()).unwrap();
        let scale = convolve(&x, &y).max_abs();
        assert!(c.pair.residual <= 1e-9 * scale);
        assert!(c.pair.collinearity <= 1.0 - 1e-6);
        assert!(verify_pair(&c.pair, &tol()).unwrap().certifies_unidentifiability);

        // x y^T - x' y'^T = sin(phi - theta) n0(u, v)
        let diff = outer(&x, &y).sub(&outer(&c.pair.x_alt, &c.pair.y_alt)).unwrap();
        let expected = n0_element(&c.u, &c.v).scaled((c.phi - c.theta).sin());
        assert!(diff.max_abs_diff(&expected).unwrap() <= 1e-9 * diff.max_abs().max(1.0));
    }

    #[test]
    fn attack_preconditions() {
        let x4 = sig(&[1.0, 2.0, 3.0, 4.0]);
        let err = attack(&sig(&[1.0, 2.0, 3.0]), &x4, &tol()).unwrap_err();
        assert!(err.to_string().contains("even"));
        let err = attack(&sig(&[1.0, 2.0, 3.0, 0.0]), &sig(&[0.0, 1.0, 1.0, 1.0]), &tol()).unwrap_err();
        assert!(err.to_string().contains("shift"));
        let err = attack(&sig(&[1.0, 2.0, 3.0, 0.0]), &x4, &tol()).unwrap_err();
        assert!(err.to_string().contains("x(m)"));
        assert!(!err.to_string().contains("shift"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn attack_certifies_random_pairs(seed in any::<u64>(), hm in 2usize..6, hn in 2usize..6) {
            let mut rng = rng_from_seed(seed);
            let x = endpoint_safe_signal(&mut rng, 2 * hm);
            let y = endpoint_safe_signal(&mut rng, 2 * hn);
            let c = attack_with_certificate(&x, &y, &tol()).unwrap();
            let scale = convolve(&x, &y).max_abs();
            prop_assert!(c.pair.residual <= 1e-8 * scale);
            prop_assert!(c.pair.collinearity <= 1.0 - 1e-6);
            prop_assert!(c.phi.cos().abs() > ANGLE_EPS);
            prop_assert!(c.pair.x_alt[0] != 0.0);
        }

        #[test]
        fn shifted_pairs_are_exact(seed in any::<u64>(), m in 2usize..10, n in 2usize..10, mirrored: bool) {
            let mut rng = rng_from_seed(seed);
            let mut x = endpoint_safe_signal(&mut rng, m).into_vec();
            let mut y = endpoint_safe_signal(&mut rng, n).into_vec();
            if mirrored {
                x[0] = 0.0;
                y[n - 1] = 0.0;
            } else {
                x[m - 1] = 0.0;
                y[0] = 0.0;
            }
            let p = shift_ambiguity(&sig(&x), &sig(&y)).unwrap();
            prop_assert_eq!(p.residual, 0.0);
            prop_assert!(verify_pair(&p, &tol()).unwrap().certifies_unidentifiability);
        }

        #[test]
        fn rotation_preserves_common_output(theta in 0.0f64..6.3, phi in 0.0f64..6.3) {
            let [x1, x2, y1, y2] = seeds();
            let f = rotational_family(&x1, &x2, &y1, &y2, theta, phi, &tol()).unwrap();
            let a = convolve(&f.x1p, &f.y1p);
            let b = convolve(&f.x2p, &f.y2p);
            prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
        }
    }
}
