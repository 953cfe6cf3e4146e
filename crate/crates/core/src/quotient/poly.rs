//! Dense real polynomials in ascending-coefficient form and real-root
//! isolation through companion-matrix eigenvalues.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Imaginary parts below `IMAG_CUTOFF * (1 + |re|)` count as real.
const IMAG_CUTOFF: f64 = 1e-8;
const DEDUP_REL: f64 = 1e-8;
const NEWTON_STEPS: usize = 4;
const SCHUR_MAX_ITER: usize = 10_000;

/// `p(t)` by Horner's rule, with the derivative.
pub(crate) fn eval_with_derivative(coeffs: &[f64], t: f64) -> (f64, f64) {
    coeffs.iter().rev().fold((0.0, 0.0), |(p, dp), &a| (p * t + a, dp * t + p))
}

/// `a(t) * t`.
fn shift_up(a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + 1];
    out[1..].copy_from_slice(a);
    out
}

/// Consistency polynomial `t * s1(t) - 1` for the normalized data
/// `c = w / w(d)`.
///
/// `s(d-1) = 1` and `s(j-1) = c(j) - c(1) t s(j)` for `j = d-1, ..., 2`
/// (one-based) give `s(1)` as a polynomial of degree `d-2` in `t = 1/s(1)`.
pub(crate) fn consistency_polynomial(c: &[f64]) -> Vec<f64> {
    let d = c.len();
    let c1 = c[0];
    let mut s: Vec<f64> = vec![1.0];
    for j in (2..d).rev() {
        // s(j-1) = c(j) - c1 * t * s(j)
        let mut next: Vec<f64> = shift_up(&s).into_iter().map(|a| -c1 * a).collect();
        next[0] += c[j - 1];
        s = next;
    }
    let mut poly = shift_up(&s);
    poly[0] -= 1.0;
    poly
}

/// `s` for a given `t`, by the same recursion evaluated numerically.
pub(crate) fn recursion_vector(c: &[f64], t: f64) -> Vec<f64> {
    let d = c.len();
    let mut s = vec![0.0; d - 1];
    s[d - 2] = 1.0;
    for j in (2..d).rev() {
        s[j - 2] = c[j - 1] - c[0] * t * s[j - 1];
    }
    s
}

/// Real roots of `p` (ascending coefficients, nonzero leading term),
/// sorted ascending.
///
/// Eigenvalues of the balanced companion matrix of the monic normalization;
/// near-real eigenvalues are polished by Newton steps on `p` and merged
/// when within a relative `1e-8` of each other.
pub(crate) fn real_roots(coeffs: &[f64]) -> Result<Vec<f64>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        coeffs.pop();
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if degree == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    // companion matrix with the monic coefficients in the last column
    let mut a = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        a[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        a[(i, degree - 1)] = -coeffs[i] / lead;
    }
    balance(&mut a);

    let schur = a
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| {
            Error::RootFinding(format!(
                "Schur iteration did not converge for a degree-{degree} polynomial"
            ))
        })?;
    let mut roots: Vec<f64> = schur
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= IMAG_CUTOFF * (1.0 + z.re.abs()))
        .map(|z| polish(&coeffs, z.re))
        .collect();

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_REL * a.abs().max(b.abs()).max(1.0));
    Ok(roots)
}

/// Newton steps that are kept only while they reduce `|p|`.
fn polish(coeffs: &[f64], mut t: f64) -> f64 {
    let (mut p, mut dp) = eval_with_derivative(coeffs, t);
    for _ in 0..NEWTON_STEPS {
        if p == 0.0 || dp == 0.0 {
            break;
        }
        let candidate = t - p / dp;
        let (pc, dpc) = eval_with_derivative(coeffs, candidate);
        if pc.abs() >= p.abs() {
            break;
        }
        (t, p, dp) = (candidate, pc, dpc);
    }
    t
}

/// Parlett-Reinsch balancing by powers of two; eigenvalues are unchanged.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let (mut col, mut row) = (0.0, 0.0);
            for j in (0..n).filter(|&j| j != i) {
                col += a[(j, i)].abs();
                row += a[(i, j)].abs();
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}
