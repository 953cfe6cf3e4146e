use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{is_in_rank2_nullspace, NullspaceCertificate};
use crate::error::{Error, Result};
use crate::lifted::outer;
use crate::matrix::DenseMatrix;
use crate::signal::Signal;
use crate::tolerance::ToleranceProfile;

/// A kernel element together with a factorization certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedElement {
    pub matrix: DenseMatrix,
    pub certificate: NullspaceCertificate,
    /// `max |W - reconstruct(certificate)|`; zero for `Raw`.
    pub refactorization_residual: f64,
}

/// Recovers an `N0` or `N2` certificate for a nonzero rank-two kernel
/// element, following the constructive converse factorization.
///
/// Matrices with both `(m, 1)` and `(1, n)` corners at zero are returned as
/// `Raw` without an attempt at factoring; for `m, n >= 3` these form the
/// exception set, which contains the `M2` family.
pub fn classify(w: &DenseMatrix, tol: &ToleranceProfile) -> Result<ClassifiedElement> {
    if w.is_zero() {
        return Err(Error::Precondition("cannot classify the zero matrix".into()));
    }
    if !is_in_rank2_nullspace(w, tol) {
        return Err(Error::Precondition(
            "matrix is not in the rank-two null space of the lifted operator".into(),
        ));
    }
    let certificate = certify(w, tol);
    let refactorization_residual = match certificate.reconstruct() {
        Some(r) => r.max_abs_diff(w)?,
        None => 0.0,
    };
    Ok(ClassifiedElement {
        matrix: w.clone(),
        certificate,
        refactorization_residual,
    })
}

/// Certificate for a matrix already known to be a kernel element.
fn certify(w: &DenseMatrix, tol: &ToleranceProfile) -> NullspaceCertificate {
    let (m, n) = w.shape();
    if m < 2 || n < 2 {
        return NullspaceCertificate::Raw;
    }
    if m == 2 {
        return two_row_n0(w);
    }
    if n == 2 {
        return two_row_n0(&w.transpose()).transpose();
    }
    let scale = w.max_abs();
    let low = w.get(m - 1, 0).abs();
    let high = w.get(0, n - 1).abs();
    if tol.is_zero(low, scale) && tol.is_zero(high, scale) {
        return NullspaceCertificate::Raw;
    }
    if low >= high {
        factor_low_corner(w, tol)
    } else {
        factor_low_corner(&w.transpose(), tol).transpose()
    }
}

/// Every `2 x n` kernel element is `n0((1), v)` with
/// `v(l) = W(0, l+1) = -W(1, l)`; the two readings are averaged.
fn two_row_n0(w: &DenseMatrix) -> NullspaceCertificate {
    let n = w.cols();
    let v = (0..n - 1)
        .map(|l| 0.5 * (w.get(0, l + 1) - w.get(1, l)))
        .collect();
    NullspaceCertificate::N0 {
        u: Signal::from_vec_unchecked(vec![1.0]),
        v: Signal::from_vec_unchecked(v),
    }
}

/// Factors a kernel element with `W(m, 1) != 0`, `m, n >= 3`.
fn factor_low_corner(w: &DenseMatrix, tol: &ToleranceProfile) -> NullspaceCertificate {
    let (m, n) = w.shape();
    let scale = w.max_abs();

    if w.row(0).iter().all(|&x| tol.is_zero(x, scale)) {
        let below = w
            .block(1, m, 0, n)
            .expect("rows 1..m exist for m >= 3");
        let cert = if m - 1 == 2 {
            two_row_n0(&below)
        } else {
            factor_low_corner(&below, tol)
        };
        return pad_top(cert);
    }

    let col0 = w.column(0);
    let u2 = Signal::from_vec_unchecked(col0[1..].to_vec());
    let j0 = independent_column(w, &col0, tol);
    let colj = w.column(j0);
    let pivot = colj[m - 1];
    let u1: Vec<f64> = if tol.is_zero(pivot, scale) {
        colj[..m - 1].to_vec()
    } else {
        let alpha = col0[m - 1] / pivot;
        (0..m - 1).map(|i| alpha * colj[i] - col0[i]).collect()
    };
    let u1 = Signal::from_vec_unchecked(u1);

    let (v, v_star) = fit_rows(w, &u1, &u2);
    let v1 = Signal::from_vec_unchecked(v[1..].to_vec());
    let v2 = Signal::from_vec_unchecked(v_star[..n - 1].to_vec());

    let first = outer(&u1, &v1);
    let second = outer(&u2, &v2);
    let inner_scale = first.max_abs().max(second.max_abs());
    let inner = first.add(&second).expect("equal shapes");
    if tol.is_zero(inner.max_abs(), inner_scale) {
        NullspaceCertificate::N0 { u: u1, v: v1 }
    } else {
        NullspaceCertificate::N2 {
            inner: Box::new(certify(&inner, tol)),
            u1,
            u2,
            v1,
            v2,
        }
    }
}

/// Smallest `j >= 1` whose column is numerically independent of column 0.
///
/// The cutoff is relative to the largest such component so that a column
/// barely above round-off is not preferred over a well separated one.
fn independent_column(w: &DenseMatrix, col0: &[f64], tol: &ToleranceProfile) -> usize {
    let norm0: f64 = col0.iter().map(|x| x * x).sum();
    let residuals: Vec<f64> = (1..w.cols())
        .map(|j| {
            let c = w.column(j);
            let proj = c.iter().zip(col0).map(|(a, b)| a * b).sum::<f64>() / norm0;
            c.iter()
                .zip(col0)
                .map(|(a, b)| (a - proj * b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let largest = residuals.iter().copied().fold(0.0, f64::max);
    let cutoff = tol.threshold(w.max_abs()).max(1e-4 * largest);
    residuals
        .iter()
        .position(|&r| r > cutoff)
        .map_or(1, |p| p + 1)
}

/// Least-squares rows `(v, v_star)` with `W ~ (u1; 0) v^T + (0; u2) v_star^T`.
fn fit_rows(w: &DenseMatrix, u1: &Signal, u2: &Signal) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = w.shape();
    let basis = DMatrix::from_fn(m, 2, |r, c| match (c, r) {
        (0, r) if r < m - 1 => u1[r],
        (1, r) if r >= 1 => u2[r - 1],
        _ => 0.0,
    });
    let rhs = DMatrix::from_row_slice(m, n, w.as_slice());
    let coeffs = basis
        .svd(true, true)
        .solve(&rhs, 0.0)
        .expect("both singular factors were requested");
    (
        coeffs.row(0).iter().copied().collect(),
        coeffs.row(1).iter().copied().collect(),
    )
}

/// Certificate for `[0^T; W]` given a certificate for `W`.
fn pad_top(cert: NullspaceCertificate) -> NullspaceCertificate {
    let pad = |s: &Signal| {
        let mut v = vec![0.0];
        v.extend_from_slice(s.as_slice());
        Signal::from_vec_unchecked(v)
    };
    match cert {
        NullspaceCertificate::N0 { u, v } => NullspaceCertificate::N0 { u: pad(&u), v },
        NullspaceCertificate::N2 {
            u1,
            u2,
            v1,
            v2,
            inner,
        } => NullspaceCertificate::N2 {
            u1: pad(&u1),
            u2: pad(&u2),
            v1,
            v2,
            inner: Box::new(pad_top(*inner)),
        },
        NullspaceCertificate::M2 { .. } | NullspaceCertificate::Raw => NullspaceCertificate::Raw,
    }
}
