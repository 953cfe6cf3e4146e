//! The rank-two null space of the lifted convolution operator.
//!
//! Three explicit families are constructed here:
//!
//! * `N0(m, n)`: bordered products `[u 0; 0 -u] [0 v^T; v^T 0]`, whose two
//!   corner blocks cancel along every anti-diagonal.
//! * `N2(m, n)`: `[u1 0; 0 u2] [0 v1^T; v2^T 0]` where `u1 v1^T + u2 v2^T`
//!   is itself a nonzero kernel element one size down. Elements are built by
//!   recursion from a `2 x k` seed.
//! * `M2(n)`: bordered skew-symmetric matrices with vanishing `(n, 1)` and
//!   `(1, n)` corners, outside both families above.
//!
//! [`classify`] goes the other way and recovers an `N0`/`N2` certificate from
//! any kernel element with a nonzero corner.

mod certificate;
mod classify;

pub use certificate::{FamilyKind, NullspaceCertificate};
pub use classify::{classify, ClassifiedElement};

use rand::Rng;

use crate::error::{mismatch, Error, Result};
use crate::lifted::{antidiagonal_sums, embed_top_right, outer, LiftedConvOp};
use crate::matrix::DenseMatrix;
use crate::rank::rank_estimate;
use crate::sampling::{nonzero_signal, rng_from_seed, MAX_RETRIES};
use crate::signal::Signal;
use crate::tolerance::ToleranceProfile;

/// `N0` element for `u` of length `m-1` and `v` of length `n-1`:
/// `Q(k, l) = u(k) v(l-1) - u(k-1) v(l)` with out-of-range entries read as 0.
pub fn n0_element(u: &Signal, v: &Signal) -> DenseMatrix {
    let uv = outer(u, v);
    let mut q = embed_top_right(&uv);
    for r in 0..u.len() {
        for c in 0..v.len() {
            q.add_at(r + 1, c, -uv.get(r, c));
        }
    }
    q
}

/// Corner embedding `[u1 0; 0 u2] [0 v1^T; v2^T 0]` without any check on
/// the inner matrix.
pub(crate) fn n2_assemble(u1: &Signal, u2: &Signal, v1: &Signal, v2: &Signal) -> DenseMatrix {
    let mut y = embed_top_right(&outer(u1, v1));
    let lower = outer(u2, v2);
    for r in 0..u2.len() {
        for c in 0..v2.len() {
            y.add_at(r + 1, c, lower.get(r, c));
        }
    }
    y
}

/// Lifts a kernel element `u1 v1^T + u2 v2^T` of size `(m-1) x (n-1)` to an
/// `m x n` kernel element by corner embedding.
///
/// Fails unless `m, n >= 3` and the inner matrix is annihilated by the
/// smaller operator to within `tol.rel_tol` times the larger of the two
/// outer products.
pub fn n2_lift(
    u1: &Signal,
    u2: &Signal,
    v1: &Signal,
    v2: &Signal,
    tol: &ToleranceProfile,
) -> Result<DenseMatrix> {
    if u1.len() != u2.len() {
        return Err(mismatch(format!("u2 of length {}", u1.len()), u2.len()));
    }
    if v1.len() != v2.len() {
        return Err(mismatch(format!("v2 of length {}", v1.len()), v2.len()));
    }
    if u1.len() < 2 || v1.len() < 2 {
        return Err(Error::Precondition(format!(
            "N2 lift needs m, n >= 3, got {}x{}",
            u1.len() + 1,
            v1.len() + 1
        )));
    }
    let first = outer(u1, v1);
    let second = outer(u2, v2);
    let scale = first.max_abs().max(second.max_abs());
    let inner = first.add(&second)?;
    let residual = antidiagonal_sums(&inner).max_abs();
    if residual > tol.rel_tol * scale {
        return Err(Error::Precondition(format!(
            "inner matrix is not in the kernel: anti-diagonal residual {residual:e} at scale {scale:e}"
        )));
    }
    Ok(n2_assemble(u1, u2, v1, v2))
}

/// Seeded `N2` sample of size `m x n` with its nested certificate.
pub fn n2_generate(m: usize, n: usize, seed: u64) -> Result<(DenseMatrix, NullspaceCertificate)> {
    n2_sample(m, n, &mut rng_from_seed(seed))
}

/// Draws an `N2` chain of full depth `min(m, n) - 2`.
///
/// Starts from a random `N0` seed of size `2 x (n - m + 2)` and applies a
/// random invertible 2x2 mixing followed by a corner-embedding lift,
/// `m - 2` times. For `m > n` the `n x m` sample is transposed. When
/// `min(m, n) = 2` the result is a plain `N0` element.
pub fn n2_sample<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<(DenseMatrix, NullspaceCertificate)> {
    if m < 2 || n < 2 {
        return Err(Error::Precondition(format!(
            "rank-two kernel elements need m, n >= 2, got {m}x{n}"
        )));
    }
    if m > n {
        let (w, cert) = n2_sample(n, m, rng)?;
        return Ok((w.transpose(), cert.transpose()));
    }

    let u = nonzero_signal(rng, 1, 0.1, "drawing the N0 seed")?;
    let v = nonzero_signal(rng, n - m + 1, 0.1, "drawing the N0 seed")?;
    let mut current = n0_element(&u, &v);
    let mut cert = NullspaceCertificate::N0 {
        u: u.clone(),
        v: v.clone(),
    };
    // rank-two factors of `current`: columns (left_a, left_b), rows (right_a, right_b)
    let zero = Signal::from_vec_unchecked(vec![0.0]);
    let mut left = (concat(&u, &zero), concat(&zero, &u.neg()));
    let mut right = (concat(&zero, &v), concat(&v, &zero));

    let tol = ToleranceProfile::default();
    for _ in 0..m - 2 {
        let (a, det) = draw_mixing(rng)?;
        // [u1 u2] = [left_a left_b] A ;  [v1; v2] = A^{-1} [right_a; right_b]
        let u1 = left.0.combine(a[0][0], &left.1, a[1][0])?;
        let u2 = left.0.combine(a[0][1], &left.1, a[1][1])?;
        let v1 = right.0.combine(a[1][1] / det, &right.1, -a[0][1] / det)?;
        let v2 = right.0.combine(-a[1][0] / det, &right.1, a[0][0] / det)?;

        // keep magnitudes near one; the products u_i v_i^T are unchanged
        let s = u1.max_abs().max(u2.max_abs());
        let (u1, u2, v1, v2) = (u1.scaled(1.0 / s), u2.scaled(1.0 / s), v1.scaled(s), v2.scaled(s));

        let lifted = n2_lift(&u1, &u2, &v1, &v2, &tol)?;
        left = (concat(&u1, &zero), concat(&zero, &u2));
        right = (concat(&zero, &v1), concat(&v2, &zero));
        cert = NullspaceCertificate::N2 {
            u1,
            u2,
            v1,
            v2,
            inner: Box::new(cert),
        };
        current = lifted;
    }
    Ok((current, cert))
}

fn concat(a: &Signal, b: &Signal) -> Signal {
    let mut v = a.as_slice().to_vec();
    v.extend_from_slice(b.as_slice());
    Signal::from_vec_unchecked(v)
}

/// Uniform `[-1, 1]` 2x2 matrix with `|det| >= 0.1`.
fn draw_mixing<R: Rng + ?Sized>(rng: &mut R) -> Result<([[f64; 2]; 2], f64)> {
    for _ in 0..MAX_RETRIES {
        let a = [
            [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)],
            [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)],
        ];
        let det: f64 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() >= 0.1 {
            return Ok((a, det));
        }
    }
    Err(Error::DegenerateDraws {
        attempts: MAX_RETRIES,
        context: "drawing an invertible mixing matrix",
    })
}

pub(crate) fn m2_assemble(u: &Signal, lambda: f64) -> DenseMatrix {
    let n = u.len() + 2;
    let mut x = DenseMatrix::zeros_unchecked(n, n);
    for (i, &ui) in u.as_slice().iter().enumerate() {
        x.set(0, i + 1, -ui);
        x.set(i + 1, 0, ui);
        x.set(i + 1, n - 1, lambda * ui);
        x.set(n - 1, i + 1, -lambda * ui);
    }
    x
}

/// Bordered skew-symmetric element
/// `[0 -u^T 0; u 0 lambda u; 0 -lambda u^T 0]` of size `n x n`, `n = len(u) + 2`.
pub fn m2_element(u: &Signal, lambda: f64) -> Result<DenseMatrix> {
    if u.is_zero() {
        return Err(Error::Precondition("M2 needs a nonzero u".into()));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Precondition(format!(
            "M2 needs a finite nonzero lambda, got {lambda}"
        )));
    }
    Ok(m2_assemble(u, lambda))
}

/// Basis of the full linear kernel of the lifted operator, by Gauss-Jordan
/// elimination on its `(m+n-1) x mn` coefficient matrix.
///
/// Unknowns are the entries of `W` in row-major order; each free unknown
/// contributes one basis matrix. Empty when `m = 1` or `n = 1`.
pub fn kernel_basis(m: usize, n: usize) -> Result<Vec<DenseMatrix>> {
    let op = LiftedConvOp::new(m, n)?;
    let rows = op.output_len();
    let cols = m * n;
    let mut a: Vec<Vec<f64>> = (0..rows)
        .map(|j| {
            (0..cols)
                .map(|idx| if idx / n + idx % n == j { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();

    let pivots = reduced_row_echelon(&mut a, 1e-12);
    let mut is_pivot = vec![None; cols];
    for (row, &col) in pivots.iter().enumerate() {
        is_pivot[col] = Some(row);
    }

    let mut basis = Vec::with_capacity(op.kernel_dim());
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut x = vec![0.0; cols];
        x[free] = 1.0;
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -a[row][free];
        }
        basis.push(DenseMatrix::new(m, n, x)?);
    }
    Ok(basis)
}

/// In-place Gauss-Jordan elimination with partial pivoting; returns the
/// pivot column of each nonzero row.
fn reduced_row_echelon(a: &mut [Vec<f64>], eps: f64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |b, cur| if cur.1 > b.1 { cur } else { b });
        if mag <= eps {
            continue;
        }
        a.swap(r, best);
        let p = a[r][c];
        for v in a[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0.0 {
                let f = row[c];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `rank(W) <= 2` and the anti-diagonal sums of `W` vanish at tolerance.
pub fn is_in_rank2_nullspace(w: &DenseMatrix, tol: &ToleranceProfile) -> bool {
    let scale = w.max_abs();
    antidiagonal_sums(w).max_abs() <= tol.threshold(scale) && rank_estimate(w, tol) <= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{dyadic_signal, uniform_signal};

    fn sig(v: &[f64]) -> Signal {
        Signal::from_slice(v).unwrap()
    }

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn n0_smallest_case() {
        let q = n0_element(&sig(&[1.0]), &sig(&[1.0]));
        assert_eq!(q.to_rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert!(antidiagonal_sums(&q).is_zero());
    }

    #[test]
    fn n0_zero_parameters() {
        assert!(n0_element(&sig(&[0.0, 0.0]), &sig(&[1.0, 2.0, 3.0])).is_zero());
        assert!(n0_element(&sig(&[4.0, 1.0]), &sig(&[0.0, 0.0])).is_zero());
    }

    #[test]
    fn n0_dyadic_cancels_exactly() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let u = dyadic_signal(&mut rng, 4);
            let v = dyadic_signal(&mut rng, 6);
            let q = n0_element(&u, &v);
            assert_eq!(q.shape(), (5, 7));
            assert!(antidiagonal_sums(&q).is_zero());
            assert!(rank_estimate(&q, &tol()) <= 2);
        }
    }

    #[test]
    fn n2_lift_with_opposite_halves_is_n0() {
        let u1 = sig(&[1.0, -2.0, 0.5]);
        let v1 = sig(&[3.0, 1.0, -1.0, 2.0]);
        let y = n2_lift(&u1, &u1.neg(), &v1, &v1, &tol()).unwrap();
        assert_eq!(y, n0_element(&u1, &v1));
    }

    #[test]
    fn n2_lift_rejects_non_kernel_inner() {
        let u = sig(&[1.0, 1.0]);
        let v = sig(&[1.0, 1.0]);
        let err = n2_lift(&u, &u, &v, &v, &tol()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(n2_lift(&sig(&[1.0]), &sig(&[1.0]), &v, &v, &tol()).is_err());
    }

    #[test]
    fn n2_three_by_four_by_hand() {
        // inner X = n0((1), (1, 1)) = [[0, 1, 1], [-1, -1, 0]], split with
        // identity mixing into its two bordered columns
        let u1 = sig(&[1.0, 0.0]);
        let u2 = sig(&[0.0, -1.0]);
        let v1 = sig(&[0.0, 1.0, 1.0]);
        let v2 = sig(&[1.0, 1.0, 0.0]);
        let y = n2_lift(&u1, &u2, &v1, &v2, &tol()).unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![-1.0, -1.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(y, expected);
        assert!(antidiagonal_sums(&y).is_zero());
    }

    #[test]
    fn generate_three_by_three() {
        let (q, cert) = n2_generate(3, 3, 17).unwrap();
        assert_eq!(q.shape(), (3, 3));
        assert!(q.get(2, 0) != 0.0 || q.get(0, 2) != 0.0);
        assert!(is_in_rank2_nullspace(&q, &tol()));
        assert_eq!(cert.kind(), FamilyKind::N2);
        assert_eq!(cert.depth(), 1);
    }

    #[test]
    fn generate_depth_zero_is_n0() {
        let (q, cert) = n2_generate(2, 6, 1).unwrap();
        assert_eq!(cert.kind(), FamilyKind::N0);
        assert_eq!(cert.reconstruct().unwrap(), q);
        let (qt, cert_t) = n2_generate(5, 2, 1).unwrap();
        assert_eq!(qt.shape(), (5, 2));
        assert_eq!(cert_t.kind(), FamilyKind::N0);
    }

    #[test]
    fn generate_is_deterministic_and_full_depth() {
        let a = n2_generate(6, 9, 99).unwrap();
        let b = n2_generate(6, 9, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.1.depth(), 4);
        let (w, cert) = n2_generate(9, 6, 99).unwrap();
        assert_eq!(w.shape(), (9, 6));
        assert_eq!(cert.depth(), 4);
        assert!(is_in_rank2_nullspace(&w, &tol()));
        assert!(cert.reconstruct().unwrap().max_abs_diff(&w).unwrap() <= 1e-12);
    }

    #[test]
    fn generate_rejects_degenerate_sizes() {
        assert!(n2_generate(1, 5, 0).is_err());
    }

    #[test]
    fn m2_three_by_three() {
        let x = m2_element(&sig(&[1.0]), 1.0).unwrap();
        assert_eq!(
            x.to_rows(),
            vec![vec![0.0, -1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, -1.0, 0.0]]
        );
        assert!(antidiagonal_sums(&x).is_zero());
        assert_eq!(rank_estimate(&x, &tol()), 2);
    }

    #[test]
    fn m2_skew_and_corners() {
        let mut rng = rng_from_seed(8);
        for n in 3..9 {
            let u = uniform_signal(&mut rng, n - 2);
            let x = m2_element(&u, -0.7).unwrap();
            assert_eq!(x.transpose(), x.scaled(-1.0));
            assert_eq!(x.get(n - 1, 0), 0.0);
            assert_eq!(x.get(0, n - 1), 0.0);
            assert!(antidiagonal_sums(&x).is_zero());
            assert_eq!(rank_estimate(&x, &tol()), 2);
        }
    }

    #[test]
    fn m2_rejects_zero_parameters() {
        assert!(m2_element(&sig(&[0.0, 0.0]), 1.0).is_err());
        assert!(m2_element(&sig(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn kernel_basis_sizes() {
        assert!(kernel_basis(1, 7).unwrap().is_empty());
        assert!(kernel_basis(4, 1).unwrap().is_empty());
        assert_eq!(kernel_basis(3, 4).unwrap().len(), 6);
    }

    #[test]
    fn kernel_basis_two_rows_structure() {
        let basis = kernel_basis(2, 5).unwrap();
        assert_eq!(basis.len(), 4);
        for q in &basis {
            assert_eq!(q.get(0, 0), 0.0);
            assert_eq!(q.get(1, 4), 0.0);
            for c in 0..4 {
                assert_eq!(q.get(0, c + 1), -q.get(1, c));
            }
            assert!(antidiagonal_sums(q).is_zero());
        }
    }

    #[test]
    fn membership() {
        let q = n0_element(&sig(&[1.0, 2.0]), &sig(&[-1.0, 0.5, 3.0]));
        assert!(is_in_rank2_nullspace(&q, &tol()));
        let x = sig(&[1.0, 2.0, 3.0]);
        let y = sig(&[0.0, 1.0, 1.0, 1.0]);
        assert!(!is_in_rank2_nullspace(&outer(&x, &y), &tol()));
        assert!(is_in_rank2_nullspace(&m2_element(&sig(&[1.0, -1.0]), 2.0).unwrap(), &tol()));
        // generic kernel element of a 4x4 operator has full rank
        let big = kernel_basis(4, 4)
            .unwrap()
            .iter()
            .enumerate()
            .fold(DenseMatrix::zeros(4, 4).unwrap(), |acc, (i, q)| {
                acc.add(&q.scaled((i * i + 1) as f64)).unwrap()
            });
        assert!(antidiagonal_sums(&big).is_zero());
        assert!(rank_estimate(&big, &tol()) > 2);
        assert!(!is_in_rank2_nullspace(&big, &tol()));
    }
}
