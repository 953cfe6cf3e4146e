use crate::matrix::DenseMatrix;
use crate::tolerance::ToleranceProfile;

/// Numerical rank by Householder QR with column pivoting.
///
/// Counts diagonal entries of `R` above `tol.threshold(max_abs(W))`. The
/// pivot at each step is the remaining column of largest norm, so the
/// diagonal is nonincreasing and elimination stops at the first small pivot.
pub fn rank_estimate(w: &DenseMatrix, tol: &ToleranceProfile) -> usize {
    let threshold = tol.threshold(w.max_abs());
    pivoted_qr_diagonal(w)
        .into_iter()
        .take_while(|d| *d > threshold)
        .count()
}

/// Absolute values of the `R` diagonal of a column-pivoted QR factorization.
pub fn pivoted_qr_diagonal(w: &DenseMatrix) -> Vec<f64> {
    let (m, n) = w.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|c| w.column(c)).collect();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);

    for k in 0..steps {
        // Norms are recomputed rather than downdated; sizes here are small
        // and downdating loses accuracy after cancellation.
        let (pivot, norm) = (k..n)
            .map(|c| (c, tail_norm(&cols[c], k)))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        cols.swap(k, pivot);
        diag.push(norm);
        if norm == 0.0 {
            diag.resize(steps, 0.0);
            break;
        }

        // Householder reflector mapping cols[k][k..] onto a multiple of e_k.
        let alpha = if cols[k][k] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for col in cols.iter_mut().skip(k + 1) {
                let dot: f64 = v.iter().zip(&col[k..]).map(|(a, b)| a * b).sum();
                let f = 2.0 * dot / vnorm2;
                for (ci, vi) in col[k..].iter_mut().zip(&v) {
                    *ci -= f * vi;
                }
            }
        }
        cols[k][k] = alpha;
        for x in cols[k][k + 1..].iter_mut() {
            *x = 0.0;
        }
    }
    diag
}

fn tail_norm(col: &[f64], from: usize) -> f64 {
    // scaled two-norm, avoids overflow for large entries
    let tail = &col[from..];
    let scale = tail.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * tail.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifted::outer;
    use crate::signal::Signal;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(rank_estimate(&DenseMatrix::zeros(4, 3).unwrap(), &tol()), 0);
    }

    #[test]
    fn rank_one_outer() {
        let x = Signal::new(vec![1.0, -2.0, 3.0]).unwrap();
        let y = Signal::new(vec![0.5, 4.0, 0.0, 1.0]).unwrap();
        assert_eq!(rank_estimate(&outer(&x, &y), &tol()), 1);
    }

    #[test]
    fn identity_and_wide() {
        let eye = DenseMatrix::from_fn(5, 5, |r, c| if r == c { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(rank_estimate(&eye, &tol()), 5);
        let wide = DenseMatrix::from_fn(2, 6, |r, c| (r * 6 + c) as f64).unwrap();
        assert_eq!(rank_estimate(&wide, &tol()), 2);
    }

    #[test]
    fn integer_rank_deficient() {
        // third row = first + second
        let w = DenseMatrix::from_rows(&[
            vec![1., 2., 3., 4.],
            vec![0., 1., -1., 2.],
            vec![1., 3., 2., 6.],
        ])
        .unwrap();
        assert_eq!(rank_estimate(&w, &tol()), 2);
    }

    #[test]
    fn diagonal_is_nonincreasing() {
        let w = DenseMatrix::from_fn(6, 4, |r, c| ((r * 7 + c * 3) % 5) as f64 - 2.0).unwrap();
        let d = pivoted_qr_diagonal(&w);
        assert!(d.windows(2).all(|p| p[0] >= p[1] - 1e-12));
    }
}
