//! Linear convolution and its lift to matrices.
//!
//! The lifted operator maps an `m x n` matrix to the vector of its
//! anti-diagonal sums, so that applying it to `x y^T` reproduces `x * y`.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::matrix::DenseMatrix;
use crate::signal::Signal;

/// Full linear convolution, length `m + n - 1`.
pub fn convolve(x: &Signal, y: &Signal) -> Signal {
    let (m, n) = (x.len(), y.len());
    let mut z = vec![0.0; m + n - 1];
    // Output index l accumulates x(i) y(l - i) in increasing i, the same
    // order in which `LiftedConvOp::apply` walks an anti-diagonal.
    for (i, &xi) in x.as_slice().iter().enumerate() {
        for (k, &yk) in y.as_slice().iter().enumerate() {
            z[i + k] += xi * yk;
        }
    }
    Signal::from_vec_unchecked(z)
}

/// `x y^T`.
pub fn outer(x: &Signal, y: &Signal) -> DenseMatrix {
    let mut w = DenseMatrix::zeros_unchecked(x.len(), y.len());
    for (r, &xr) in x.as_slice().iter().enumerate() {
        for (c, &yc) in y.as_slice().iter().enumerate() {
            w.set(r, c, xr * yc);
        }
    }
    w
}

/// The lifted convolution operator for `m x n` matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftedConvOp {
    m: usize,
    n: usize,
}

impl LiftedConvOp {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix { rows: m, cols: n });
        }
        Ok(Self { m, n })
    }

    pub fn for_matrix(w: &DenseMatrix) -> Self {
        Self {
            m: w.rows(),
            n: w.cols(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn output_len(&self) -> usize {
        self.m + self.n - 1
    }

    /// Dimension of the linear kernel: `mn - (m + n - 1)`.
    pub fn kernel_dim(&self) -> usize {
        self.m * self.n - self.output_len()
    }

    /// Anti-diagonal sums of `w`; entry `j` collects every `w(k, l)` with
    /// `k + l = j` (zero-based).
    pub fn apply(&self, w: &DenseMatrix) -> Result<Signal> {
        if w.shape() != (self.m, self.n) {
            return Err(mismatch(
                format!("{}x{}", self.m, self.n),
                format!("{}x{}", w.rows(), w.cols()),
            ));
        }
        let mut z = vec![0.0; self.output_len()];
        for r in 0..self.m {
            for (c, &v) in w.row(r).iter().enumerate() {
                z[r + c] += v;
            }
        }
        Ok(Signal::from_vec_unchecked(z))
    }

    /// The `j`-th Hankel selector: ones exactly where `k + l = j`.
    pub fn selector(&self, j: usize) -> Result<DenseMatrix> {
        if j >= self.output_len() {
            return Err(Error::Precondition(format!(
                "selector index {j} out of range for {} outputs",
                self.output_len()
            )));
        }
        DenseMatrix::from_fn(self.m, self.n, |k, l| if k + l == j { 1.0 } else { 0.0 })
    }
}

pub fn lift_apply(op: &LiftedConvOp, w: &DenseMatrix) -> Result<Signal> {
    op.apply(w)
}

/// Shorthand for applying the operator matching `w`'s own shape.
pub fn antidiagonal_sums(w: &DenseMatrix) -> Signal {
    LiftedConvOp::for_matrix(w)
        .apply(w)
        .expect("operator built from the matrix shape")
}

/// All `m + n - 1` Hankel selectors, materialized.
pub fn hankel_basis(m: usize, n: usize) -> Result<Vec<DenseMatrix>> {
    let op = LiftedConvOp::new(m, n)?;
    (0..op.output_len()).map(|j| op.selector(j)).collect()
}

/// Places `block` in rows `0..m-1`, columns `1..n` of an `m x n` zero matrix,
/// where `block` is `(m-1) x (n-1)`.
pub(crate) fn embed_top_right(block: &DenseMatrix) -> DenseMatrix {
    let (p, q) = block.shape();
    let mut w = DenseMatrix::zeros_unchecked(p + 1, q + 1);
    for r in 0..p {
        for c in 0..q {
            w.set(r, c + 1, block.get(r, c));
        }
    }
    w
}

/// Places `block` in rows `1..m`, columns `0..n-1`.
pub(crate) fn embed_bottom_left(block: &DenseMatrix) -> DenseMatrix {
    let (p, q) = block.shape();
    let mut w = DenseMatrix::zeros_unchecked(p + 1, q + 1);
    for r in 0..p {
        for c in 0..q {
            w.set(r + 1, c, block.get(r, c));
        }
    }
    w
}

/// Embeds an `(m-1) x (n-1)` matrix into the top-right and bottom-left
/// corners of `m x n` zero matrices. The two embeddings have identical
/// anti-diagonal sums `(0, S'(Wp), 0)`.
pub fn antidiagonal_shift(wp: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    (embed_top_right(wp), embed_bottom_left(wp))
}
