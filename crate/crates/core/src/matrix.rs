use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};

/// Dense real matrix stored row-major. Indexing is zero-based `(row, col)`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    m: usize,
    n: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for DenseMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.m {
            return Err(mismatch(
                format!("{} rows", repr.m),
                format!("{} rows", repr.entries.len()),
            ));
        }
        if let Some((row, r)) = repr
            .entries
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != repr.n)
        {
            return Err(Error::RaggedRows {
                row,
                expected: repr.n,
                found: r.len(),
            });
        }
        let data = repr.entries.into_iter().flatten().collect();
        DenseMatrix::new(repr.m, repr.n, data)
    }
}

impl From<DenseMatrix> for MatrixRepr {
    fn from(w: DenseMatrix) -> Self {
        MatrixRepr {
            m: w.rows,
            n: w.cols,
            entries: w.data.chunks(w.cols).map(<[f64]>::to_vec).collect(),
        }
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(mismatch(
                format!("{} entries", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        Self::try_from(MatrixRepr {
            m,
            n,
            entries: rows.to_vec(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
    }

    pub(crate) fn zeros_unchecked(rows: usize, cols: usize) -> Self {
        debug_assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub(crate) fn add_at(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] += v;
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros_unchecked(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        crate::tolerance::max_abs(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, alpha: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    fn check_same_shape(&self, other: &DenseMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(mismatch(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.add(&other.scaled(-1.0))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
    }

    /// Trace inner product `<self, other>` = sum of entrywise products.
    pub fn inner(&self, other: &DenseMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Result<DenseMatrix> {
        if r0 >= r1 || c0 >= c1 || r1 > self.rows || c1 > self.cols {
            return Err(Error::Precondition(format!(
                "block {r0}..{r1} x {c0}..{c1} outside {}x{}",
                self.rows, self.cols
            )));
        }
        DenseMatrix::from_fn(r1 - r0, c1 - c0, |r, c| self.get(r0 + r, c0 + c))
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let w = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"m":2,"n":3,"entries":[[1.0,2.0,3.0],[4.0,5.0,6.0]]}"#);
        let back: DenseMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn json_rejects_ragged_and_wrong_counts() {
        let ragged = r#"{"m":2,"n":2,"entries":[[1.0,2.0],[3.0]]}"#;
        assert!(serde_json::from_str::<DenseMatrix>(ragged).is_err());
        let rows = r#"{"m":3,"n":1,"entries":[[1.0],[2.0]]}"#;
        assert!(serde_json::from_str::<DenseMatrix>(rows).is_err());
        let empty = r#"{"m":0,"n":0,"entries":[]}"#;
        assert!(serde_json::from_str::<DenseMatrix>(empty).is_err());
    }

    #[test]
    fn transpose_and_block() {
        let w = DenseMatrix::from_fn(2, 3, |r, c| (10 * r + c) as f64).unwrap();
        let t = w.transpose();
        assert_eq!(t.shape(), (3, 2));
        assert_eq!(t.get(2, 1), 12.0);
        let b = w.block(0, 2, 1, 3).unwrap();
        assert_eq!(b.to_rows(), vec![vec![1.0, 2.0], vec![11.0, 12.0]]);
        assert!(w.block(0, 3, 0, 1).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            DenseMatrix::new(1, 2, vec![0.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        );
    }
}
