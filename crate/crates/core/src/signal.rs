use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};

/// A finite, nonempty real vector. Indexing is zero-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalRepr", into = "SignalRepr")]
pub struct Signal(Vec<f64>);

#[derive(Serialize, Deserialize)]
struct SignalRepr {
    len: usize,
    entries: Vec<f64>,
}

impl TryFrom<SignalRepr> for Signal {
    type Error = Error;

    fn try_from(repr: SignalRepr) -> Result<Self> {
        if repr.len != repr.entries.len() {
            return Err(mismatch(
                format!("{} entries", repr.len),
                format!("{} entries", repr.entries.len()),
            ));
        }
        Signal::new(repr.entries)
    }
}

impl From<Signal> for SignalRepr {
    fn from(s: Signal) -> Self {
        SignalRepr {
            len: s.0.len(),
            entries: s.0,
        }
    }
}

impl Signal {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Signal(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    /// Builds a signal from values already known to be finite and nonempty.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty() && entries.iter().all(|v| v.is_finite()));
        Signal(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn first(&self) -> f64 {
        self.0[0]
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn max_abs(&self) -> f64 {
        crate::tolerance::max_abs(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Signal) -> Result<f64> {
        if self.len() != other.len() {
            return Err(mismatch(self.len(), other.len()));
        }
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, alpha: f64) -> Signal {
        Signal(self.0.iter().map(|v| v * alpha).collect())
    }

    pub fn neg(&self) -> Signal {
        self.scaled(-1.0)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Signal, b: f64) -> Result<Signal> {
        if self.len() != other.len() {
            return Err(mismatch(self.len(), other.len()));
        }
        Ok(Signal(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        ))
    }

    /// Infinity-norm distance to another signal of the same length.
    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        if self.len() != other.len() {
            return Err(mismatch(self.len(), other.len()));
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
    }

    /// `|<self, other>| / (|self| |other|)`, or 1 when either vector is zero.
    ///
    /// A zero vector is collinear with everything, so it never certifies a
    /// distinct solution.
    pub fn collinearity(&self, other: &Signal) -> Result<f64> {
        let dot = self.dot(other)?;
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return Ok(1.0);
        }
        Ok((dot.abs() / denom).min(1.0))
    }
}

impl Index<usize> for Signal {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(Signal::new(vec![]), Err(Error::EmptySignal));
        assert_eq!(
            Signal::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFinite { index: 1 })
        );
        assert_eq!(
            Signal::new(vec![f64::NAN]),
            Err(Error::NonFinite { index: 0 })
        );
    }

    #[test]
    fn json_shape() {
        let s = Signal::new(vec![1.0, -2.5]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"len":2,"entries":[1.0,-2.5]}"#);
        let back: Signal = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_len_must_match() {
        let bad = r#"{"len":3,"entries":[1.0,2.0]}"#;
        assert!(serde_json::from_str::<Signal>(bad).is_err());
        let empty = r#"{"len":0,"entries":[]}"#;
        assert!(serde_json::from_str::<Signal>(empty).is_err());
    }

    #[test]
    fn collinearity_of_multiples() {
        let x = Signal::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!((x.collinearity(&x.scaled(-4.0)).unwrap() - 1.0).abs() < 1e-15);
        let e1 = Signal::new(vec![1.0, 0.0]).unwrap();
        let e2 = Signal::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(e1.collinearity(&e2).unwrap(), 0.0);
        assert_eq!(e1.collinearity(&Signal::zeros(2).unwrap()).unwrap(), 1.0);
    }
}
