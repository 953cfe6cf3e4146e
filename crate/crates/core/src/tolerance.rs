use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mixed absolute/relative tolerance.
///
/// A quantity is treated as zero when its magnitude is at most
/// `abs_tol + rel_tol * scale`, where `scale` is the largest absolute entry
/// among the operands being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
        }
    }
}

impl ToleranceProfile {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol >= 0.0 && abs_tol.is_finite()) || !(rel_tol >= 0.0 && rel_tol.is_finite()) {
            return Err(Error::Precondition(format!(
                "tolerances must be finite and nonnegative (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    /// Threshold below which a value is considered zero at the given scale.
    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }

    #[inline]
    pub fn is_zero(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.threshold(scale)
    }
}

/// Largest absolute value in a slice, 0 for an empty slice.
pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}
