use serde::{Deserialize, Serialize};

use crate::matrix::DenseMatrix;
use crate::signal::Signal;

/// Parameters witnessing membership of a matrix in one of the characterized
/// families of the rank-two null space.
///
/// `N2` chains nest: `inner` certifies the `(m-1) x (n-1)` matrix
/// `u1 v1^T + u2 v2^T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NullspaceCertificate {
    N0 {
        u: Signal,
        v: Signal,
    },
    N2 {
        u1: Signal,
        u2: Signal,
        v1: Signal,
        v2: Signal,
        inner: Box<NullspaceCertificate>,
    },
    M2 {
        u: Signal,
        lambda: f64,
    },
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    N0,
    N2,
    M2,
    Raw,
}

impl NullspaceCertificate {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Self::N0 { .. } => FamilyKind::N0,
            Self::N2 { .. } => FamilyKind::N2,
            Self::M2 { .. } => FamilyKind::M2,
            Self::Raw => FamilyKind::Raw,
        }
    }

    /// Number of nested `N2` levels above the innermost certificate.
    pub fn depth(&self) -> usize {
        match self {
            Self::N2 { inner, .. } => 1 + inner.depth(),
            _ => 0,
        }
    }

    /// Rebuilds the certified matrix; `Raw` carries nothing to rebuild.
    ///
    /// `N2` levels are assembled by corner embedding only; the inner
    /// certificate is not consulted.
    pub fn reconstruct(&self) -> Option<DenseMatrix> {
        match self {
            Self::N0 { u, v } => Some(super::n0_element(u, v)),
            Self::N2 { u1, u2, v1, v2, .. } => Some(super::n2_assemble(u1, u2, v1, v2)),
            Self::M2 { u, lambda } => Some(super::m2_assemble(u, *lambda)),
            Self::Raw => None,
        }
    }

    /// Certificate for the transposed matrix.
    pub fn transpose(&self) -> NullspaceCertificate {
        match self {
            // n0(u, v)^T = n0(v, -u)
            Self::N0 { u, v } => Self::N0 {
                u: v.clone(),
                v: u.neg(),
            },
            Self::N2 {
                u1,
                u2,
                v1,
                v2,
                inner,
            } => Self::N2 {
                u1: v2.clone(),
                u2: v1.clone(),
                v1: u2.clone(),
                v2: u1.clone(),
                inner: Box::new(inner.transpose()),
            },
            // skew-symmetric: M^T = -M
            Self::M2 { u, lambda } => Self::M2 {
                u: u.neg(),
                lambda: *lambda,
            },
            Self::Raw => Self::Raw,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> Signal {
        Signal::from_slice(v).unwrap()
    }

    #[test]
    fn json_discriminator_and_nesting() {
        let cert = NullspaceCertificate::N2 {
            u1: sig(&[1.0, 0.0]),
            u2: sig(&[0.0, -1.0]),
            v1: sig(&[0.0, 1.0]),
            v2: sig(&[1.0, 0.0]),
            inner: Box::new(NullspaceCertificate::N0 {
                u: sig(&[1.0]),
                v: sig(&[1.0]),
            }),
        };
        let value = serde_json::to_value(&cert).unwrap();
        assert_eq!(value["kind"], "n2");
        assert_eq!(value["inner"]["kind"], "n0");
        assert_eq!(value["inner"]["u"]["entries"][0], 1.0);
        let back: NullspaceCertificate = serde_json::from_value(value).unwrap();
        assert_eq!(back, cert);

        let raw = serde_json::to_string(&NullspaceCertificate::Raw).unwrap();
        assert_eq!(raw, r#"{"kind":"raw"}"#);
        let m2 = serde_json::to_value(NullspaceCertificate::M2 {
            u: sig(&[2.0]),
            lambda: -1.5,
        })
        .unwrap();
        assert_eq!(m2["kind"], "m2");
        assert_eq!(m2["lambda"], -1.5);
    }

    #[test]
    fn transpose_matches_matrix_transpose() {
        let certs = [
            NullspaceCertificate::N0 {
                u: sig(&[1.0, -2.0]),
                v: sig(&[3.0, 0.5, 1.0]),
            },
            NullspaceCertificate::M2 {
                u: sig(&[1.0, 2.0]),
                lambda: 3.0,
            },
        ];
        for cert in &certs {
            let w = cert.reconstruct().unwrap();
            assert_eq!(cert.transpose().reconstruct().unwrap(), w.transpose());
        }
    }
}
