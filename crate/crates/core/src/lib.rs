//! Constructions and checks for the ambiguity space of blind linear
//! deconvolution.
//!
//! The lifted convolution operator maps an `m x n` matrix to its
//! anti-diagonal sums. Two input pairs `(x, y)` and `(x', y')` share a
//! convolution output exactly when `x y^T - x' y'^T` lies in its rank-two
//! null space, so the crate is organized around that set:
//!
//! * [`lifted`]: convolution, the lifted operator, its Hankel selectors.
//! * [`nullspace`]: constructors for the known families of rank-two kernel
//!   elements, a full kernel basis, and a certificate-producing classifier.
//! * [`quotient`]: the bordered rotation decomposition `w = [w* 0; 0 -w*]
//!   (cos g, sin g)` solved through a consistency polynomial.
//! * [`ambiguity`]: unidentifiable pairs from rotations, zero-padding shifts
//!   and the even-order attack, plus a verifier.
//! * [`campaign`]: seeded Monte-Carlo suites and the worked-example checks.

pub mod ambiguity;
pub mod campaign;
pub mod error;
pub mod lifted;
pub mod matrix;
pub mod nullspace;
pub mod quotient;
pub mod rank;
pub mod sampling;
pub mod signal;
pub mod tolerance;

pub use error::{Error, Result};
pub use lifted::{antidiagonal_shift, convolve, hankel_basis, lift_apply, outer, LiftedConvOp};
pub use matrix::DenseMatrix;
pub use rank::rank_estimate;
pub use signal::Signal;
pub use tolerance::ToleranceProfile;
