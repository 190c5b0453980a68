//! Exact Hankel determinant calculus.
//!
//! Starting from a finite prefix of a real sequence, held as exact rationals,
//! this crate computes Hankel determinants and their shifted variants, the
//! associated determinant polynomials `P_n` and `Q_n`, Iohvidov approximating
//! sequences and gap identities, finite-rank certificates, the inverse
//! determinant problem, and recovery of finitely supported measures.
//!
//! Any statement about the infinite sequence is certified only up to the
//! length of the prefix; reports carry that horizon.

pub mod error;
pub mod hankel;
pub mod hankel_poly;
pub mod inverse;
pub mod io;
pub mod iohvidov;
pub mod kronecker;
pub mod matrix;
pub mod measure;
pub mod poly;
pub mod scalar;
pub mod sequence;

pub use rug::{Float, Integer, Rational};

pub use error::{Error, ParseError, Result};
pub use hankel::{
    determinant_transform, hankel_det, hankel_minor, matrix_rank, shifted_det, DeterminantProfile,
};
pub use hankel_poly::{
    apply_l, frobenius_recurrence_residual, jacobi_from_moments, kronecker_residual,
    moments_from_jacobi, poly_p, poly_q, solve_prescribed, JacobiCoeffs,
};
pub use poly::Polynomial;
pub use sequence::MomentSequence;

/// The polynomial type used for `P_n`, `Q_n` and every derived polynomial.
pub type HankelPolynomial = Polynomial;
