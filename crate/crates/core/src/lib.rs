//! Group gradings on matrix algebras and on the classical simple Lie
//! algebras of types A, B, C, D.
//!
//! Scalars are exact elements of cyclotomic fields; matrices are generic
//! over [`linalg::Field`] so the same kernels serve exact and numeric work.

pub mod abgroup;
pub mod bichar;
pub mod classify;
pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod graded_matrix;
pub mod involution;
pub mod lie_grading;
pub mod linalg;
pub mod rational;

pub use cyclotomic::{CycloNum, RootOfUnity};
pub use error::{GradingError, Result};
pub use linalg::{Field, Matrix};
pub use rational::Rational;

/// Exact matrices over Q(ζ_N); the scalar type of every constructed grading.
pub type CycloMatrix = Matrix<CycloNum>;
/// Exact rational matrices.
pub type QMatrix = Matrix<Rational>;
/// Double-precision complex matrices for numeric recognition steps.
pub type ComplexMatrix = Matrix<num_complex::Complex64>;
