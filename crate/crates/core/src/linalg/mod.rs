//! Dense complex linear algebra: products, Cholesky solves, right
//! pseudo-inverses, rank-1 complement projectors and power iteration.
//!
//! Matrices are row-major and dense; every dimension in this crate is at
//! most a few hundred, so no blocking is attempted.

mod decomp;
mod eigen;
mod kernel;
mod matrix;
mod vector;

pub use decomp::{orth_complement_projector, right_pseudo_inverse, solve_hermitian_posdef, Cholesky};
pub use eigen::{dominant_eigenvector, power_step, DEFAULT_POWER_MAX_ITER, DEFAULT_POWER_TOL};
pub use matrix::{frobenius_norm_sq, hermitian, matmul, ComplexMatrix};
pub use vector::ComplexVector;

pub use num_complex::Complex64;
