//! Dense linear algebra: matrices, vectors, commutators and the matrix
//! exponential used by every propagator.

mod expm;
mod matrix;

pub use expm::matrix_exp;
pub use matrix::{commutator, Matrix, Vector, VectorNorm};
