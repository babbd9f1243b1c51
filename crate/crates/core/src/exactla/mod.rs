//! Exact scalar fields and sparse linear algebra over them.

mod complex;
mod elim;
mod field;
mod matrix;

pub use complex::FieldComplex;
pub use elim::{kernel_basis, rank, rref_basis, solve, Echelon};
pub use field::{is_prime, Field, FieldSpec, PrimeField, Rationals};
pub use matrix::SparseMatrix;
