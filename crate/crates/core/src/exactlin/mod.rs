//! Exact scalar arithmetic and sparse elimination.
//!
//! Every kernel, image and preimage choice made elsewhere in the crate goes
//! through this module, so the conventions here (pivot order, free variables
//! set to zero) fix all the choices downstream.

mod field;
mod matrix;
mod vector;

pub use field::{Field, Scalar};
pub use matrix::{kernel_basis, rank, rref, solve_preimage, Rref, SparseMatrix};
pub use vector::{tensor_concat, LinComb, SparseVec, TensorVec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("index {index} out of bounds ({bound})")]
    IndexOutOfBounds { index: usize, bound: usize },
    #[error("scalars from different fields")]
    FieldMismatch,
    #[error("right-hand side is not in the image")]
    NoSolution,
}
