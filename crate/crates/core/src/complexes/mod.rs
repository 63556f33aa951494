//! Graded based chain complexes, graded maps, Koszul signs, tensor powers
//! and contractions onto homology.

mod basis;
mod complex;
mod contraction;
mod koszul;
mod map;
mod tensor;

pub use basis::{GradedBasis, Shape};
pub use complex::{verify_complex, ChainComplex, SquareFailure};
pub use contraction::{homology_contraction, Contraction, ContractionFailure, Identity};
pub use koszul::{koszul_sign, parity_sign};
pub use map::{compose, ChainMap};
pub use tensor::{
    sign_scalar, tensor_apply, tensor_differential, tensor_map, tuple_degree, TensorPower,
};

use thiserror::Error;

use crate::exactlin::LinAlgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate label {label:?} in degree {degree}")]
    DuplicateLabel { degree: i32, label: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("image of basis element {column} has a term {target_index} in the wrong degree")]
    DegreeMismatch { column: usize, target_index: usize },
    #[error("not a complex: {0}")]
    NotAComplex(SquareFailure),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}
