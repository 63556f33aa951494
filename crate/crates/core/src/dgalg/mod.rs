//! Dg-algebras and dg-coalgebras, A∞ structure containers with Stasheff
//! checking, and endomorphism dg-algebras of free complexes.

mod ainfty;
mod algebra;
mod coalgebra;
mod endo;
mod simplicial;

pub use ainfty::{
    costasheff_value, enumerate_tuples, stasheff_defect, stasheff_value, AInfinityMorphism,
    AInfinityStructure, CoOp, Defect, Kind, MultiOp, Operations,
};
pub use algebra::{check_dga, AxiomFailure, DGAlgebra, DgaAxiom};
pub use coalgebra::{check_dgc, dual_algebra, dual_coalgebra, DGCoalgebra};
pub use simplicial::{simplex_label, simplicial_coalgebra};
pub use endo::{
    cyclic_resolution, endomorphism_dga, endomorphism_dga_with_basis, Elementary, FreeComplex,
};

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::exactlin::LinAlgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("bad structure constant: {0}")]
    BadStructureConstant(String),
    #[error("operation of arity {0} is not populated")]
    MissingArity(usize),
    #[error("window top {0} is too small (need at least two degrees)")]
    WindowTooSmall(i32),
}
