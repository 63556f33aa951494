use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{Field, SparseMatrix, SparseVec};

use super::basis::{GradedBasis, Shape};
use super::map::ChainMap;
use super::ComplexError;

/// A finite based chain complex with homological grading (`d` lowers degree
/// by one). The basis window `[min_deg, max_deg]` is the truncation window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: Field,
    basis: GradedBasis,
    differential: ChainMap,
}

/// Where `d ∘ d` first fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFailure {
    pub degree: i32,
    pub label: String,
}

impl fmt::Display for SquareFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d∘d ≠ 0 on {} in degree {}", self.label, self.degree)
    }
}

impl ChainComplex {
    pub fn new(
        field: Field,
        basis: GradedBasis,
        differential: ChainMap,
    ) -> Result<Self, ComplexError> {
        if differential.shift() != -1
            || differential.source() != basis.shape()
            || differential.target() != basis.shape()
        {
            return Err(ComplexError::ShapeMismatch(
                "differential must be a degree -1 endomorphism of the basis".into(),
            ));
        }
        Ok(ChainComplex {
            field,
            basis,
            differential,
        })
    }

    /// Builds a complex from matrices `d_n : C_n -> C_{n-1}` keyed by `n`.
    pub fn from_matrices(
        field: Field,
        basis: GradedBasis,
        d: &BTreeMap<i32, SparseMatrix>,
    ) -> Result<Self, ComplexError> {
        let shape = basis.shape().clone();
        let differential = ChainMap::from_components(field, shape.clone(), shape, -1, d)?;
        ChainComplex::new(field, basis, differential)
    }

    /// A complex with zero differential.
    pub fn zero_differential(field: Field, basis: GradedBasis) -> Self {
        let shape = basis.shape().clone();
        let differential = ChainMap::zero(field, shape.clone(), shape, -1);
        ChainComplex {
            field,
            basis,
            differential,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn shape(&self) -> &Shape {
        self.basis.shape()
    }

    pub fn differential(&self) -> &ChainMap {
        &self.differential
    }

    /// `d_n : C_n -> C_{n-1}`.
    pub fn d(&self, n: i32) -> SparseMatrix {
        self.differential.component(n)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.shape().dim(n)
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.shape().degree_of(i)
    }

    pub fn boundary(&self, v: &SparseVec) -> SparseVec {
        self.differential.apply(v)
    }

    /// Replaces the differential, keeping the basis.
    pub fn with_differential(&self, differential: ChainMap) -> Result<Self, ComplexError> {
        ChainComplex::new(self.field, self.basis.clone(), differential)
    }

    /// `dim ker d_n - rank d_{n+1}` for each degree of the window.
    pub fn betti_numbers(&self) -> BTreeMap<i32, usize> {
        self.shape()
            .degrees()
            .map(|n| {
                let dn = self.d(n);
                let z = dn.cols() - dn.rank();
                let b = self.d(n + 1).rank();
                (n, z - b)
            })
            .collect()
    }

    pub fn verify(&self) -> Result<(), SquareFailure> {
        for i in 0..self.shape().total() {
            let dd = self.boundary(self.differential.column(i));
            if !dd.is_zero() {
                return Err(SquareFailure {
                    degree: self.degree_of(i),
                    label: self.basis.label(i).to_string(),
                });
            }
        }
        Ok(())
    }
}

pub fn verify_complex(c: &ChainComplex) -> Result<(), SquareFailure> {
    c.verify()
}
