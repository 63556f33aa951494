use std::collections::BTreeMap;

use crate::exactlin::{Field, Scalar, SparseMatrix, SparseVec};

use super::basis::Shape;
use super::ComplexError;

/// A graded linear map `C_n -> D_{n + shift}`, stored as the image of every
/// source basis element in global target coordinates.
///
/// Chain maps, homotopies and differentials all use this type; whether the
/// map commutes with differentials is a property checked separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    field: Field,
    source: Shape,
    target: Shape,
    shift: i32,
    columns: Vec<SparseVec>,
}

impl ChainMap {
    pub fn zero(field: Field, source: Shape, target: Shape, shift: i32) -> Self {
        let n = source.total();
        ChainMap {
            field,
            source,
            target,
            shift,
            columns: vec![SparseVec::new(); n],
        }
    }

    pub fn identity(field: Field, shape: &Shape) -> Self {
        ChainMap {
            field,
            source: shape.clone(),
            target: shape.clone(),
            shift: 0,
            columns: (0..shape.total())
                .map(|i| SparseVec::basis(i, field))
                .collect(),
        }
    }

    /// Builds a map from images of source basis elements, checking that each
    /// image lies in the expected target degree.
    pub fn from_columns(
        field: Field,
        source: Shape,
        target: Shape,
        shift: i32,
        columns: Vec<SparseVec>,
    ) -> Result<Self, ComplexError> {
        if columns.len() != source.total() {
            return Err(ComplexError::ShapeMismatch(format!(
                "{} columns for a source of dimension {}",
                columns.len(),
                source.total()
            )));
        }
        for (i, col) in columns.iter().enumerate() {
            let want = target.range(source.degree_of(i) + shift);
            if let Some(bad) = col.keys().find(|k| !want.contains(k)) {
                return Err(ComplexError::DegreeMismatch {
                    column: i,
                    target_index: *bad,
                });
            }
        }
        Ok(ChainMap {
            field,
            source,
            target,
            shift,
            columns,
        })
    }

    /// Builds a map from per-degree matrices `C_n -> D_{n+shift}` (keyed by
    /// source degree); missing degrees are zero.
    pub fn from_components(
        field: Field,
        source: Shape,
        target: Shape,
        shift: i32,
        components: &BTreeMap<i32, SparseMatrix>,
    ) -> Result<Self, ComplexError> {
        let mut map = ChainMap::zero(field, source.clone(), target.clone(), shift);
        for (&n, m) in components {
            let (rows, cols) = (target.dim(n + shift), source.dim(n));
            if m.rows() != rows || m.cols() != cols {
                return Err(ComplexError::ShapeMismatch(format!(
                    "component at degree {n} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            let row_off = target.offset(n + shift);
            for (c, col) in m.columns().iter().enumerate() {
                map.columns[source.global(n, c)] = col.map_keys(|&r| r + row_off);
            }
        }
        Ok(map)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &Shape {
        &self.source
    }

    pub fn target(&self) -> &Shape {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Image of the source basis element with global index `i`.
    pub fn column(&self, i: usize) -> &SparseVec {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, c) in v {
            out.add_scaled(&self.columns[i], c);
        }
        out
    }

    /// The matrix `C_n -> D_{n+shift}` in local coordinates.
    pub fn component(&self, n: i32) -> SparseMatrix {
        let rows = self.target.dim(n + self.shift);
        let row_off = self.target.offset(n + self.shift);
        let cols = self.source.range(n).map(|i| self.columns[i].map_keys(|&r| r - row_off));
        SparseMatrix::from_columns(self.field, rows, cols.collect())
            .expect("columns respect the target degree")
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    /// First source basis element with a nonzero image.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.columns.iter().position(|c| !c.is_zero())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        if other.target != self.source {
            return Err(ComplexError::ShapeMismatch(
                "target of the inner map differs from source of the outer map".into(),
            ));
        }
        Ok(ChainMap {
            field: self.field,
            source: other.source.clone(),
            target: self.target.clone(),
            shift: self.shift + other.shift,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        self.combine(other, &self.field.one())
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap, ComplexError> {
        self.combine(other, &self.field.from_i64(-1))
    }

    fn combine(&self, other: &ChainMap, c: &Scalar) -> Result<ChainMap, ComplexError> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift
        {
            return Err(ComplexError::ShapeMismatch(
                "adding maps between different graded spaces".into(),
            ));
        }
        let mut out = self.clone();
        for (a, b) in out.columns.iter_mut().zip(&other.columns) {
            a.add_scaled(b, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap {
            columns: self.columns.iter().map(|v| v.scaled(c)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&self.field.from_i64(-1))
    }
}

pub fn compose(a: &ChainMap, b: &ChainMap) -> Result<ChainMap, ComplexError> {
    a.compose(b)
}
