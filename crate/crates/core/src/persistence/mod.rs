//! Filtrations from point clouds, classical and Δ_n-persistence barcodes,
//! persistent ranks and the bottleneck distance.

mod barcode;
mod bottleneck;
mod delta;
mod filtration;

pub use barcode::{barcode, count_intervals, persistent_rank, reduce, Reduction};
pub use bottleneck::{bottleneck, bottleneck_all, bottleneck_points, Bottleneck};
pub use delta::{
    ainfty_stage, compatibility, delta_barcode, induced, CompatibilityWarning, DeltaBarcode,
    Flicker, RankTable, StageCoalgebra,
};
pub use filtration::{cech, distance, enclosing_radius, rips, FilteredComplex};

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::dgalg::DgError;
use crate::perturbation::PerturbationError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PersistenceError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("{0}")]
    BadParameter(String),
    #[error("Čech filtration supports ambient dimension ≤ 3 and maxDim ≤ 2, got {ambient} and {max_dim}")]
    UnsupportedDimension { ambient: usize, max_dim: usize },
    #[error("bad simplex {0}")]
    BadSimplex(String),
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("face {face} of {simplex} is missing")]
    FaceMissing { simplex: String, face: String },
    #[error("face {face} of {simplex} enters later than the simplex")]
    FaceLater { simplex: String, face: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramKind {
    Classical,
    Delta(usize),
}

/// A bar `[birth, death)` in homological degree `k`; `death` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub k: usize,
    pub birth: f64,
    pub death: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pub kind: DiagramKind,
    /// Sorted by `(k, birth, death)`.
    pub intervals: Vec<Interval>,
    /// Zero-length pairs left out of `intervals`.
    pub zero_length: usize,
    /// Δ_n kind only: the rank table the intervals were read from.
    pub ranks: Option<RankTable>,
}

impl PersistenceDiagram {
    pub fn new(kind: DiagramKind, mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| {
            (a.k, a.birth, a.death)
                .partial_cmp(&(b.k, b.birth, b.death))
                .expect("no NaN in diagrams")
        });
        PersistenceDiagram {
            kind,
            intervals,
            zero_length: 0,
            ranks: None,
        }
    }

    /// Degrees carrying at least one interval.
    pub fn degrees(&self) -> std::collections::BTreeSet<usize> {
        self.intervals.iter().map(|iv| iv.k).collect()
    }

    pub fn in_degree(&self, k: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |iv| iv.k == k)
    }

    /// Concatenation of diagrams of the same kind.
    pub fn merge(parts: Vec<PersistenceDiagram>) -> PersistenceDiagram {
        let kind = parts.first().map_or(DiagramKind::Classical, |d| d.kind);
        let zero_length = parts.iter().map(|d| d.zero_length).sum();
        let intervals = parts.into_iter().flat_map(|d| d.intervals).collect();
        let mut out = PersistenceDiagram::new(kind, intervals);
        out.zero_length = zero_length;
        out
    }
}
