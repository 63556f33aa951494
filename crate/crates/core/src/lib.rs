//! Exact computation of A∞ structures on homology by homotopy transfer and
//! perturbation, with persistence barcodes built on top.

pub mod complexes;
pub mod exactlin;
pub mod dgalg;
pub mod transfer;
pub mod perturbation;
pub mod persistence;
