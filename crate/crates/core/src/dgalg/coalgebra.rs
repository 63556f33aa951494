use std::collections::BTreeMap;

use crate::complexes::{tensor_apply, ChainComplex, ChainMap, GradedBasis, Shape};
use crate::exactlin::{SparseVec, TensorVec};

use super::algebra::{AxiomFailure, DGAlgebra, DgaAxiom};
use super::DgError;

/// A dg-coalgebra: a chain complex with a degree 0 coassociative coproduct
/// given per basis element as a sum of basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGCoalgebra {
    complex: ChainComplex,
    coproducts: Vec<TensorVec>,
}

impl DGCoalgebra {
    pub fn new(complex: ChainComplex, coproducts: Vec<TensorVec>) -> Result<Self, DgError> {
        let shape = complex.shape();
        if coproducts.len() != shape.total() {
            return Err(DgError::BadStructureConstant(format!(
                "{} coproducts for {} basis elements",
                coproducts.len(),
                shape.total()
            )));
        }
        for (i, v) in coproducts.iter().enumerate() {
            for key in v.keys() {
                let ok = key.len() == 2
                    && key.iter().all(|&k| k < shape.total())
                    && shape.degree_of(key[0]) + shape.degree_of(key[1]) == shape.degree_of(i);
                if !ok {
                    return Err(DgError::BadStructureConstant(format!(
                        "coproduct of {} has a term of the wrong shape or degree",
                        complex.basis().label(i)
                    )));
                }
            }
        }
        Ok(DGCoalgebra {
            complex,
            coproducts,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn shape(&self) -> &Shape {
        self.complex.shape()
    }

    pub fn coproduct(&self, i: usize) -> &TensorVec {
        &self.coproducts[i]
    }

    pub fn coproducts(&self) -> &[TensorVec] {
        &self.coproducts
    }

    /// `Δ` as a graded map `C -> C ⊗ C` in tensor coordinates.
    pub fn apply(&self, v: &SparseVec) -> TensorVec {
        let mut out = TensorVec::new();
        for (&i, c) in v {
            out.add_scaled(&self.coproducts[i], c);
        }
        out
    }

    /// Applies `Δ` to factor `pos` of every tuple (no sign: `Δ` has degree 0).
    pub fn apply_at(&self, v: &TensorVec, pos: usize) -> TensorVec {
        let mut out = TensorVec::new();
        for (key, c) in v {
            for (pair, a) in &self.coproducts[key[pos]] {
                let mut k = Vec::with_capacity(key.len() + 1);
                k.extend_from_slice(&key[..pos]);
                k.extend_from_slice(pair);
                k.extend_from_slice(&key[pos + 1..]);
                out.add_term(k, &(c * a));
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), AxiomFailure> {
        let label = |i: usize| vec![self.complex.basis().label(i).to_string()];
        if let Err(e) = self.complex.verify() {
            return Err(AxiomFailure {
                axiom: DgaAxiom::Square,
                labels: vec![e.label],
            });
        }
        let field = self.complex.field();
        let d = self.complex.differential();
        let id = ChainMap::identity(field, self.shape());
        for i in 0..self.shape().total() {
            let delta = &self.coproducts[i];
            if self.apply_at(delta, 0) != self.apply_at(delta, 1) {
                return Err(AxiomFailure {
                    axiom: DgaAxiom::Associativity,
                    labels: label(i),
                });
            }
            let lhs = self.apply(d.column(i));
            let mut rhs = tensor_apply(&[d, &id], delta);
            rhs.add_assign(&tensor_apply(&[&id, d], delta));
            if lhs != rhs {
                return Err(AxiomFailure {
                    axiom: DgaAxiom::Leibniz,
                    labels: label(i),
                });
            }
        }
        Ok(())
    }
}

pub fn check_dgc(c: &DGCoalgebra) -> Result<(), AxiomFailure> {
    c.check()
}

/// Reindexing of a shape under `n ↦ -n`, as a map of global indices.
fn negated(shape: &Shape) -> (Shape, Vec<usize>) {
    let dims: Vec<usize> = shape.degrees().rev().map(|n| shape.dim(n)).collect();
    let neg = Shape::new(-shape.max_deg(), dims);
    let map = (0..shape.total())
        .map(|i| {
            let (n, local) = shape.locate(i);
            neg.global(-n, local)
        })
        .collect();
    (neg, map)
}

fn dual_complex(c: &ChainComplex) -> Result<(ChainComplex, Vec<usize>), DgError> {
    let shape = c.shape();
    let (neg, map) = negated(shape);
    let labels = neg
        .degrees()
        .map(|n| c.basis().labels_in(-n).to_vec())
        .collect();
    let basis = GradedBasis::new(neg.min_deg(), labels)?;
    // d*(e^j) = Σ_i d_{ji} e^i where d(e_i) = Σ_j d_{ji} e_j
    let mut cols = vec![SparseVec::new(); shape.total()];
    for i in 0..shape.total() {
        for (&j, a) in c.differential().column(i) {
            cols[map[j]].add_term(map[i], a);
        }
    }
    let d = ChainMap::from_columns(c.field(), neg.clone(), neg, -1, cols)?;
    Ok((ChainComplex::new(c.field(), basis, d)?, map))
}

/// Linear dual of a finite dg-algebra: degrees negated, differential and
/// product transposed.
pub fn dual_algebra(a: &DGAlgebra) -> Result<DGCoalgebra, DgError> {
    let (complex, map) = dual_complex(a.complex())?;
    let mut coproducts = vec![TensorVec::new(); a.shape().total()];
    for (&(x, y), v) in a.products() {
        for (&k, c) in v {
            coproducts[map[k]].add_term(vec![map[x], map[y]], c);
        }
    }
    DGCoalgebra::new(complex, coproducts)
}

/// Linear dual of a finite dg-coalgebra.
pub fn dual_coalgebra(c: &DGCoalgebra) -> Result<DGAlgebra, DgError> {
    let (complex, map) = dual_complex(c.complex())?;
    let mut products: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (k, v) in c.coproducts().iter().enumerate() {
        for (pair, a) in v {
            products
                .entry((map[pair[0]], map[pair[1]]))
                .or_default()
                .add_term(map[k], a);
        }
    }
    DGAlgebra::new(complex, products)
}
