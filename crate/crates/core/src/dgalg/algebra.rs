use std::collections::BTreeMap;
use std::fmt;

use crate::complexes::{ChainComplex, Shape};
use crate::exactlin::{Scalar, SparseVec};

use super::DgError;

/// A dg-algebra: a chain complex with a degree 0 associative product given
/// by structure constants on pairs of basis elements (global indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    complex: ChainComplex,
    products: BTreeMap<(usize, usize), SparseVec>,
    right_partners: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DgaAxiom {
    Square,
    Associativity,
    Leibniz,
}

/// First basis tuple on which a dg-(co)algebra axiom fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: DgaAxiom,
    pub labels: Vec<String>,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.axiom {
            DgaAxiom::Square => "d∘d = 0",
            DgaAxiom::Associativity => "associativity",
            DgaAxiom::Leibniz => "Leibniz rule",
        };
        write!(f, "{what} fails on ({})", self.labels.join(", "))
    }
}

impl DGAlgebra {
    /// Zero products are dropped; a product must land in degree `|a| + |b|`.
    pub fn new(
        complex: ChainComplex,
        products: BTreeMap<(usize, usize), SparseVec>,
    ) -> Result<Self, DgError> {
        let shape = complex.shape().clone();
        let n = shape.total();
        let mut kept = BTreeMap::new();
        for ((a, b), v) in products {
            if a >= n || b >= n {
                return Err(DgError::BadStructureConstant(format!(
                    "product index ({a}, {b}) out of range"
                )));
            }
            if v.is_zero() {
                continue;
            }
            let deg = shape.degree_of(a) + shape.degree_of(b);
            let range = shape.range(deg);
            if v.keys().any(|k| !range.contains(k)) {
                return Err(DgError::BadStructureConstant(format!(
                    "product of {} and {} is not in degree {deg}",
                    complex.basis().label(a),
                    complex.basis().label(b)
                )));
            }
            kept.insert((a, b), v);
        }
        let mut right_partners = vec![Vec::new(); n];
        for &(a, b) in kept.keys() {
            right_partners[a].push(b);
        }
        Ok(DGAlgebra {
            complex,
            products: kept,
            right_partners,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn shape(&self) -> &Shape {
        self.complex.shape()
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), SparseVec> {
        &self.products
    }

    pub fn product(&self, a: usize, b: usize) -> Option<&SparseVec> {
        self.products.get(&(a, b))
    }

    /// Basis elements `b` with `a·b` possibly nonzero.
    pub fn right_partners(&self, a: usize) -> &[usize] {
        &self.right_partners[a]
    }

    /// Bilinear extension of the product.
    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&a, ca) in x {
            if self.right_partners[a].is_empty() {
                continue;
            }
            for (&b, cb) in y {
                if let Some(v) = self.products.get(&(a, b)) {
                    out.add_scaled(v, &(ca * cb));
                }
            }
        }
        out
    }

    fn basis_mul(&self, a: usize, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&b, cb) in y {
            if let Some(v) = self.products.get(&(a, b)) {
                out.add_scaled(v, cb);
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), AxiomFailure> {
        let labels = |ix: &[usize]| {
            ix.iter()
                .map(|&i| self.complex.basis().label(i).to_string())
                .collect()
        };
        if let Err(e) = self.complex.verify() {
            return Err(AxiomFailure {
                axiom: DgaAxiom::Square,
                labels: vec![e.label],
            });
        }
        let n = self.shape().total();
        let field = self.complex.field();
        let d = self.complex.differential();
        for a in 0..n {
            for b in 0..n {
                let ab = self.product(a, b).cloned().unwrap_or_default();
                let ea = SparseVec::basis(a, field);
                let eb = SparseVec::basis(b, field);
                let lhs = d.apply(&ab);
                let mut rhs = self.mul(d.column(a), &eb);
                let s: Scalar = field.sign(self.shape().degree_of(a) as i64);
                rhs.add_scaled(&self.mul(&ea, d.column(b)), &s);
                if lhs != rhs {
                    return Err(AxiomFailure {
                        axiom: DgaAxiom::Leibniz,
                        labels: labels(&[a, b]),
                    });
                }
                let mut cands: Vec<usize> = self.right_partners[b].clone();
                for &k in ab.keys() {
                    cands.extend_from_slice(&self.right_partners[k]);
                }
                cands.sort_unstable();
                cands.dedup();
                for c in cands {
                    let ec = SparseVec::basis(c, field);
                    let left = self.mul(&ab, &ec);
                    let bc = self.product(b, c).cloned().unwrap_or_default();
                    let right = self.basis_mul(a, &bc);
                    if left != right {
                        return Err(AxiomFailure {
                            axiom: DgaAxiom::Associativity,
                            labels: labels(&[a, b, c]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn check_dga(a: &DGAlgebra) -> Result<(), AxiomFailure> {
    a.check()
}
