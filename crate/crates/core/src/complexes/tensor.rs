use std::collections::HashMap;

use crate::exactlin::{Field, SparseVec, TensorVec};

use super::basis::Shape;
use super::koszul::parity_sign;
use super::map::ChainMap;
use super::ComplexError;

/// Basis of a tensor product `C^1 ⊗ ... ⊗ C^k`: tuples of global indices,
/// grouped by total degree and ordered lexicographically within a degree.
#[derive(Clone, Debug)]
pub struct TensorPower {
    factors: Vec<Shape>,
    shape: Shape,
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl TensorPower {
    pub fn new(factors: Vec<Shape>) -> Self {
        let mut all: Vec<(i32, Vec<usize>)> = vec![(0, Vec::new())];
        for f in &factors {
            let mut next = Vec::with_capacity(all.len() * f.total());
            for (deg, t) in &all {
                for i in 0..f.total() {
                    let mut u = t.clone();
                    u.push(i);
                    next.push((deg + f.degree_of(i), u));
                }
            }
            all = next;
        }
        if factors.iter().any(|f| f.total() == 0) {
            all.clear();
        }
        all.sort();
        let (min_deg, max_deg) = match (all.first(), all.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => (0, -1),
        };
        let mut dims = vec![0usize; (max_deg - min_deg + 1).max(0) as usize];
        for (d, _) in &all {
            dims[(d - min_deg) as usize] += 1;
        }
        let tuples: Vec<Vec<usize>> = all.into_iter().map(|(_, t)| t).collect();
        let index = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        TensorPower {
            factors,
            shape: Shape::new(min_deg, dims),
            tuples,
            index,
        }
    }

    pub fn power(shape: &Shape, k: usize) -> Self {
        TensorPower::new(vec![shape.clone(); k])
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn factors(&self) -> &[Shape] {
        &self.factors
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Converts a tensor in tuple keys to global coordinates.
    pub fn flatten(&self, v: &TensorVec) -> SparseVec {
        v.map_keys(|t| self.index[t])
    }

    pub fn unflatten(&self, v: &SparseVec) -> TensorVec {
        v.map_keys(|&i| self.tuples[i].clone())
    }
}

/// `(f_1 ⊗ ... ⊗ f_k)(x_1 ⊗ ... ⊗ x_k)` with the sign
/// `(-1)^{Σ_{i<j} |f_j||x_i|}`.
pub fn tensor_apply(maps: &[&ChainMap], v: &TensorVec) -> TensorVec {
    let mut out = TensorVec::new();
    for (tuple, c) in v {
        assert_eq!(tuple.len(), maps.len(), "tensor length mismatch");
        let mut sign = 0i64;
        let mut passed = 0i64;
        for (j, &x) in tuple.iter().enumerate() {
            sign += maps[j].shift() as i64 * passed;
            passed += maps[j].source().degree_of(x) as i64;
        }
        let mut acc = TensorVec::from_terms([(Vec::new(), c.clone())]);
        for (j, &x) in tuple.iter().enumerate() {
            let img = maps[j].column(x);
            let mut next = TensorVec::new();
            for (key, a) in &acc {
                for (&y, b) in img {
                    let mut k2 = key.clone();
                    k2.push(y);
                    next.add_term(k2, &(a * b));
                }
            }
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        let s = c.field().sign(sign);
        out.add_scaled(&acc, &s);
    }
    out
}

/// The map `f_1 ⊗ ... ⊗ f_k` as a [`ChainMap`] between tensor powers.
pub fn tensor_map(maps: &[&ChainMap]) -> Result<(TensorPower, TensorPower, ChainMap), ComplexError> {
    let field: Field = match maps.first() {
        Some(m) => m.field(),
        None => return Err(ComplexError::ShapeMismatch("empty tensor product".into())),
    };
    let src = TensorPower::new(maps.iter().map(|m| m.source().clone()).collect());
    let tgt = TensorPower::new(maps.iter().map(|m| m.target().clone()).collect());
    let shift = maps.iter().map(|m| m.shift()).sum();
    let columns = (0..src.shape().total())
        .map(|i| {
            let x = TensorVec::basis(src.tuple(i).to_vec(), field);
            tgt.flatten(&tensor_apply(maps, &x))
        })
        .collect();
    let map = ChainMap::from_columns(field, src.shape().clone(), tgt.shape().clone(), shift, columns)?;
    Ok((src, tgt, map))
}

/// `Σ_j 1^{⊗j} ⊗ d ⊗ 1^{⊗(k-j-1)}` on a `k`-fold tensor.
pub fn tensor_differential(d: &ChainMap, v: &TensorVec) -> TensorVec {
    let field = d.field();
    let id = ChainMap::identity(field, d.source());
    let k = v.keys().next().map_or(0, |t| t.len());
    let mut out = TensorVec::new();
    for j in 0..k {
        let maps: Vec<&ChainMap> = (0..k).map(|i| if i == j { d } else { &id }).collect();
        out.add_assign(&tensor_apply(&maps, v));
    }
    out
}

/// Total degree of a basis tuple.
pub fn tuple_degree(shape: &Shape, tuple: &[usize]) -> i32 {
    tuple.iter().map(|&i| shape.degree_of(i)).sum()
}

/// Sign `(-1)^n` as a scalar of `field`.
pub fn sign_scalar(field: Field, n: i64) -> crate::exactlin::Scalar {
    field.from_i64(parity_sign(n))
}
