use std::collections::HashMap;

use crate::complexes::{ChainComplex, ChainMap, GradedBasis};
use crate::exactlin::{Field, SparseVec, TensorVec};

use super::coalgebra::DGCoalgebra;
use super::DgError;

/// Label of a simplex given by its sorted vertex list, e.g. `0_2_5`.
pub fn simplex_label(s: &[usize]) -> String {
    s.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("_")
}

/// Simplicial chains with the Alexander–Whitney diagonal
/// `Δ[v_0..v_n] = Σ_k [v_0..v_k] ⊗ [v_k..v_n]`.
///
/// `simplices` must be closed under faces, with each vertex list strictly
/// increasing; order within a dimension is kept.
pub fn simplicial_coalgebra(field: Field, simplices: &[Vec<usize>]) -> Result<DGCoalgebra, DgError> {
    let top = simplices.iter().map(|s| s.len()).max().unwrap_or(1).max(1) - 1;
    let mut layers: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); top + 1];
    for s in simplices {
        if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DgError::BadStructureConstant(format!(
                "simplex {:?} is not a strictly increasing vertex list",
                s
            )));
        }
        layers[s.len() - 1].push(s);
    }
    let labels: Vec<Vec<String>> = layers
        .iter()
        .map(|l| l.iter().map(|s| simplex_label(s)).collect())
        .collect();
    let basis = GradedBasis::new(0, labels)?;
    let shape = basis.shape().clone();
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    for (dim, layer) in layers.iter().enumerate() {
        for (k, s) in layer.iter().enumerate() {
            index.insert(s.as_slice(), shape.global(dim as i32, k));
        }
    }
    let find = |s: &[usize]| {
        index.get(s).copied().ok_or_else(|| {
            DgError::BadStructureConstant(format!("face {} is missing", simplex_label(s)))
        })
    };
    let mut cols = Vec::with_capacity(shape.total());
    let mut coproducts = Vec::with_capacity(shape.total());
    for layer in &layers {
        for s in layer {
            let mut d = SparseVec::new();
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut face = s.to_vec();
                    face.remove(i);
                    d.add_term(find(&face)?, &field.sign(i as i64));
                }
            }
            cols.push(d);
            let mut delta = TensorVec::new();
            for k in 0..s.len() {
                let front = find(&s[..=k])?;
                let back = find(&s[k..])?;
                delta.add_term(vec![front, back], &field.one());
            }
            coproducts.push(delta);
        }
    }
    let d = ChainMap::from_columns(field, shape.clone(), shape, -1, cols)?;
    let complex = ChainComplex::new(field, basis, d)?;
    DGCoalgebra::new(complex, coproducts)
}
