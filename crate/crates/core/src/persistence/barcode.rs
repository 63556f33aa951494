use std::collections::HashMap;

use crate::exactlin::{Field, SparseMatrix, SparseVec};

use super::{DiagramKind, FilteredComplex, Interval, PersistenceDiagram};

/// Boundary column of simplex `i` in sorted-order coordinates.
pub(crate) fn boundary_column(
    f: &FilteredComplex,
    index: &HashMap<Vec<usize>, usize>,
    field: Field,
    i: usize,
) -> SparseVec {
    let s = &f.simplices()[i].0;
    let mut col = SparseVec::new();
    if s.len() > 1 {
        for k in 0..s.len() {
            let mut face = s.clone();
            face.remove(k);
            col.add_term(index[&face], &field.sign(k as i64));
        }
    }
    col
}

/// Persistence pairs from column reduction: `(birth simplex, death simplex)`,
/// plus the simplices that create essential classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub pairs: Vec<(usize, usize)>,
    pub essential: Vec<usize>,
}

pub fn reduce(f: &FilteredComplex, field: Field) -> Reduction {
    let index = f.index();
    let n = f.len();
    let mut cols: Vec<SparseVec> = Vec::with_capacity(n);
    // owner[low] = column whose lowest nonzero entry is `low`
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::new();
    for j in 0..n {
        let mut col = boundary_column(f, &index, field, j);
        while let Some((low, c)) = col.iter().next_back().map(|(&l, c)| (l, c.clone())) {
            let Some(o) = owner[low] else { break };
            let oc = cols[o].get(&low).expect("pivot entry");
            let factor = -(&c * &oc.inv().expect("nonzero pivot"));
            col.add_scaled(&cols[o], &factor);
        }
        if let Some(&low) = col.keys().next_back() {
            owner[low] = Some(j);
            pairs.push((low, j));
        }
        cols.push(col);
    }
    let mut paired = vec![false; n];
    for &(b, d) in &pairs {
        paired[b] = true;
        paired[d] = true;
    }
    let essential = (0..n).filter(|&i| !paired[i]).collect();
    pairs.sort();
    Reduction { pairs, essential }
}

/// Classical barcode in degree `k`. Intervals are half-open `[b, d)`;
/// zero-length pairs are counted in `zero_length` and left out.
pub fn barcode(f: &FilteredComplex, field: Field, k: usize) -> PersistenceDiagram {
    let r = reduce(f, field);
    let mut intervals = Vec::new();
    let mut zero_length = 0;
    for &(b, d) in &r.pairs {
        if f.dim_of(b) != k {
            continue;
        }
        let (vb, vd) = (f.value_of(b), f.value_of(d));
        if vb == vd {
            zero_length += 1;
        } else {
            intervals.push(Interval { k, birth: vb, death: vd });
        }
    }
    for &e in &r.essential {
        if f.dim_of(e) == k {
            intervals.push(Interval {
                k,
                birth: f.value_of(e),
                death: f64::INFINITY,
            });
        }
    }
    let mut d = PersistenceDiagram::new(DiagramKind::Classical, intervals);
    d.zero_length = zero_length;
    d
}

/// Number of intervals alive on the whole of `[i, j]`: `b ≤ i` and `j < d`.
pub fn count_intervals(d: &PersistenceDiagram, k: usize, i: f64, j: f64) -> usize {
    d.intervals
        .iter()
        .filter(|iv| iv.k == k && iv.birth <= i && j < iv.death)
        .count()
}

/// Rank of `H_k(K_{≤i}) → H_k(K_{≤j})`, as `dim(Z_i + B_j) - dim B_j`
/// computed from cycle and boundary matrices of the two stages.
pub fn persistent_rank(f: &FilteredComplex, field: Field, k: usize, i: f64, j: f64) -> usize {
    assert!(i <= j, "persistent_rank needs i ≤ j");
    let index = f.index();
    let ni = f.prefix_len(i);
    let nj = f.prefix_len(j);
    // k-simplices of stage j, local coordinates
    let ks: Vec<usize> = (0..nj).filter(|&s| f.dim_of(s) == k).collect();
    let local: HashMap<usize, usize> = ks.iter().enumerate().map(|(a, &s)| (s, a)).collect();
    let rows = ks.len();
    if rows == 0 {
        return 0;
    }
    // ∂_k on stage i, rows = (k-1)-simplices
    let km1: Vec<usize> = (0..ni).filter(|&s| k > 0 && f.dim_of(s) == k - 1).collect();
    let lower: HashMap<usize, usize> = km1.iter().enumerate().map(|(a, &s)| (s, a)).collect();
    let ks_i: Vec<usize> = ks.iter().copied().filter(|&s| s < ni).collect();
    let dk_cols: Vec<SparseVec> = ks_i
        .iter()
        .map(|&s| boundary_column(f, &index, field, s).map_keys(|x| lower[x]))
        .collect();
    let cycles: Vec<SparseVec> = if k == 0 {
        ks_i.iter().map(|&s| SparseVec::basis(local[&s], field)).collect()
    } else {
        let dk = SparseMatrix::from_columns(field, km1.len(), dk_cols).expect("shapes");
        dk.kernel_basis()
            .into_iter()
            .map(|v| v.map_keys(|&a| local[&ks_i[a]]))
            .collect()
    };
    let bd: Vec<SparseVec> = (0..nj)
        .filter(|&s| f.dim_of(s) == k + 1)
        .map(|s| boundary_column(f, &index, field, s).map_keys(|x| local[x]))
        .collect();
    let b = SparseMatrix::from_columns(field, rows, bd).expect("shapes");
    let z = SparseMatrix::from_columns(field, rows, cycles).expect("shapes");
    z.hstack(&b).expect("rows agree").rank() - b.rank()
}
