use std::collections::BTreeMap;

use crate::dgalg::{enumerate_tuples, AInfinityStructure, MultiOp};
use crate::exactlin::{SparseMatrix, SparseVec};

use super::{TransferError, TransferState};

/// A candidate central class `z` with a chosen cycle and a `k[z]`-module
/// basis of `H` inside the input window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    pub z: SparseVec,
    pub z_chain: SparseVec,
    pub basis: Vec<usize>,
    pub period: i32,
}

/// The `k[z]`-linear extension of the basis-tuple values, with the tuples
/// on which it disagrees with the directly transferred values.
#[derive(Clone, Debug)]
pub struct KzExtension {
    pub structure: AInfinityStructure,
    /// `(z^k, b_j)` behind every window basis element of `H`:
    /// `coords[i]` lists `((k, j), c)` with `e_i = Σ c z^k b_j`.
    pub coords: BTreeMap<usize, Vec<((usize, usize), crate::exactlin::Scalar)>>,
    pub mismatches: Vec<(usize, Vec<usize>)>,
}

impl KzExtension {
    pub fn overlap_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn act(st: &TransferState, z_chain: &SparseVec, h: &SparseVec) -> SparseVec {
    st.con.f.apply(&st.algebra.mul(z_chain, &st.con.g.apply(h)))
}

/// Checks the hypotheses of the `k[z]`-linearity statement on the window
/// and extends the transferred operations `k[z]`-linearly from basis tuples.
pub fn kz_extend(st: &TransferState, z: &CentralElement) -> Result<KzExtension, TransferError> {
    let field = st.algebra.complex().field();
    let hshape = st.con.small.shape().clone();
    let (lo, hi) = st
        .structure
        .domain
        .unwrap_or((hshape.min_deg(), hshape.max_deg()));
    let window: Vec<i32> = (lo..=hi).collect();

    // z acts by its chosen cycle
    let zc = st.con.f.apply(&z.z_chain);
    if zc != z.z {
        return Err(TransferError::TorsionFailure(
            "z_chain does not represent z".into(),
        ));
    }

    // torsion: multiplication by z injective where the target stays in the window
    for &n in &window {
        if n + z.period < lo || n + z.period > hi {
            continue;
        }
        let cols: Vec<SparseVec> = hshape
            .range(n)
            .map(|i| act(st, &z.z_chain, &SparseVec::basis(i, field)))
            .collect();
        let m = SparseMatrix::from_columns(field, hshape.total(), cols)
            .map_err(|e| TransferError::TorsionFailure(e.to_string()))?;
        if m.rank() != hshape.dim(n) {
            return Err(TransferError::TorsionFailure(format!(
                "multiplication by z is not injective in degree {n}"
            )));
        }
    }

    // freeness: z^k b_j in the window form a basis of each degree
    let mut gens: BTreeMap<i32, Vec<((usize, usize), SparseVec)>> = BTreeMap::new();
    for (j, &b) in z.basis.iter().enumerate() {
        let mut v = SparseVec::basis(b, field);
        let mut deg = hshape.degree_of(b);
        let mut k = 0usize;
        while (lo..=hi).contains(&deg) {
            gens.entry(deg).or_default().push(((k, j), v.clone()));
            v = act(st, &z.z_chain, &v);
            deg += z.period;
            k += 1;
            if z.period == 0 {
                break;
            }
        }
    }
    let mut coords: BTreeMap<usize, Vec<((usize, usize), crate::exactlin::Scalar)>> =
        BTreeMap::new();
    for &n in &window {
        let g = gens.remove(&n).unwrap_or_default();
        let dim = hshape.dim(n);
        let off = hshape.offset(n);
        let cols: Vec<SparseVec> = g.iter().map(|(_, v)| v.map_keys(|&i| i - off)).collect();
        let m = SparseMatrix::from_columns(field, dim, cols)
            .map_err(|e| TransferError::FreenessFailure(e.to_string()))?;
        if g.len() != dim || m.rank() != dim {
            return Err(TransferError::FreenessFailure(format!(
                "{} generators of rank {} for a space of dimension {dim} in degree {n}",
                g.len(),
                m.rank()
            )));
        }
        for local in 0..dim {
            let c = m
                .solve_preimage(&SparseVec::basis(local, field))
                .map_err(|e| TransferError::FreenessFailure(e.to_string()))?;
            let terms = c.iter().map(|(&k, a)| (g[k].0, a.clone())).collect();
            coords.insert(off + local, terms);
        }
    }

    // chain-level commutativity of z with every stored f_k value
    let in_window = |t: &[usize]| {
        t.iter()
            .all(|&i| (lo..=hi).contains(&hshape.degree_of(i)))
    };
    for (&k, f) in &st.morphism.components {
        for (t, v) in f.iter().filter(|(t, _)| in_window(t)) {
            let left = st.algebra.mul(&z.z_chain, v);
            let right = st.algebra.mul(v, &z.z_chain);
            if left != right {
                return Err(TransferError::CommutativityFailure {
                    arity: k,
                    tuple: super::label_tuple(st, t),
                });
            }
        }
    }

    // extension from basis tuples
    let zpow = |k: usize, v: &SparseVec| {
        let mut v = v.clone();
        for _ in 0..k {
            v = act(st, &z.z_chain, &v);
        }
        v
    };
    let cands: Vec<usize> = st.structure.domain_basis();
    let mut ext = st.structure.clone();
    let mut mismatches = Vec::new();
    let amax = hshape.max_deg() as i64;
    let amin = hshape.min_deg() as i64;
    for n in 2..=st.structure.certified_arity {
        let shift = n as i64 - 2;
        let mut op = MultiOp::new(n);
        for t in enumerate_tuples(&hshape, &cands, n, amin - shift, amax - shift) {
            let mut acc: Vec<(usize, Vec<usize>, crate::exactlin::Scalar)> =
                vec![(0, Vec::new(), field.one())];
            for &e in &t {
                let mut next: Vec<(usize, Vec<usize>, crate::exactlin::Scalar)> = Vec::new();
                for (kk, bs, c) in &acc {
                    for ((k, j), a) in &coords[&e] {
                        let mut bs2 = bs.clone();
                        bs2.push(z.basis[*j]);
                        next.push((kk + k, bs2, c * a));
                    }
                }
                acc = next;
            }
            let mut val = SparseVec::new();
            for (k, bs, c) in acc {
                let base = st.structure.m_value(&bs)?;
                val.add_scaled(&zpow(k, &base), &c);
            }
            let direct = st.structure.m_value(&t)?;
            if direct != val {
                mismatches.push((n, t.clone()));
            }
            op.insert(t, val);
        }
        ext.set_m(op);
    }
    Ok(KzExtension {
        structure: ext,
        coords,
        mismatches,
    })
}
