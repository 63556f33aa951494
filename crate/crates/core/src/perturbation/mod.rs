//! The basic perturbation lemma and the tensor trick for transferring a
//! coalgebra structure through a contraction.

use thiserror::Error;

use crate::complexes::{
    tensor_apply, ChainComplex, ChainMap, ComplexError, Contraction, ContractionFailure,
};
use crate::dgalg::{stasheff_defect, AInfinityStructure, AxiomFailure, CoOp, DGCoalgebra, DgError};
use crate::exactlin::{SparseVec, TensorVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerturbationError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error("input contraction is invalid: {0}")]
    BadContraction(ContractionFailure),
    #[error("perturbed differential does not square to zero on {0}")]
    NotADifferential(String),
    #[error("(φδ)^n does not vanish on {label} within n ≤ {bound}")]
    NilpotenceExceeded { label: String, bound: usize },
    #[error("input is not a dg-coalgebra: {0}")]
    NotADgc(AxiomFailure),
    #[error("co-Stasheff identity of arity {arity} fails on {label}")]
    StasheffFailure { arity: usize, label: String },
    #[error("arity limit must be at least 2")]
    ArityTooSmall,
}

pub fn check_contraction(c: &Contraction) -> Result<(), ContractionFailure> {
    c.check()
}

/// A perturbation `δ` of the big differential of a contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub delta: ChainMap,
    pub nil_bound: usize,
}

impl Perturbation {
    /// Default nilpotence bound is the dimension of the big complex.
    pub fn new(delta: ChainMap, host: &Contraction) -> Result<Self, PerturbationError> {
        let bound = host.big.shape().total().max(1);
        Perturbation::with_bound(delta, host, bound)
    }

    pub fn with_bound(
        delta: ChainMap,
        host: &Contraction,
        nil_bound: usize,
    ) -> Result<Self, PerturbationError> {
        let n = host.big.shape();
        if delta.shift() != -1 || delta.source() != n || delta.target() != n {
            return Err(ComplexError::ShapeMismatch(
                "perturbation must be a degree -1 endomorphism of the big complex".into(),
            )
            .into());
        }
        let p = Perturbation { delta, nil_bound };
        let total = host.big.differential().add(&p.delta)?;
        for i in 0..n.total() {
            if !total.apply(total.column(i)).is_zero() {
                return Err(PerturbationError::NotADifferential(
                    host.big.basis().label(i).to_string(),
                ));
            }
        }
        Ok(p)
    }
}

/// `Σ_{i≥0} (-1)^i (φδ)^i v`, failing when the `nil_bound`-th power is
/// still nonzero.
fn series(
    phi: &ChainMap,
    delta: &ChainMap,
    v: &SparseVec,
    bound: usize,
) -> Result<SparseVec, usize> {
    let mut out = v.clone();
    let mut term = v.clone();
    for _ in 0..bound {
        term = phi.apply(&delta.apply(&term)).negated();
        if term.is_zero() {
            return Ok(out);
        }
        out.add_assign(&term);
    }
    if term.is_zero() {
        Ok(out)
    } else {
        Err(bound)
    }
}

/// Output of [`bpl`]: the perturbed contraction and `∂_δ` on the small
/// complex.
#[derive(Clone, Debug)]
pub struct Perturbed {
    pub contraction: Contraction,
    pub small_delta: ChainMap,
}

/// The basic perturbation lemma:
/// `f_δ = f(1 - δΣφ)`, `g_δ = Σg`, `φ_δ = Σφ`, `∂_δ = fδΣg` with
/// `Σ = Σ_{i≥0} (-1)^i (φδ)^i`.
pub fn bpl(c: &Contraction, p: &Perturbation) -> Result<Perturbed, PerturbationError> {
    c.check().map_err(PerturbationError::BadContraction)?;
    let field = c.big.field();
    let nshape = c.big.shape().clone();
    let delta = &p.delta;
    let big_label = |i: usize| c.big.basis().label(i).to_string();

    // Σ as a map N -> N, column by column
    let mut sigma_cols = Vec::with_capacity(nshape.total());
    for i in 0..nshape.total() {
        let col = series(&c.phi, delta, &SparseVec::basis(i, field), p.nil_bound).map_err(
            |bound| PerturbationError::NilpotenceExceeded {
                label: big_label(i),
                bound,
            },
        )?;
        sigma_cols.push(col);
    }
    let sigma = ChainMap::from_columns(field, nshape.clone(), nshape.clone(), 0, sigma_cols)?;

    let g_d = sigma.compose(&c.g)?;
    let phi_d = sigma.compose(&c.phi)?;
    let correction = c.f.compose(&delta.compose(&phi_d)?)?;
    let f_d = c.f.sub(&correction)?;
    let small_delta = c.f.compose(&delta.compose(&g_d)?)?;

    let big = c.big.with_differential(c.big.differential().add(delta)?)?;
    let small = c
        .small
        .with_differential(c.small.differential().add(&small_delta)?)?;
    let contraction = Contraction::new(big, small, f_d, g_d, phi_d)?;
    Ok(Perturbed {
        contraction,
        small_delta,
    })
}

/// `Δ^{[k]} = Σ_{j=0}^{k-2} (-1)^j 1^{⊗j} ⊗ Δ ⊗ 1^{⊗(k-j-2)}` on `(k-1)`-fold tensors.
fn delta_bracket(c: &DGCoalgebra, v: &TensorVec) -> TensorVec {
    let field = c.complex().field();
    let mut out = TensorVec::new();
    let len = v.keys().next().map_or(0, |k| k.len());
    for j in 0..len {
        out.add_scaled(&c.apply_at(v, j), &field.sign(j as i64));
    }
    out
}

/// `φ^{[⊗k]} = Σ_j (gf)^{⊗j} ⊗ φ ⊗ 1^{⊗(k-j-1)}` with Koszul signs.
fn phi_bracket(gf: &ChainMap, phi: &ChainMap, id: &ChainMap, v: &TensorVec) -> TensorVec {
    let mut out = TensorVec::new();
    let len = v.keys().next().map_or(0, |k| k.len());
    for j in 0..len {
        let maps: Vec<&ChainMap> = (0..len)
            .map(|l| match l.cmp(&j) {
                std::cmp::Ordering::Less => gf,
                std::cmp::Ordering::Equal => phi,
                std::cmp::Ordering::Greater => id,
            })
            .collect();
        out.add_assign(&tensor_apply(&maps, v));
    }
    out
}

/// Higher coproducts on the small complex of `con`:
/// `Δ_i = (-1)^{[i/2]+i+1} f^{⊗i} Δ^{[i]} φ^{[⊗(i-1)]} Δ^{[i-1]} ⋯ φ^{[⊗2]} Δ^{[2]} g`
/// for `2 ≤ i ≤ limit`. The co-Stasheff identities are checked through
/// `limit` (through `limit + 1` when the small differential vanishes).
pub fn tensor_trick(
    coalgebra: &DGCoalgebra,
    con: &Contraction,
    limit: usize,
) -> Result<AInfinityStructure, PerturbationError> {
    if limit < 2 {
        return Err(PerturbationError::ArityTooSmall);
    }
    coalgebra.check().map_err(PerturbationError::NotADgc)?;
    con.check().map_err(PerturbationError::BadContraction)?;
    if con.big.differential() != coalgebra.complex().differential() {
        return Err(ComplexError::ShapeMismatch(
            "contraction is not built on the coalgebra's complex".into(),
        )
        .into());
    }
    let field = con.big.field();
    let gf = con.g.compose(&con.f)?;
    let id = ChainMap::identity(field, con.big.shape());
    let mshape = con.small.shape().clone();
    let mut structure = AInfinityStructure::new_coalgebra(con.small.clone());
    let mut ops: Vec<CoOp> = (2..=limit).map(CoOp::new).collect();
    for x in 0..mshape.total() {
        let mut t: TensorVec = con.g.column(x).map_keys(|&k| vec![k]);
        t = coalgebra.apply_at(&t, 0);
        for i in 2..=limit {
            let fs: Vec<&ChainMap> = vec![&con.f; i];
            let sign = field.sign((i / 2 + i + 1) as i64);
            ops[i - 2].insert(x, tensor_apply(&fs, &t).scaled(&sign));
            if i < limit {
                t = phi_bracket(&gf, &con.phi, &id, &t);
                t = delta_bracket(coalgebra, &t);
            }
        }
    }
    for op in ops {
        structure.set_delta(op);
    }
    structure.certified_arity = limit;
    let top = if con.small.differential().is_zero() {
        limit + 1
    } else {
        limit
    };
    for n in 1..=top {
        let defect = stasheff_defect(&structure, n)?;
        if let Some(w) = defect.witness(&structure.carrier) {
            return Err(PerturbationError::StasheffFailure {
                arity: n,
                label: w.join(", "),
            });
        }
    }
    Ok(structure)
}

/// The trivial contraction of a complex onto itself.
pub fn identity_contraction(c: &ChainComplex) -> Contraction {
    let field = c.field();
    let id = ChainMap::identity(field, c.shape());
    let zero = ChainMap::zero(field, c.shape().clone(), c.shape().clone(), 1);
    Contraction::new(c.clone(), c.clone(), id.clone(), id, zero).expect("shapes agree")
}
