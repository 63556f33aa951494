//! Transfer of the dg-algebra structure of `A` to an A∞ structure on its
//! homology `H`, by the inductive recursion
//!
//! ```text
//! U_n = Σ_{i+j=n} m^A_2(f_i ⊗ f_j) - Σ_{2≤s<n} ± f_{n-s+1}(1^{⊗r} ⊗ m_s ⊗ 1^{⊗t})
//! m_n = π U_n,   f_n = h(ι m_n - U_n)
//! ```
//!
//! where `ι`, `π`, `h` come from the homology contraction of `A`.

mod kz;

pub use kz::{kz_extend, CentralElement, KzExtension};

use thiserror::Error;

use crate::complexes::{homology_contraction, ComplexError, Contraction};
use crate::dgalg::{
    enumerate_tuples, stasheff_defect, AInfinityMorphism, AInfinityStructure, DGAlgebra,
    DgError, MultiOp,
};
use crate::exactlin::{SparseVec, TensorVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("input is not a dg-algebra: {0}")]
    NotADga(String),
    #[error("frontier is {frontier}, asked for arity {asked}")]
    FrontierMismatch { frontier: usize, asked: usize },
    #[error("need certified arity {needed}, have {have}")]
    InsufficientArity { needed: usize, have: usize },
    #[error("contraction identity violated: U_{arity} is not a cycle on ({tuple})")]
    ContractionViolation { arity: usize, tuple: String },
    #[error("Stasheff identity St_{arity} fails on ({tuple})")]
    StasheffFailure { arity: usize, tuple: String },
    #[error("operation output leaves the input window on ({tuple})")]
    DomainNotClosed { tuple: String },
    #[error("z is a torsion element: {0}")]
    TorsionFailure(String),
    #[error("H is not free over k[z]: {0}")]
    FreenessFailure(String),
    #[error("z does not commute with f_{arity} on ({tuple})")]
    CommutativityFailure { arity: usize, tuple: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferOptions {
    pub max_arity: usize,
    pub gap_search: bool,
    /// Homological degree window of allowed inputs; `None` means all of `H`.
    pub domain: Option<(i32, i32)>,
    /// Check `St_{n+1}` after populating arity `n`.
    pub verify: bool,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions {
            max_arity: 8,
            gap_search: true,
            domain: None,
            verify: true,
        }
    }
}

/// The recursion's state: `m_2..m_{frontier-1}` on `H` and
/// `f_1..f_{frontier-1}` into `A`.
#[derive(Clone, Debug)]
pub struct TransferState {
    pub algebra: DGAlgebra,
    pub con: Contraction,
    pub structure: AInfinityStructure,
    pub morphism: AInfinityMorphism,
    pub frontier: usize,
    candidates: Vec<usize>,
}

fn label_tuple(st: &TransferState, t: &[usize]) -> String {
    let b = st.con.small.basis();
    t.iter()
        .map(|&i| b.label(i).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl TransferState {
    /// Contracts `A` onto its homology and sets up `m_2`, `f_1 = ι`, `f_2`.
    pub fn new(algebra: DGAlgebra, domain: Option<(i32, i32)>) -> Result<Self, TransferError> {
        algebra
            .check()
            .map_err(|e| TransferError::NotADga(e.to_string()))?;
        let con = homology_contraction(algebra.complex())?;
        let structure = AInfinityStructure::new_algebra(con.small.clone(), domain);
        let candidates = structure.domain_basis();
        let mut f1 = MultiOp::new(1);
        for i in 0..con.small.shape().total() {
            f1.insert(vec![i], con.g.column(i).clone());
        }
        let mut morphism = AInfinityMorphism::new();
        morphism.components.insert(1, f1);
        morphism.certified_arity = 1;
        let mut st = TransferState {
            algebra,
            con,
            structure,
            morphism,
            frontier: 2,
            candidates,
        };
        st.extend_step()?;
        Ok(st)
    }

    pub fn h_degree(&self, i: usize) -> i32 {
        self.con.small.shape().degree_of(i)
    }

    fn tuple_degree(&self, t: &[usize]) -> i64 {
        t.iter().map(|&i| self.h_degree(i) as i64).sum()
    }

    /// `m^A_2(u, v) = (-1)^{|u|+1} u·v` for `u` homogeneous of degree `du`.
    fn m2a(&self, u: &SparseVec, du: i64, v: &SparseVec) -> SparseVec {
        let p = self.algebra.mul(u, v);
        if (du + 1) % 2 == 0 {
            p
        } else {
            p.negated()
        }
    }

    fn f_value(&self, t: &[usize]) -> SparseVec {
        self.morphism
            .f(t.len())
            .and_then(|f| f.get(t).cloned())
            .unwrap_or_default()
    }

    /// Tuples of arity `n` on which `U_n` can be nonzero.
    pub fn tuples(&self, n: usize) -> Vec<Vec<usize>> {
        let a = self.algebra.shape();
        let shift = n as i64 - 2;
        enumerate_tuples(
            self.con.small.shape(),
            &self.candidates,
            n,
            a.min_deg() as i64 - shift,
            a.max_deg() as i64 - shift,
        )
    }

    /// `U_n` on one tuple.
    pub fn u_value(&self, t: &[usize]) -> Result<SparseVec, TransferError> {
        let n = t.len();
        let field = self.algebra.complex().field();
        let mut out = SparseVec::new();
        for i in 1..n {
            let left = self.f_value(&t[..i]);
            if left.is_zero() {
                continue;
            }
            let right = self.f_value(&t[i..]);
            if right.is_zero() {
                continue;
            }
            let du = self.tuple_degree(&t[..i]) + i as i64 - 1;
            out.add_assign(&self.m2a(&left, du, &right));
        }
        let mut eps = 0i64;
        for r in 0..n {
            for s in 2..n.min(n - r + 1) {
                let inner = self.structure.m_value(&t[r..r + s])?;
                if inner.is_zero() {
                    continue;
                }
                let spliced: TensorVec = inner.map_keys(|&k| {
                    let mut key = Vec::with_capacity(n - s + 1);
                    key.extend_from_slice(&t[..r]);
                    key.push(k);
                    key.extend_from_slice(&t[r + s..]);
                    key
                });
                if let Some(f) = self.morphism.f(n - s + 1) {
                    let val = f.eval(&spliced);
                    out.add_scaled(&val, &field.sign(eps + 1));
                }
            }
            eps += self.h_degree(t[r]) as i64 + 1;
        }
        Ok(out)
    }

    /// `U_n` on every tuple where it can be nonzero.
    pub fn u_map(&self, n: usize) -> Result<MultiOp, TransferError> {
        if n != self.frontier {
            return Err(TransferError::FrontierMismatch {
                frontier: self.frontier,
                asked: n,
            });
        }
        let mut u = MultiOp::new(n);
        for t in self.tuples(n) {
            let v = self.u_value(&t)?;
            u.insert(t, v);
        }
        Ok(u)
    }

    /// Populates `m_n` and `f_n` for `n = frontier`.
    pub fn extend_step(&mut self) -> Result<(), TransferError> {
        let n = self.frontier;
        let d = self.algebra.complex().differential();
        let (pi, iota, h) = (&self.con.f, &self.con.g, &self.con.phi);
        let mut m = MultiOp::new(n);
        let mut f = MultiOp::new(n);
        let domain = self.structure.domain;
        for t in self.tuples(n) {
            let u = self.u_value(&t)?;
            if u.is_zero() {
                continue;
            }
            let mv = pi.apply(&u);
            if let (Some((lo, hi)), Some(&k)) = (domain, mv.keys().next()) {
                let deg = self.h_degree(k);
                if deg < lo || deg > hi {
                    return Err(TransferError::DomainNotClosed {
                        tuple: label_tuple(self, &t),
                    });
                }
            }
            let target = iota.apply(&mv).sub(&u);
            let fv = h.apply(&target);
            if d.apply(&fv) != target {
                return Err(TransferError::ContractionViolation {
                    arity: n,
                    tuple: label_tuple(self, &t),
                });
            }
            m.insert(t.clone(), mv);
            f.insert(t, fv);
        }
        if n >= 2 {
            self.structure.set_m(m);
            self.structure.certified_arity = n;
        }
        self.morphism.components.insert(n, f);
        self.morphism.certified_arity = n;
        self.frontier = n + 1;
        Ok(())
    }

    /// Checks `St_{n}`; all arities below `n` must be populated.
    pub fn verify_stasheff(&self, n: usize) -> Result<(), TransferError> {
        let defect = stasheff_defect(&self.structure, n)?;
        match defect.witness(&self.structure.carrier) {
            None => Ok(()),
            Some(w) => Err(TransferError::StasheffFailure {
                arity: n,
                tuple: w.join(", "),
            }),
        }
    }

    /// Checks `∂ f_n = ι m_n - U_n` on every tuple of arity `n`.
    pub fn verify_morphism(&self, n: usize) -> Result<(), TransferError> {
        let d = self.algebra.complex().differential();
        for t in self.tuples(n) {
            let u = self.u_value(&t)?;
            let m = self.structure.m_value(&t)?;
            let lhs = d.apply(&self.f_value(&t));
            let rhs = self.con.g.apply(&m).sub(&u);
            if lhs != rhs {
                return Err(TransferError::ContractionViolation {
                    arity: n,
                    tuple: label_tuple(self, &t),
                });
            }
        }
        Ok(())
    }

    /// Whether `m_k` and `f_k` vanish identically for `q ≤ k ≤ 2q - 2`.
    pub fn gap_check(&self, q: usize) -> Result<bool, TransferError> {
        let top = 2 * q - 2;
        if self.structure.certified_arity < top {
            return Err(TransferError::InsufficientArity {
                needed: top,
                have: self.structure.certified_arity,
            });
        }
        Ok((q..=top).all(|k| {
            self.structure.m(k).is_none_or(|m| m.is_zero())
                && self.morphism.f(k).is_none_or(|f| f.is_zero())
        }))
    }
}

#[derive(Clone, Debug)]
pub struct TransferResult {
    pub state: TransferState,
    pub complete: bool,
    pub gap: Option<usize>,
}

impl TransferResult {
    pub fn structure(&self) -> &AInfinityStructure {
        &self.state.structure
    }

    pub fn morphism(&self) -> &AInfinityMorphism {
        &self.state.morphism
    }
}

/// Runs the recursion up to `max_arity`, stopping early when the gap
/// criterion fires for the smallest admissible `q`.
pub fn transfer_full(
    algebra: &DGAlgebra,
    opts: &TransferOptions,
) -> Result<TransferResult, TransferError> {
    let mut st = TransferState::new(algebra.clone(), opts.domain)?;
    if opts.verify {
        st.verify_stasheff(3)?;
    }
    let mut gap = None;
    let mut q_next = 2;
    loop {
        if opts.gap_search {
            while 2 * q_next - 2 <= st.structure.certified_arity {
                if st.gap_check(q_next)? {
                    gap = Some(q_next);
                    break;
                }
                q_next += 1;
            }
            if gap.is_some() {
                break;
            }
        }
        if st.frontier > opts.max_arity {
            break;
        }
        st.extend_step()?;
        if opts.verify {
            st.verify_stasheff(st.frontier)?;
        }
    }
    st.structure.complete = gap.is_some();
    Ok(TransferResult {
        state: st,
        complete: gap.is_some(),
        gap,
    })
}
