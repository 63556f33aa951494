use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::{SparseMatrix, SparseVec};

use super::basis::GradedBasis;
use super::complex::ChainComplex;
use super::map::ChainMap;
use super::ComplexError;

/// Deformation retract data `(f, g, φ)` of a big complex `N` onto a small one
/// `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub big: ChainComplex,
    pub small: ChainComplex,
    pub f: ChainMap,
    pub g: ChainMap,
    pub phi: ChainMap,
}

/// Which contraction identity failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    FChain,
    GChain,
    FG,
    Homotopy,
    FPhi,
    PhiG,
    PhiPhi,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::FChain => "∂f = f∂",
            Identity::GChain => "∂g = g∂",
            Identity::FG => "fg = 1",
            Identity::Homotopy => "gf + φ∂ + ∂φ = 1",
            Identity::FPhi => "fφ = 0",
            Identity::PhiG => "φg = 0",
            Identity::PhiPhi => "φφ = 0",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionFailure {
    pub identity: Identity,
    pub degree: i32,
    pub label: String,
}

impl fmt::Display for ContractionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails on {} in degree {}",
            self.identity, self.label, self.degree
        )
    }
}

impl Contraction {
    pub fn new(
        big: ChainComplex,
        small: ChainComplex,
        f: ChainMap,
        g: ChainMap,
        phi: ChainMap,
    ) -> Result<Self, ComplexError> {
        let (n, m) = (big.shape(), small.shape());
        let ok = f.source() == n
            && f.target() == m
            && f.shift() == 0
            && g.source() == m
            && g.target() == n
            && g.shift() == 0
            && phi.source() == n
            && phi.target() == n
            && phi.shift() == 1;
        if !ok {
            return Err(ComplexError::ShapeMismatch(
                "contraction maps do not match the complexes".into(),
            ));
        }
        Ok(Contraction {
            big,
            small,
            f,
            g,
            phi,
        })
    }

    /// Checks the chain map conditions and the five contraction identities,
    /// reporting the first failure found.
    pub fn check(&self) -> Result<(), ContractionFailure> {
        let dn = self.big.differential();
        let dm = self.small.differential();
        let nb = self.big.basis();
        let mb = self.small.basis();
        let fail = |identity, basis: &GradedBasis, i: usize| ContractionFailure {
            identity,
            degree: basis.degree_of(i),
            label: basis.label(i).to_string(),
        };
        for i in 0..nb.len() {
            let x = dn.column(i);
            if dm.apply(self.f.column(i)) != self.f.apply(x) {
                return Err(fail(Identity::FChain, nb, i));
            }
        }
        for i in 0..mb.len() {
            if dn.apply(self.g.column(i)) != self.g.apply(dm.column(i)) {
                return Err(fail(Identity::GChain, mb, i));
            }
            let fg = self.f.apply(self.g.column(i));
            if fg != SparseVec::basis(i, self.big.field()) {
                return Err(fail(Identity::FG, mb, i));
            }
            if !self.phi.apply(self.g.column(i)).is_zero() {
                return Err(fail(Identity::PhiG, mb, i));
            }
        }
        for i in 0..nb.len() {
            let phi_i = self.phi.column(i);
            let mut h = self.g.apply(self.f.column(i));
            h.add_assign(&self.phi.apply(dn.column(i)));
            h.add_assign(&dn.apply(phi_i));
            if h != SparseVec::basis(i, self.big.field()) {
                return Err(fail(Identity::Homotopy, nb, i));
            }
            if !self.f.apply(phi_i).is_zero() {
                return Err(fail(Identity::FPhi, nb, i));
            }
            if !self.phi.apply(phi_i).is_zero() {
                return Err(fail(Identity::PhiPhi, nb, i));
            }
        }
        Ok(())
    }
}

/// Contraction of `c` onto its homology (zero differential).
///
/// In each degree `n` the space `C_n` is split as `B ⊕ H ⊕ L`: `B` the
/// columns of `d_{n+1}` at its pivot columns, `L` the standard vectors at the
/// pivot columns of `d_n`, and `H` the kernel basis vectors not already in
/// the span of `B`, chosen greedily in kernel order. `g` sends a homology
/// class to its `H` vector, `f` reads off `H` coordinates and `φ` sends the
/// `B` part to the pivot preimages in degree `n + 1`.
pub fn homology_contraction(c: &ChainComplex) -> Result<Contraction, ComplexError> {
    c.verify().map_err(ComplexError::NotAComplex)?;
    let field = c.field();
    let shape = c.shape().clone();

    struct Split {
        b_pre: Vec<usize>,
        h: Vec<SparseVec>,
        h_labels: Vec<String>,
        p_inv: SparseMatrix,
    }
    let mut splits: BTreeMap<i32, Split> = BTreeMap::new();
    for n in shape.degrees() {
        let dim = shape.dim(n);
        let dn = c.d(n);
        let dn1 = c.d(n + 1);
        let b_pre = dn1.rref().pivots;
        let b_cols: Vec<SparseVec> = b_pre.iter().map(|&j| dn1.column(j).clone()).collect();
        let l_piv = dn.rref().pivots;
        let z = dn.kernel_basis();
        let bz = SparseMatrix::from_columns(field, dim, b_cols.iter().chain(&z).cloned().collect())
            .map_err(ComplexError::LinAlg)?;
        let nb = b_cols.len();
        let chosen: Vec<usize> = bz
            .rref()
            .pivots
            .into_iter()
            .filter(|&p| p >= nb)
            .map(|p| p - nb)
            .collect();
        let h: Vec<SparseVec> = chosen.iter().map(|&k| z[k].clone()).collect();
        let free: Vec<usize> = {
            let mut is_pivot = vec![false; dim];
            for &p in &l_piv {
                is_pivot[p] = true;
            }
            (0..dim).filter(|&j| !is_pivot[j]).collect()
        };
        // kernel_basis emits one vector per free column, in order
        let labels_n = c.basis().labels_in(n);
        let h_labels = chosen.iter().map(|&k| labels_n[free[k]].clone()).collect();
        let mut p_cols = b_cols;
        p_cols.extend(h.iter().cloned());
        p_cols.extend(l_piv.iter().map(|&j| SparseVec::basis(j, field)));
        let p = SparseMatrix::from_columns(field, dim, p_cols).map_err(ComplexError::LinAlg)?;
        let r = p.rref();
        debug_assert_eq!(r.pivots.len(), dim);
        splits.insert(
            n,
            Split {
                b_pre,
                h,
                h_labels,
                p_inv: r.transform,
            },
        );
    }

    let small_basis = GradedBasis::new(
        shape.min_deg(),
        shape
            .degrees()
            .map(|n| splits[&n].h_labels.clone())
            .collect(),
    )?;
    let small = ChainComplex::zero_differential(field, small_basis);
    let sshape = small.shape().clone();

    let mut f_cols = Vec::with_capacity(shape.total());
    let mut phi_cols = Vec::with_capacity(shape.total());
    for i in 0..shape.total() {
        let (n, local) = shape.locate(i);
        let s = &splits[&n];
        let coords = s.p_inv.column(local);
        let nb = s.b_pre.len();
        let nh = s.h.len();
        let mut fv = SparseVec::new();
        let mut pv = SparseVec::new();
        for (&k, a) in coords {
            if k < nb {
                pv.add_term(shape.global(n + 1, s.b_pre[k]), a);
            } else if k < nb + nh {
                fv.add_term(sshape.global(n, k - nb), a);
            }
        }
        f_cols.push(fv);
        phi_cols.push(pv);
    }
    let g_cols = sshape
        .degrees()
        .flat_map(|n| {
            let off = shape.offset(n);
            splits[&n]
                .h
                .iter()
                .map(move |v| v.map_keys(|&j| j + off))
                .collect::<Vec<_>>()
        })
        .collect();
    let f = ChainMap::from_columns(field, shape.clone(), sshape.clone(), 0, f_cols)?;
    let g = ChainMap::from_columns(field, sshape, shape.clone(), 0, g_cols)?;
    let phi = ChainMap::from_columns(field, shape.clone(), shape, 1, phi_cols)?;
    Contraction::new(c.clone(), small, f, g, phi)
}
