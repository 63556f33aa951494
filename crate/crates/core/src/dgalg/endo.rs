use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, ChainMap, GradedBasis, Shape};
use crate::exactlin::{Field, Scalar, SparseVec};

use super::algebra::DGAlgebra;
use super::DgError;

/// A bounded complex of free modules over `R = k[x]/(x^m)`.
///
/// `F_i = R^{ranks[i - min_deg]}`; entry `(i, t, s)` of the differential is
/// the polynomial coefficient of `e_t ∈ F_{i-1}` in `d(e_s)` for
/// `e_s ∈ F_i`, stored as coefficients of `1, x, .., x^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    field: Field,
    nilpotency: usize,
    min_deg: i32,
    ranks: Vec<usize>,
    entries: BTreeMap<(i32, usize, usize), Vec<Scalar>>,
}

impl FreeComplex {
    pub fn new(
        field: Field,
        nilpotency: usize,
        min_deg: i32,
        ranks: Vec<usize>,
        entries: BTreeMap<(i32, usize, usize), Vec<Scalar>>,
    ) -> Result<Self, DgError> {
        if nilpotency == 0 {
            return Err(DgError::BadStructureConstant(
                "ring nilpotency must be at least 1".into(),
            ));
        }
        let fc = FreeComplex {
            field,
            nilpotency,
            min_deg,
            ranks,
            entries: BTreeMap::new(),
        };
        let mut clean = BTreeMap::new();
        for ((i, t, s), mut poly) in entries {
            if s >= fc.rank(i) || t >= fc.rank(i - 1) {
                return Err(DgError::BadStructureConstant(format!(
                    "differential entry ({i}, {t}, {s}) out of range"
                )));
            }
            poly.truncate(nilpotency);
            if poly.iter().any(|c| !c.is_zero()) {
                clean.insert((i, t, s), poly);
            }
        }
        let fc = FreeComplex {
            entries: clean,
            ..fc
        };
        fc.as_complex()
            .verify()
            .map_err(|e| DgError::Complex(crate::complexes::ComplexError::NotAComplex(e)))?;
        Ok(fc)
    }

    /// A plain complex of `k`-vector spaces viewed over `R = k`.
    pub fn from_complex(c: &ChainComplex) -> Self {
        let mut entries = BTreeMap::new();
        for n in c.shape().degrees() {
            let d = c.d(n);
            for (s, col) in d.columns().iter().enumerate() {
                for (&t, a) in col {
                    entries.insert((n, t, s), vec![a.clone()]);
                }
            }
        }
        FreeComplex {
            field: c.field(),
            nilpotency: 1,
            min_deg: c.shape().min_deg(),
            ranks: c.shape().degrees().map(|n| c.dim(n)).collect(),
            entries,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    pub fn min_deg(&self) -> i32 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i32 {
        self.min_deg + self.ranks.len() as i32 - 1
    }

    pub fn rank(&self, i: i32) -> usize {
        if i < self.min_deg || i > self.max_deg() {
            0
        } else {
            self.ranks[(i - self.min_deg) as usize]
        }
    }

    pub fn entry(&self, i: i32, t: usize, s: usize) -> Option<&Vec<Scalar>> {
        self.entries.get(&(i, t, s))
    }

    /// Nonzero entries `(t, poly)` of column `s` of `d_i`.
    fn column(&self, i: i32, s: usize) -> impl Iterator<Item = (usize, &Vec<Scalar>)> {
        self.entries
            .range((i, 0, 0)..(i + 1, 0, 0))
            .filter(move |((_, _, s2), _)| *s2 == s)
            .map(|((_, t, _), p)| (*t, p))
    }

    /// The underlying complex of `k`-vector spaces, basis `x^a e_s`.
    pub fn as_complex(&self) -> ChainComplex {
        let m = self.nilpotency;
        let labels = (self.min_deg..=self.max_deg())
            .map(|i| {
                (0..self.rank(i))
                    .flat_map(|s| (0..m).map(move |a| format!("x{a}e{i}_{s}")))
                    .collect()
            })
            .collect();
        let basis = GradedBasis::new(self.min_deg, labels).expect("generated labels are unique");
        let shape = basis.shape().clone();
        let mut cols = Vec::with_capacity(shape.total());
        for i in self.min_deg..=self.max_deg() {
            for s in 0..self.rank(i) {
                for a in 0..m {
                    let mut v = SparseVec::new();
                    for (t, poly) in self.column(i, s) {
                        for (b, c) in poly.iter().enumerate() {
                            if a + b < m {
                                v.add_term(shape.global(i - 1, t * m + a + b), c);
                            }
                        }
                    }
                    cols.push(v);
                }
            }
        }
        let d = ChainMap::from_columns(self.field, shape.clone(), shape, -1, cols)
            .expect("differential lowers degree");
        ChainComplex::new(self.field, basis, d).expect("shapes agree")
    }
}

/// The periodic free resolution of `F_p` over `F_p[C_p] = F_p[x]/(x^p)`,
/// `x = T - 1`, in degrees `0..=length`: `d_odd = x`, `d_even = x^{p-1}`.
pub fn cyclic_resolution(p: u64, length: usize) -> Result<FreeComplex, DgError> {
    let field = Field::prime(p)?;
    let m = p as usize;
    let mut entries = BTreeMap::new();
    for i in 1..=length as i32 {
        let mut poly = vec![field.zero(); m];
        let power = if i % 2 == 1 { 1 } else { m - 1 };
        poly[power] = field.one();
        entries.insert((i, 0, 0), poly);
    }
    FreeComplex::new(field, m, 0, vec![1; length + 1], entries)
}

/// An elementary `R`-linear map `e_s ∈ F_source ↦ x^power e_t ∈ F_{source - shift}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elementary {
    pub source: i32,
    pub shift: i32,
    pub s: usize,
    pub t: usize,
    pub power: usize,
}

/// The dg-algebra `Hom_R(F, F)` of maps lowering degree by `0..=window_top`,
/// modulo maps lowering degree by more than `window_top`.
///
/// A map lowering degree by `r` sits in homological degree `-r`; the
/// differential is `D(φ) = ∂φ - (-1)^{|φ|} φ∂` and the product `φψ = φ ∘ ψ`.
pub fn endomorphism_dga(f: &FreeComplex, window_top: i32) -> Result<DGAlgebra, DgError> {
    Ok(endomorphism_dga_with_basis(f, window_top)?.0)
}

/// [`endomorphism_dga`] together with the elementary map behind every basis
/// element.
pub fn endomorphism_dga_with_basis(
    f: &FreeComplex,
    window_top: i32,
) -> Result<(DGAlgebra, Vec<Elementary>), DgError> {
    if window_top < 1 {
        return Err(DgError::WindowTooSmall(window_top));
    }
    let field = f.field();
    let m = f.nilpotency();
    let mut elems: Vec<Elementary> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for deg in -window_top..=0 {
        let r = -deg;
        let mut layer = Vec::new();
        for i in f.min_deg() + r..=f.max_deg() {
            for s in 0..f.rank(i) {
                for t in 0..f.rank(i - r) {
                    for power in 0..m {
                        let e = Elementary {
                            source: i,
                            shift: r,
                            s,
                            t,
                            power,
                        };
                        layer.push(if m == 1 {
                            format!("{i}.{s}>{}.{t}", i - r)
                        } else {
                            format!("{i}.{s}>{}.{t}x{power}", i - r)
                        });
                        elems.push(e);
                    }
                }
            }
        }
        labels.push(layer);
    }
    let basis = GradedBasis::new(-window_top, labels)?;
    let shape: Shape = basis.shape().clone();
    let index: BTreeMap<Elementary, usize> =
        elems.iter().enumerate().map(|(k, e)| (*e, k)).collect();
    let lookup = |e: Elementary| -> Option<usize> {
        if e.shift > window_top || e.power >= m {
            None
        } else {
            index.get(&e).copied()
        }
    };

    let mut cols = Vec::with_capacity(elems.len());
    for e in &elems {
        let mut v = SparseVec::new();
        // ∂φ
        let tgt = e.source - e.shift;
        for (u, poly) in f.column(tgt, e.t) {
            for (b, c) in poly.iter().enumerate() {
                let img = Elementary {
                    source: e.source,
                    shift: e.shift + 1,
                    s: e.s,
                    t: u,
                    power: e.power + b,
                };
                if let Some(k) = lookup(img) {
                    v.add_term(k, c);
                }
            }
        }
        // -(-1)^{|φ|} φ∂ with |φ| = -r
        let sign = field.sign(e.shift as i64 + 1);
        for wv in 0..f.rank(e.source + 1) {
            if let Some(poly) = f.entry(e.source + 1, e.s, wv) {
                for (b, c) in poly.iter().enumerate() {
                    let img = Elementary {
                        source: e.source + 1,
                        shift: e.shift + 1,
                        s: wv,
                        t: e.t,
                        power: e.power + b,
                    };
                    if let Some(k) = lookup(img) {
                        v.add_term(k, &(c * &sign));
                    }
                }
            }
        }
        cols.push(v);
    }
    let d = ChainMap::from_columns(field, shape.clone(), shape, -1, cols)?;
    let complex = ChainComplex::new(field, basis, d)?;

    // φ ∘ ψ is nonzero when ψ lands on the generator φ starts from
    let mut by_source: BTreeMap<(i32, usize), Vec<usize>> = BTreeMap::new();
    for (k, e) in elems.iter().enumerate() {
        by_source.entry((e.source, e.s)).or_default().push(k);
    }
    let mut products = BTreeMap::new();
    for (b, psi) in elems.iter().enumerate() {
        let key = (psi.source - psi.shift, psi.t);
        if let Some(phis) = by_source.get(&key) {
            for &a in phis {
                let phi = elems[a];
                let prod = Elementary {
                    source: psi.source,
                    shift: phi.shift + psi.shift,
                    s: psi.s,
                    t: phi.t,
                    power: phi.power + psi.power,
                };
                if let Some(k) = lookup(prod) {
                    products.insert((a, b), SparseVec::basis(k, field));
                }
            }
        }
    }
    Ok((DGAlgebra::new(complex, products)?, elems))
}
