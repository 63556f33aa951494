use std::collections::BTreeMap;

use crate::complexes::{ChainComplex, Shape};
use crate::exactlin::{Field, SparseVec, TensorVec};

use super::{DGAlgebra, DGCoalgebra, DgError};

/// A multilinear operation `C^{⊗n} -> C` stored by its values on basis
/// tuples (global indices). Missing tuples map to zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiOp {
    arity: usize,
    values: BTreeMap<Vec<usize>, SparseVec>,
}

impl MultiOp {
    pub fn new(arity: usize) -> Self {
        MultiOp {
            arity,
            values: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn insert(&mut self, tuple: Vec<usize>, value: SparseVec) {
        debug_assert_eq!(tuple.len(), self.arity);
        if value.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, value);
        }
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&SparseVec> {
        self.values.get(tuple)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of basis tuples with a nonzero value.
    pub fn support_size(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.values.iter()
    }

    /// Multilinear extension to a sum of tuples.
    pub fn eval(&self, v: &TensorVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (key, c) in v {
            if let Some(val) = self.values.get(key) {
                out.add_scaled(val, c);
            }
        }
        out
    }
}

/// A co-multilinear operation `C -> C^{⊗n}` stored per basis element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoOp {
    arity: usize,
    values: BTreeMap<usize, TensorVec>,
}

impl CoOp {
    pub fn new(arity: usize) -> Self {
        CoOp {
            arity,
            values: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn insert(&mut self, i: usize, value: TensorVec) {
        debug_assert!(value.keys().all(|k| k.len() == self.arity));
        if value.is_zero() {
            self.values.remove(&i);
        } else {
            self.values.insert(i, value);
        }
    }

    pub fn get(&self, i: usize) -> Option<&TensorVec> {
        self.values.get(&i)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &TensorVec)> {
        self.values.iter()
    }

    pub fn apply(&self, v: &SparseVec) -> TensorVec {
        let mut out = TensorVec::new();
        for (i, c) in v {
            if let Some(val) = self.values.get(i) {
                out.add_scaled(val, c);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operations {
    /// `m_n` for `n ≥ 2`; `m_1` is the carrier differential.
    Algebra(BTreeMap<usize, MultiOp>),
    /// `Δ_n` for `n ≥ 2`; `Δ_1` is the carrier differential.
    Coalgebra(BTreeMap<usize, CoOp>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Coalgebra,
}

/// Operations of arity `2..=certified_arity` on a carrier complex.
///
/// For algebras, `domain` optionally restricts inputs to basis elements
/// whose degree lies in a window; values on other tuples are not defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityStructure {
    pub carrier: ChainComplex,
    pub ops: Operations,
    pub certified_arity: usize,
    pub complete: bool,
    pub domain: Option<(i32, i32)>,
}

impl AInfinityStructure {
    pub fn new_algebra(carrier: ChainComplex, domain: Option<(i32, i32)>) -> Self {
        AInfinityStructure {
            carrier,
            ops: Operations::Algebra(BTreeMap::new()),
            certified_arity: 1,
            complete: false,
            domain,
        }
    }

    pub fn new_coalgebra(carrier: ChainComplex) -> Self {
        AInfinityStructure {
            carrier,
            ops: Operations::Coalgebra(BTreeMap::new()),
            certified_arity: 1,
            complete: false,
            domain: None,
        }
    }

    /// A dg-algebra as an A∞ algebra: `m_1 = ∂`, `m_2(a, b) = (-1)^{|a|+1} ab`.
    pub fn from_dga(a: &DGAlgebra) -> Self {
        let shape = a.shape();
        let field = a.complex().field();
        let mut m2 = MultiOp::new(2);
        for (&(x, y), v) in a.products() {
            m2.insert(vec![x, y], v.scaled(&field.sign(shape.degree_of(x) as i64 + 1)));
        }
        let mut s = AInfinityStructure::new_algebra(a.complex().clone(), None);
        s.set_m(m2);
        s.certified_arity = 2;
        s.complete = true;
        s
    }

    /// A dg-coalgebra as an A∞ coalgebra: `Δ_1 = ∂`, `Δ_2 = Δ`.
    pub fn from_dgc(c: &DGCoalgebra) -> Self {
        let mut d2 = CoOp::new(2);
        for (i, v) in c.coproducts().iter().enumerate() {
            d2.insert(i, v.clone());
        }
        let mut s = AInfinityStructure::new_coalgebra(c.complex().clone());
        s.set_delta(d2);
        s.certified_arity = 2;
        s.complete = true;
        s
    }

    pub fn kind(&self) -> Kind {
        match self.ops {
            Operations::Algebra(_) => Kind::Algebra,
            Operations::Coalgebra(_) => Kind::Coalgebra,
        }
    }

    pub fn field(&self) -> Field {
        self.carrier.field()
    }

    pub fn shape(&self) -> &Shape {
        self.carrier.shape()
    }

    pub fn m(&self, n: usize) -> Option<&MultiOp> {
        match &self.ops {
            Operations::Algebra(ops) => ops.get(&n),
            Operations::Coalgebra(_) => None,
        }
    }

    pub fn delta(&self, n: usize) -> Option<&CoOp> {
        match &self.ops {
            Operations::Coalgebra(ops) => ops.get(&n),
            Operations::Algebra(_) => None,
        }
    }

    pub fn set_m(&mut self, op: MultiOp) {
        if let Operations::Algebra(ops) = &mut self.ops {
            ops.insert(op.arity(), op);
        }
    }

    pub fn set_delta(&mut self, op: CoOp) {
        if let Operations::Coalgebra(ops) = &mut self.ops {
            ops.insert(op.arity(), op);
        }
    }

    /// Highest populated arity.
    pub fn max_arity(&self) -> usize {
        match &self.ops {
            Operations::Algebra(ops) => ops.keys().next_back().copied().unwrap_or(1),
            Operations::Coalgebra(ops) => ops.keys().next_back().copied().unwrap_or(1),
        }
    }

    /// Whether an operation of arity `n` is zero (arities past a completed
    /// structure count as zero).
    pub fn is_zero_at(&self, n: usize) -> Option<bool> {
        match &self.ops {
            Operations::Algebra(ops) => ops.get(&n).map(|o| o.is_zero()),
            Operations::Coalgebra(ops) => ops.get(&n).map(|o| o.is_zero()),
        }
        .or(if self.complete { Some(true) } else { None })
    }

    /// Basis elements allowed as inputs.
    pub fn domain_basis(&self) -> Vec<usize> {
        let shape = self.shape();
        (0..shape.total())
            .filter(|&i| match self.domain {
                Some((lo, hi)) => (lo..=hi).contains(&shape.degree_of(i)),
                None => true,
            })
            .collect()
    }

    /// `m_n` on a single tuple; `m_1` is the differential.
    pub fn m_value(&self, tuple: &[usize]) -> Result<SparseVec, DgError> {
        let n = tuple.len();
        if n == 1 {
            return Ok(self.carrier.differential().column(tuple[0]).clone());
        }
        match self.m(n) {
            Some(op) => Ok(op.get(tuple).cloned().unwrap_or_default()),
            None if self.complete => Ok(SparseVec::new()),
            None => Err(DgError::MissingArity(n)),
        }
    }

    fn m_eval(&self, v: &TensorVec, n: usize) -> Result<SparseVec, DgError> {
        if n == 1 {
            let mut out = SparseVec::new();
            for (k, c) in v {
                out.add_scaled(self.carrier.differential().column(k[0]), c);
            }
            return Ok(out);
        }
        match self.m(n) {
            Some(op) => Ok(op.eval(v)),
            None if self.complete => Ok(SparseVec::new()),
            None => Err(DgError::MissingArity(n)),
        }
    }

    fn delta_apply(&self, x: usize, n: usize) -> Result<TensorVec, DgError> {
        if n == 1 {
            return Ok(self
                .carrier
                .differential()
                .column(x)
                .map_keys(|&k| vec![k]));
        }
        match self.delta(n) {
            Some(op) => Ok(op.get(x).cloned().unwrap_or_default()),
            None if self.complete => Ok(TensorVec::new()),
            None => Err(DgError::MissingArity(n)),
        }
    }
}

/// Tuples of length `n` over `candidates` whose total degree lies in
/// `[lo, hi]`, in lexicographic order of candidate position.
pub fn enumerate_tuples(
    shape: &Shape,
    candidates: &[usize],
    n: usize,
    lo: i64,
    hi: i64,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if candidates.is_empty() {
        return out;
    }
    let degs: Vec<i64> = candidates
        .iter()
        .map(|&c| shape.degree_of(c) as i64)
        .collect();
    let dmin = *degs.iter().min().unwrap();
    let dmax = *degs.iter().max().unwrap();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        cands: &[usize],
        degs: &[i64],
        bounds: (i64, i64, i64, i64),
        left: usize,
        sum: i64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let (lo, hi, dmin, dmax) = bounds;
        if left == 0 {
            if (lo..=hi).contains(&sum) {
                out.push(cur.clone());
            }
            return;
        }
        for (k, &c) in cands.iter().enumerate() {
            let s = sum + degs[k];
            let rest = left as i64 - 1;
            if s + rest * dmin > hi || s + rest * dmax < lo {
                continue;
            }
            cur.push(c);
            rec(cands, degs, bounds, left - 1, s, cur, out);
            cur.pop();
        }
    }
    rec(
        candidates,
        &degs,
        (lo, hi, dmin, dmax),
        n,
        0,
        &mut cur,
        &mut out,
    );
    out
}

fn splice(tuple: &[usize], r: usize, s: usize, inner: &SparseVec) -> TensorVec {
    inner.map_keys(|&k| {
        let mut key = Vec::with_capacity(tuple.len() - s + 1);
        key.extend_from_slice(&tuple[..r]);
        key.push(k);
        key.extend_from_slice(&tuple[r + s..]);
        key
    })
}

/// The Stasheff expression
/// `Σ_{r+s+t=n} (-1)^{Σ_{i≤r}(|a_i|+1)} m_{r+1+t}(a_1..a_r, m_s(a_{r+1}..a_{r+s}), ..)`
/// on one tuple.
pub fn stasheff_value(s: &AInfinityStructure, tuple: &[usize]) -> Result<SparseVec, DgError> {
    let n = tuple.len();
    let shape = s.shape();
    let field = s.field();
    let mut out = SparseVec::new();
    let flat = s.carrier.differential().is_zero();
    let mut eps = 0i64;
    for r in 0..n {
        for len in 1..=n - r {
            if flat && (len == 1 || len == n) {
                continue;
            }
            let inner = s.m_value(&tuple[r..r + len])?;
            if !inner.is_zero() {
                let outer = splice(tuple, r, len, &inner);
                let val = s.m_eval(&outer, n - len + 1)?;
                out.add_scaled(&val, &field.sign(eps));
            }
        }
        eps += shape.degree_of(tuple[r]) as i64 + 1;
    }
    Ok(out)
}

/// `Σ_{r+s+t=n} (-1)^{r+st} (1^{⊗r} ⊗ Δ_s ⊗ 1^{⊗t}) Δ_{r+1+t}` on one basis
/// element, with the Koszul sign of `Δ_s` (degree `s - 2`) passing the first
/// `r` factors.
pub fn costasheff_value(
    s: &AInfinityStructure,
    x: usize,
    n: usize,
) -> Result<TensorVec, DgError> {
    let shape = s.shape();
    let field = s.field();
    let flat = s.carrier.differential().is_zero();
    let mut out = TensorVec::new();
    for u in 1..=n {
        let sa = n + 1 - u;
        if flat && (u == 1 || sa == 1) {
            continue;
        }
        let outer = s.delta_apply(x, u)?;
        for (key, c) in &outer {
            let mut passed = 0i64;
            for r in 0..u {
                let t = u - 1 - r;
                let sign = (r + sa * t) as i64 + sa as i64 * passed;
                let inner = s.delta_apply(key[r], sa)?;
                let coef = c * &field.sign(sign);
                for (ik, a) in &inner {
                    let mut k = Vec::with_capacity(n);
                    k.extend_from_slice(&key[..r]);
                    k.extend_from_slice(ik);
                    k.extend_from_slice(&key[r + 1..]);
                    out.add_term(k, &(&coef * a));
                }
                passed += shape.degree_of(key[r]) as i64;
            }
        }
    }
    Ok(out)
}

/// Nonzero values of the arity `n` Stasheff expression. Algebra kind yields
/// a [`MultiOp`] of arity `n`; coalgebra kind a [`CoOp`] of arity `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    Algebra(MultiOp),
    Coalgebra(CoOp),
}

impl Defect {
    pub fn is_zero(&self) -> bool {
        match self {
            Defect::Algebra(m) => m.is_zero(),
            Defect::Coalgebra(c) => c.is_zero(),
        }
    }

    /// Labels of the first basis tuple (or element) with a nonzero defect.
    pub fn witness(&self, carrier: &ChainComplex) -> Option<Vec<String>> {
        let b = carrier.basis();
        match self {
            Defect::Algebra(m) => m
                .iter()
                .next()
                .map(|(t, _)| t.iter().map(|&i| b.label(i).to_string()).collect()),
            Defect::Coalgebra(c) => c.iter().next().map(|(&i, _)| vec![b.label(i).to_string()]),
        }
    }
}

pub fn stasheff_defect(s: &AInfinityStructure, n: usize) -> Result<Defect, DgError> {
    if n == 0 {
        return Err(DgError::MissingArity(0));
    }
    match s.kind() {
        Kind::Algebra => {
            let shape = s.shape();
            let dom = s.domain_basis();
            let lo = shape.min_deg() as i64 - n as i64 + 3;
            let hi = shape.max_deg() as i64 - n as i64 + 3;
            let mut defect = MultiOp::new(n);
            for t in enumerate_tuples(shape, &dom, n, lo, hi) {
                let v = stasheff_value(s, &t)?;
                defect.insert(t, v);
            }
            Ok(Defect::Algebra(defect))
        }
        Kind::Coalgebra => {
            let mut defect = CoOp::new(n);
            for x in 0..s.shape().total() {
                defect.insert(x, costasheff_value(s, x, n)?);
            }
            Ok(Defect::Coalgebra(defect))
        }
    }
}

/// Components `f_n : H^{⊗n} -> A` of an A∞-morphism from a structure on a
/// small complex into a dg-algebra, populated up to `certified_arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityMorphism {
    pub components: BTreeMap<usize, MultiOp>,
    pub certified_arity: usize,
}

impl AInfinityMorphism {
    pub fn new() -> Self {
        AInfinityMorphism {
            components: BTreeMap::new(),
            certified_arity: 0,
        }
    }

    pub fn f(&self, n: usize) -> Option<&MultiOp> {
        self.components.get(&n)
    }
}

impl Default for AInfinityMorphism {
    fn default() -> Self {
        AInfinityMorphism::new()
    }
}
