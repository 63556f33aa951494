use std::collections::btree_map::{self, BTreeMap};

use super::field::{Field, Scalar};

/// A finite formal linear combination of keys with nonzero coefficients.
///
/// Zero coefficients are never stored, so two combinations are equal exactly
/// when they represent the same vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

/// Sparse vector indexed by basis position.
pub type SparseVec = LinComb<usize>;

/// Element of a tensor power, indexed by basis tuples.
pub type TensorVec = LinComb<Vec<usize>>;

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(key: K, field: Field) -> Self {
        let mut v = Self::new();
        v.terms.insert(key, field.one());
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut v = Self::new();
        for (k, c) in terms {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Scalar> {
        self.terms.get(key)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Scalar> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Scalar> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, key: K, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff.clone());
            }
            btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + coeff;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        LinComb {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        LinComb {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), &-v);
        }
        out
    }

    /// Relabels keys; coefficients of keys mapped together are summed.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::new();
        for (k, v) in &self.terms {
            out.add_term(f(k), v);
        }
        out
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> LinComb<L>) -> LinComb<L> {
        let mut out = LinComb::new();
        for (k, v) in &self.terms {
            out.add_scaled(&f(k), v);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        LinComb::from_terms(iter)
    }
}

impl<'a, K: Ord> IntoIterator for &'a LinComb<K> {
    type Item = (&'a K, &'a Scalar);
    type IntoIter = btree_map::Iter<'a, K, Scalar>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl SparseVec {
    /// Dense coordinates of length `n`.
    pub fn to_dense(&self, n: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); n];
        for (&i, v) in &self.terms {
            out[i] = v.clone();
        }
        out
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }

    /// Largest index with a nonzero coefficient.
    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }
}

/// Tensor product of basis tuples: `(a_1..a_k) ⊗ (b_1..b_l) = (a_1..a_k, b_1..b_l)`.
pub fn tensor_concat(a: &TensorVec, b: &TensorVec) -> TensorVec {
    let mut out = TensorVec::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let mut key = ka.clone();
            key.extend_from_slice(kb);
            out.add_term(key, &(va * vb));
        }
    }
    out
}
