//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ainfty::complexes::{ChainComplex, ChainMap, Contraction, GradedBasis, homology_contraction};
use ainfty::dgalg::{
    dual_coalgebra, endomorphism_dga, simplicial_coalgebra, DGAlgebra, FreeComplex,
};
use ainfty::exactlin::{Field, SparseMatrix, SparseVec};
use ainfty::persistence::FilteredComplex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fields() -> [Field; 3] {
    [Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::Rational]
}

fn small_scalar(rng: &mut ChaCha8Rng, field: Field) -> ainfty::exactlin::Scalar {
    field.from_i64(rng.gen_range(-2..=2))
}

/// Random complex in degrees `0..degrees` with at most `max_dim` basis
/// elements per degree. Each `d_n` has columns drawn from `ker d_{n-1}`.
pub fn random_complex(
    rng: &mut ChaCha8Rng,
    field: Field,
    degrees: usize,
    max_dim: usize,
) -> ChainComplex {
    let dims: Vec<usize> = (0..degrees).map(|_| rng.gen_range(0..=max_dim)).collect();
    let labels: Vec<Vec<String>> = dims
        .iter()
        .enumerate()
        .map(|(n, &d)| (0..d).map(|i| format!("c{n}_{i}")).collect())
        .collect();
    let mut mats: BTreeMap<i32, SparseMatrix> = BTreeMap::new();
    let mut prev: Option<SparseMatrix> = None;
    for n in 1..degrees {
        let (rows, cols) = (dims[n - 1], dims[n]);
        let allowed: Vec<SparseVec> = match &prev {
            None => (0..rows).map(|r| SparseVec::basis(r, field)).collect(),
            Some(p) => p.kernel_basis(),
        };
        let density = rng.gen_range(0.2..0.9);
        let columns: Vec<SparseVec> = (0..cols)
            .map(|_| {
                let mut v = SparseVec::new();
                for a in &allowed {
                    if rng.gen_bool(density) {
                        v.add_scaled(a, &small_scalar(rng, field));
                    }
                }
                v
            })
            .collect();
        let m = SparseMatrix::from_columns(field, rows, columns).unwrap();
        prev = Some(m.clone());
        mats.insert(n as i32, m);
    }
    let basis = GradedBasis::new(0, labels).unwrap();
    ChainComplex::from_matrices(field, basis, &mats).unwrap()
}

/// Closure under faces of the given simplices.
pub fn closure(tops: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut set = BTreeSet::new();
    for t in tops {
        let n = t.len();
        for mask in 1..(1u32 << n) {
            set.insert(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| t[i])
                    .collect::<Vec<_>>(),
            );
        }
    }
    let mut v: Vec<Vec<usize>> = set.into_iter().collect();
    v.sort_by_key(|s| s.len());
    v
}

/// Random simplicial complex on at most `max_vertices` vertices with at
/// most `max_simplices` simplices and dimension at most `max_dim`.
pub fn random_simplicial(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_dim: usize,
    max_simplices: usize,
) -> Vec<Vec<usize>> {
    let nv = rng.gen_range(2..=max_vertices);
    let mut tops: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
    let mut current = closure(&tops);
    for _ in 0..4 * max_simplices {
        let d = rng.gen_range(1..=max_dim);
        let mut verts: Vec<usize> = (0..nv).collect();
        verts.shuffle(rng);
        let mut s: Vec<usize> = verts.into_iter().take(d + 1).collect();
        if s.len() < d + 1 {
            continue;
        }
        s.sort();
        tops.push(s);
        let next = closure(&tops);
        if next.len() > max_simplices {
            tops.pop();
        } else {
            current = next;
        }
    }
    current
}

/// Random filtration: random integer values made monotone along faces.
pub fn random_filtration(rng: &mut ChaCha8Rng, max_simplices: usize) -> FilteredComplex {
    let simplices = random_simplicial(rng, 7, 3, max_simplices);
    let mut value: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for s in &simplices {
        let mut v = rng.gen_range(0..8) as f64;
        if s.len() > 1 {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                v = v.max(value[&face]);
            }
        }
        value.insert(s.clone(), v);
    }
    let mut list: Vec<(Vec<usize>, f64)> = value.into_iter().collect();
    list.shuffle(rng);
    FilteredComplex::new(list).unwrap()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect()
}

/// Simplicial cochains of a random complex with the cup product.
pub fn random_cochain_dga(rng: &mut ChaCha8Rng, field: Field) -> DGAlgebra {
    let s = random_simplicial(rng, 6, 2, 16);
    dual_coalgebra(&simplicial_coalgebra(field, &s).unwrap()).unwrap()
}

/// Endomorphism dg-algebra of a small random complex.
pub fn random_endo_dga(rng: &mut ChaCha8Rng, field: Field) -> DGAlgebra {
    let c = random_complex(rng, field, 3, 2);
    endomorphism_dga(&FreeComplex::from_complex(&c), 2).unwrap()
}

/// Direct sum `N_0 ⊕ N_1` of two random complexes with the perturbation
/// `δ = ∂ψ - ψ∂` for a random degree-0 map `ψ: N_0 → N_1`, and the homology
/// contraction of the unperturbed sum.
pub fn random_perturbed(rng: &mut ChaCha8Rng, field: Field) -> (Contraction, ChainMap) {
    let a = random_complex(rng, field, 4, 3);
    let b = random_complex(rng, field, 4, 3);
    let degrees = 4i32;
    let labels: Vec<Vec<String>> = (0..degrees)
        .map(|n| {
            let la = a.basis().labels_in(n).iter().map(|l| format!("a{l}"));
            let lb = b.basis().labels_in(n).iter().map(|l| format!("b{l}"));
            la.chain(lb).collect()
        })
        .collect();
    let basis = GradedBasis::new(0, labels).unwrap();
    let shape = basis.shape().clone();
    let from_a = |i: usize| {
        let (n, k) = a.shape().locate(i);
        shape.global(n, k)
    };
    let from_b = |i: usize| {
        let (n, k) = b.shape().locate(i);
        shape.global(n, a.dim(n) + k)
    };
    let mut dcols = vec![SparseVec::new(); shape.total()];
    for i in 0..a.shape().total() {
        dcols[from_a(i)] = a.boundary(&SparseVec::basis(i, field)).map_keys(|&k| from_a(k));
    }
    for i in 0..b.shape().total() {
        dcols[from_b(i)] = b.boundary(&SparseVec::basis(i, field)).map_keys(|&k| from_b(k));
    }
    let d = ChainMap::from_columns(field, shape.clone(), shape.clone(), -1, dcols).unwrap();
    let n = ChainComplex::new(field, basis, d.clone()).unwrap();
    // ψ: degree 0, N_0 → N_1
    let mut psi_cols = vec![SparseVec::new(); shape.total()];
    for i in 0..a.shape().total() {
        let deg = a.shape().degree_of(i);
        let mut v = SparseVec::new();
        for k in b.shape().range(deg) {
            if rng.gen_bool(0.5) {
                v.add_term(from_b(k), &small_scalar(rng, field));
            }
        }
        psi_cols[from_a(i)] = v;
    }
    let psi = ChainMap::from_columns(field, shape.clone(), shape, 0, psi_cols).unwrap();
    let delta = d.compose(&psi).unwrap().sub(&psi.compose(&d).unwrap()).unwrap();
    (homology_contraction(&n).unwrap(), delta)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Scalar as a reduced fraction, read back from its printed form.
fn as_fraction(s: &ainfty::exactlin::Scalar) -> (i128, i128) {
    let t = s.to_string();
    match t.split_once('/') {
        Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
        None => (t.parse().unwrap(), 1),
    }
}

/// Rank by plain Gaussian elimination on dense `i128` data, independent of
/// the library's sparse elimination: residues mod `p`, or fractions over Q.
pub fn oracle_rank(field: Field, m: &SparseMatrix) -> usize {
    let rows: Vec<Vec<(i128, i128)>> = m
        .to_dense()
        .iter()
        .map(|r| r.iter().map(as_fraction).collect())
        .collect();
    let p = field.characteristic() as i128;
    let norm = |(a, b): (i128, i128)| -> (i128, i128) {
        if p > 0 {
            // b is 1 for residues
            (a.rem_euclid(p), 1)
        } else {
            let g = gcd(a, b).max(1);
            let s = if b < 0 { -1 } else { 1 };
            (s * a / g, s * b / g)
        }
    };
    let inv = |x: i128| -> i128 {
        let mut r = 1;
        for _ in 0..p - 2 {
            r = r * x % p;
        }
        r
    };
    let mut a: Vec<Vec<(i128, i128)>> = rows.into_iter().map(|r| r.into_iter().map(norm).collect()).collect();
    let (nr, nc) = (a.len(), m.cols());
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| a[r][c].0 != 0) else { continue };
        a.swap(rank, piv);
        let pv = a[rank][c];
        for r in 0..nr {
            if r == rank || a[r][c].0 == 0 {
                continue;
            }
            let x = a[r][c];
            for k in 0..nc {
                let y = a[rank][k];
                if y.0 == 0 {
                    continue;
                }
                // a[r][k] -= (x / pv) * y
                let t = if p > 0 {
                    (x.0 * inv(pv.0) % p * y.0 % p, 1)
                } else {
                    norm((x.0 * pv.1 * y.0, x.1 * pv.0 * y.1))
                };
                let cur = a[r][k];
                a[r][k] = if p > 0 {
                    norm((cur.0 - t.0, 1))
                } else {
                    norm((cur.0 * t.1 - t.0 * cur.1, cur.1 * t.1))
                };
            }
        }
        rank += 1;
    }
    rank
}

/// Contraction with `φ = 0` from `c` onto a copy of it conjugated by a
/// random invertible degree-0 map `P`: `f = P`, `g = P⁻¹`, `d' = P d P⁻¹`.
pub fn random_iso_contraction(rng: &mut ChaCha8Rng, c: &ChainComplex) -> Contraction {
    let field = c.field();
    let shape = c.shape().clone();
    let mut p_cols = vec![SparseVec::new(); shape.total()];
    let mut q_cols = vec![SparseVec::new(); shape.total()];
    for n in shape.degrees() {
        let dim = shape.dim(n);
        let off = shape.offset(n);
        let block = loop {
            let cols: Vec<SparseVec> = (0..dim)
                .map(|_| {
                    let mut v = SparseVec::new();
                    for r in 0..dim {
                        v.add_term(r, &small_scalar(rng, field));
                    }
                    v
                })
                .collect();
            let m = SparseMatrix::from_columns(field, dim, cols).unwrap();
            if m.rank() == dim {
                break m;
            }
        };
        for j in 0..dim {
            p_cols[off + j] = block.column(j).map_keys(|&k| k + off);
            let e = SparseVec::basis(j, field);
            q_cols[off + j] = block.solve_preimage(&e).unwrap().map_keys(|&k| k + off);
        }
    }
    let p = ChainMap::from_columns(field, shape.clone(), shape.clone(), 0, p_cols).unwrap();
    let q = ChainMap::from_columns(field, shape.clone(), shape.clone(), 0, q_cols).unwrap();
    let d = p.compose(&c.differential().compose(&q).unwrap()).unwrap();
    let labels: Vec<Vec<String>> = shape
        .degrees()
        .map(|n| c.basis().labels_in(n).iter().map(|l| format!("{l}'")).collect())
        .collect();
    let basis = GradedBasis::new(shape.min_deg(), labels).unwrap();
    let small = ChainComplex::new(field, basis, d).unwrap();
    let zero = ChainMap::zero(field, shape.clone(), shape, 1);
    Contraction::new(c.clone(), small, p, q, zero).unwrap()
}

pub fn torus_tops() -> Vec<Vec<usize>> {
    [
        [1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3],
        [1, 2, 6], [2, 3, 7], [3, 4, 1], [4, 5, 2], [5, 6, 3], [6, 7, 4], [7, 1, 5],
    ]
    .iter()
    .map(|t| {
        let mut t: Vec<usize> = t.iter().map(|x| x - 1).collect();
        t.sort();
        t
    })
    .collect()
}

/// Skeleton at 0, the seven-vertex torus at 1, then a triangle killing one
/// of the loops in its Δ_3 at 2.
pub fn torus_filtration() -> FilteredComplex {
    let mut list: Vec<(Vec<usize>, f64)> = closure(&torus_tops())
        .into_iter()
        .map(|s| {
            let v = if s.len() == 3 { 1.0 } else { 0.0 };
            (s, v)
        })
        .collect();
    list.push((vec![0, 1, 2], 2.0));
    FilteredComplex::new(list).unwrap()
}
