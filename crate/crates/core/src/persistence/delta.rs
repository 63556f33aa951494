use std::collections::BTreeMap;

use crate::complexes::{homology_contraction, Contraction};
use crate::dgalg::{simplicial_coalgebra, AInfinityStructure, DGCoalgebra};
use crate::exactlin::{Field, SparseMatrix, SparseVec, TensorVec};
use crate::perturbation::tensor_trick;

use super::{
    persistent_rank, DiagramKind, FilteredComplex, Interval, PersistenceDiagram, PersistenceError,
};

/// The transferred A∞-coalgebra on the homology of one stage.
#[derive(Clone, Debug)]
pub struct StageCoalgebra {
    pub value: f64,
    pub coalgebra: DGCoalgebra,
    pub contraction: Contraction,
    pub structure: AInfinityStructure,
    /// Coalgebra basis index of each simplex of the stage, by sorted position.
    pub local: Vec<usize>,
    /// Sorted position of each coalgebra basis element.
    pub sorted_of: Vec<usize>,
}

impl StageCoalgebra {
    /// Degree-`k` homology basis, as global indices of the small complex.
    pub fn classes(&self, k: usize) -> std::ops::Range<usize> {
        self.contraction.small.shape().range(k as i32)
    }

    pub fn delta(&self, n: usize, v: &SparseVec) -> TensorVec {
        self.structure
            .delta(n)
            .map(|op| op.apply(v))
            .unwrap_or_default()
    }
}

/// Chains on the stage at value `t` with the Alexander–Whitney diagonal,
/// contracted onto homology and transferred through the tensor trick.
/// Simplices keep the global sorted order, so every stage uses the same
/// choices on the part it shares with later stages.
pub fn ainfty_stage(
    f: &FilteredComplex,
    t: f64,
    limit: usize,
) -> Result<StageCoalgebra, PersistenceError> {
    let field = Field::Rational;
    let len = f.prefix_len(t);
    if len == 0 {
        return Err(PersistenceError::BadParameter(format!(
            "no simplices at value {t}"
        )));
    }
    let simplices: Vec<Vec<usize>> = f.simplices()[..len].iter().map(|(s, _)| s.clone()).collect();
    let coalgebra = simplicial_coalgebra(field, &simplices)?;
    let shape = coalgebra.shape().clone();
    let mut seen = vec![0usize; f.max_dim() + 1];
    let mut local = Vec::with_capacity(len);
    let mut sorted_of = vec![0; len];
    for (pos, s) in simplices.iter().enumerate() {
        let d = s.len() - 1;
        let g = shape.global(d as i32, seen[d]);
        seen[d] += 1;
        local.push(g);
        sorted_of[g] = pos;
    }
    let contraction = homology_contraction(coalgebra.complex())?;
    let structure = tensor_trick(&coalgebra, &contraction, limit)?;
    Ok(StageCoalgebra {
        value: t,
        coalgebra,
        contraction,
        structure,
        local,
        sorted_of,
    })
}

/// `H(ι)`: homology class `x` of stage `a`, carried into stage `b ≥ a`.
pub fn induced(a: &StageCoalgebra, b: &StageCoalgebra, x: &SparseVec) -> SparseVec {
    let cycle = a.contraction.g.apply(x);
    let moved = cycle.map_keys(|&i| b.local[a.sorted_of[i]]);
    b.contraction.f.apply(&moved)
}

fn induced_tensor(a: &StageCoalgebra, b: &StageCoalgebra, v: &TensorVec) -> TensorVec {
    let mut out = TensorVec::new();
    for (key, c) in v {
        let mut acc = TensorVec::from_terms([(Vec::new(), c.clone())]);
        for &e in key {
            let img = induced(a, b, &SparseVec::basis(e, Field::Rational));
            let mut next = TensorVec::new();
            for (k, ck) in &acc {
                for (&i, ci) in &img {
                    let mut kk = k.clone();
                    kk.push(i);
                    next.add_term(kk, &(ck * ci));
                }
            }
            acc = next;
        }
        out.add_assign(&acc);
    }
    out
}

/// A class whose representative cycle is reused by the next stage but whose
/// higher coproduct does not restrict.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityWarning {
    pub from: f64,
    pub to: f64,
    pub class: String,
    pub arity: usize,
}

/// Compares consecutive stages wherever the representative cycles coincide.
pub fn compatibility(stages: &[StageCoalgebra], limit: usize) -> Vec<CompatibilityWarning> {
    let mut out = Vec::new();
    for w in stages.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let reps: BTreeMap<Vec<(usize, String)>, usize> = (0..b.contraction.small.shape().total())
            .map(|y| (key_of(b.contraction.g.column(y)), y))
            .collect();
        for x in 0..a.contraction.small.shape().total() {
            let cycle = a
                .contraction
                .g
                .column(x)
                .map_keys(|&i| b.local[a.sorted_of[i]]);
            let Some(&y) = reps.get(&key_of(&cycle)) else {
                continue;
            };
            let xv = SparseVec::basis(x, Field::Rational);
            let yv = SparseVec::basis(y, Field::Rational);
            for n in 2..=limit {
                if induced_tensor(a, b, &a.delta(n, &xv)) != b.delta(n, &yv) {
                    out.push(CompatibilityWarning {
                        from: a.value,
                        to: b.value,
                        class: a.contraction.small.basis().label(x).to_string(),
                        arity: n,
                    });
                }
            }
        }
    }
    out
}

fn key_of(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(&i, c)| (i, c.to_string())).collect()
}

/// `dim Δ_nPH^{i,j}` and `dim PH^{i,j}` over all stage pairs `i ≤ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTable {
    pub values: Vec<f64>,
    pub delta: BTreeMap<(usize, usize), usize>,
    pub classical: BTreeMap<(usize, usize), usize>,
}

/// A class counted at stage `born` that leaves `ker Δ_n` at `gap` and is
/// back in it, still nonzero, at `resume`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flicker {
    pub born: f64,
    pub gap: f64,
    pub resume: f64,
}

#[derive(Clone, Debug)]
pub struct DeltaBarcode {
    pub diagram: PersistenceDiagram,
    pub ranks: RankTable,
    pub flickers: Vec<Flicker>,
    /// Stage pairs where the inclusion–exclusion count is negative, so no
    /// interval multiset reproduces the rank table.
    pub inconsistent: Vec<(f64, f64, i64)>,
    pub warnings: Vec<CompatibilityWarning>,
}

fn rank_of(field: Field, vs: &[SparseVec], rows: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    SparseMatrix::from_columns(field, rows, vs.to_vec())
        .expect("shapes")
        .rank()
}

/// Kernel of `x ↦ (Δ_n^l ι(x))_l` on the span of `basis`, returned in
/// the coordinates of the ambient local class space.
fn kernel_within(basis: &[SparseVec], images: &[Vec<TensorVec>]) -> Vec<SparseVec> {
    let field = Field::Rational;
    let mut rows: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|b| {
            let mut col = SparseVec::new();
            for (x, c) in b {
                for (l, t) in images[*x].iter().enumerate() {
                    for (key, ck) in t {
                        let next = rows.len();
                        let r = *rows.entry((l, key.clone())).or_insert(next);
                        col.add_term(r, &(c * ck));
                    }
                }
            }
            col
        })
        .collect();
    if basis.is_empty() {
        return Vec::new();
    }
    let m = SparseMatrix::from_columns(field, rows.len(), cols).expect("shapes");
    m.kernel_basis()
        .into_iter()
        .map(|coef| {
            let mut v = SparseVec::new();
            for (a, c) in &coef {
                v.add_scaled(&basis[*a], c);
            }
            v
        })
        .collect()
}

/// The Δ_n-persistence diagram in degree `k`: ranks of the images of
/// `∩_{l=i..j} ker(Δ_n^l ∘ ι_i^l)` under `ι_i^j` at every pair of critical
/// stages, with intervals recovered by inclusion–exclusion.
pub fn delta_barcode(
    f: &FilteredComplex,
    n: usize,
    k: usize,
    limit: usize,
) -> Result<DeltaBarcode, PersistenceError> {
    if n < 2 || limit < n {
        return Err(PersistenceError::BadParameter(format!(
            "need 2 ≤ n ≤ arity limit, got n = {n}, limit = {limit}"
        )));
    }
    let field = Field::Rational;
    let values = f.critical_values();
    let stages: Vec<StageCoalgebra> = values
        .iter()
        .map(|&t| ainfty_stage(f, t, limit))
        .collect::<Result<_, _>>()?;
    let ns = stages.len();

    let mut delta = BTreeMap::new();
    let mut classical = BTreeMap::new();
    let mut flickers = Vec::new();
    for i in 0..ns {
        let classes = stages[i].classes(k);
        let dim = classes.len();
        let unit = |a: usize| SparseVec::basis(classes.start + a, field);
        // ι_i^l and Δ_n^l ι_i^l on each local class
        let iota: Vec<Vec<SparseVec>> = (0..dim)
            .map(|a| (i..ns).map(|l| induced(&stages[i], &stages[l], &unit(a))).collect())
            .collect();
        let dn: Vec<Vec<TensorVec>> = (0..dim)
            .map(|a| {
                (i..ns)
                    .map(|l| stages[l].delta(n, &iota[a][l - i]))
                    .collect()
            })
            .collect();
        let ambient: Vec<SparseVec> = (0..dim).map(|a| SparseVec::basis(a, field)).collect();
        let through = |v: &SparseVec, l: usize| {
            let mut out = SparseVec::new();
            for (a, c) in v {
                out.add_scaled(&iota[*a][l - i], c);
            }
            out
        };
        let hrows = |l: usize| stages[l].contraction.small.shape().total();
        let mut kernels: Vec<Vec<SparseVec>> = Vec::new();
        for j in i..ns {
            let truncated: Vec<Vec<TensorVec>> =
                dn.iter().map(|row| row[..=j - i].to_vec()).collect();
            let v = kernel_within(&ambient, &truncated);
            let img: Vec<SparseVec> = v.iter().map(|x| through(x, j)).collect();
            delta.insert((i, j), rank_of(field, &img, hrows(j)));
            classical.insert(
                (i, j),
                persistent_rank(f, field, k, values[i], values[j]),
            );
            kernels.push(v);
        }
        // flickering: leave the kernel at g, come back nonzero at l > g
        for g in i + 1..ns {
            let (w, w2) = (&kernels[g - 1 - i], &kernels[g - i]);
            if w2.len() == w.len() {
                continue;
            }
            for l in g + 1..ns {
                let only_l: Vec<Vec<TensorVec>> =
                    dn.iter().map(|row| vec![row[l - i].clone()]).collect();
                let s = kernel_within(w, &only_l);
                if s.is_empty() {
                    continue;
                }
                let mut both = w2.clone();
                both.extend(s.iter().cloned());
                let outside_w2 = rank_of(field, &both, dim) > rank_of(field, w2, dim);
                let alive = s.iter().any(|x| !through(x, l).is_zero());
                if outside_w2 && alive {
                    flickers.push(Flicker {
                        born: values[i],
                        gap: values[g],
                        resume: values[l],
                    });
                    break;
                }
            }
        }
    }

    let r = |i: isize, j: usize| -> i64 {
        if i < 0 || j >= ns {
            0
        } else {
            delta[&(i as usize, j)] as i64
        }
    };
    let mut intervals = Vec::new();
    let mut inconsistent = Vec::new();
    for i in 0..ns {
        for j in i..ns {
            let ii = i as isize;
            let mult = r(ii, j) - r(ii - 1, j) - r(ii, j + 1) + r(ii - 1, j + 1);
            if mult < 0 {
                inconsistent.push((values[i], values[j], mult));
            }
            let death = values.get(j + 1).copied().unwrap_or(f64::INFINITY);
            for _ in 0..mult.max(0) {
                intervals.push(Interval {
                    k,
                    birth: values[i],
                    death,
                });
            }
        }
    }
    let mut diagram = PersistenceDiagram::new(DiagramKind::Delta(n), intervals);
    let ranks = RankTable {
        values,
        delta,
        classical,
    };
    diagram.ranks = Some(ranks.clone());
    let warnings = compatibility(&stages, limit);
    Ok(DeltaBarcode {
        diagram,
        ranks,
        flickers,
        inconsistent,
        warnings,
    })
}
