use std::collections::HashMap;

use super::PersistenceError;

/// A finite simplicial filtration. Simplices are kept sorted by
/// `(value, dimension, declaration order)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex {
    simplices: Vec<(Vec<usize>, f64)>,
    max_dim: usize,
}

impl FilteredComplex {
    /// Validates vertex lists, finiteness and the face condition, then sorts.
    pub fn new(simplices: Vec<(Vec<usize>, f64)>) -> Result<Self, PersistenceError> {
        let mut value: HashMap<&[usize], f64> = HashMap::new();
        for (s, v) in &simplices {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PersistenceError::BadSimplex(format!("{s:?}")));
            }
            if !v.is_finite() {
                return Err(PersistenceError::NonFinite(format!("{s:?}")));
            }
            if value.insert(s, *v).is_some() {
                return Err(PersistenceError::BadSimplex(format!("{s:?} declared twice")));
            }
        }
        for (s, v) in &simplices {
            if s.len() < 2 {
                continue;
            }
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                match value.get(face.as_slice()) {
                    None => {
                        return Err(PersistenceError::FaceMissing {
                            simplex: format!("{s:?}"),
                            face: format!("{face:?}"),
                        })
                    }
                    Some(fv) if fv > v => {
                        return Err(PersistenceError::FaceLater {
                            simplex: format!("{s:?}"),
                            face: format!("{face:?}"),
                        })
                    }
                    _ => {}
                }
            }
        }
        let max_dim = simplices.iter().map(|(s, _)| s.len() - 1).max().unwrap_or(0);
        let mut simplices = simplices;
        // stable: ties keep declaration order
        simplices.sort_by(|(a, va), (b, vb)| {
            va.partial_cmp(vb)
                .expect("finite")
                .then(a.len().cmp(&b.len()))
        });
        Ok(FilteredComplex { simplices, max_dim })
    }

    pub fn simplices(&self) -> &[(Vec<usize>, f64)] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn dim_of(&self, i: usize) -> usize {
        self.simplices[i].0.len() - 1
    }

    pub fn value_of(&self, i: usize) -> f64 {
        self.simplices[i].1
    }

    /// Distinct filtration values in increasing order.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for (_, v) in &self.simplices {
            if out.last() != Some(v) {
                out.push(*v);
            }
        }
        out
    }

    /// Number of simplices (a prefix of the sorted order) with value `≤ t`.
    pub fn prefix_len(&self, t: f64) -> usize {
        self.simplices.partition_point(|(_, v)| *v <= t)
    }

    /// Position of every simplex in the sorted order.
    pub fn index(&self) -> HashMap<Vec<usize>, usize> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect()
    }
}

fn ambient(points: &[Vec<f64>]) -> Result<usize, PersistenceError> {
    let first = points.first().ok_or(PersistenceError::EmptyPointSet)?;
    let d = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(PersistenceError::BadParameter(format!(
            "point {p:?} has dimension {}, expected {d}",
            p.len()
        )));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(PersistenceError::NonFinite("point coordinate".into()));
    }
    Ok(d)
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Grows simplices vertex by vertex; `value` gives the entry value of
/// `s ∪ {v}` from that of `s`.
fn expand(
    n: usize,
    max_dim: usize,
    max_eps: f64,
    mut value: impl FnMut(&[usize], f64, usize) -> f64,
) -> Vec<(Vec<usize>, f64)> {
    let mut layer: Vec<(Vec<usize>, f64)> = (0..n).map(|v| (vec![v], 0.0)).collect();
    let mut out = layer.clone();
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for (s, sv) in &layer {
            for v in s[s.len() - 1] + 1..n {
                let val = value(s, *sv, v);
                if val <= max_eps {
                    let mut t = s.clone();
                    t.push(v);
                    next.push((t, val));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Vietoris–Rips filtration: a simplex enters at its largest pairwise distance.
pub fn rips(
    points: &[Vec<f64>],
    max_eps: f64,
    max_dim: usize,
) -> Result<FilteredComplex, PersistenceError> {
    ambient(points)?;
    if max_eps.is_nan() || max_eps <= 0.0 {
        return Err(PersistenceError::BadParameter("maxEps must be positive".into()));
    }
    let n = points.len();
    let dist: Vec<Vec<f64>> = points
        .iter()
        .map(|p| points.iter().map(|q| distance(p, q)).collect())
        .collect();
    let simplices = expand(n, max_dim, max_eps, |s, sv, v| {
        s.iter().map(|&u| dist[u][v]).fold(sv, f64::max)
    });
    FilteredComplex::new(simplices)
}

/// Radius of the smallest ball containing one, two or three points.
pub fn enclosing_radius(pts: &[&[f64]]) -> f64 {
    match pts.len() {
        0 | 1 => 0.0,
        2 => distance(pts[0], pts[1]) / 2.0,
        3 => {
            let mut sq = [
                sqdist(pts[1], pts[2]),
                sqdist(pts[0], pts[2]),
                sqdist(pts[0], pts[1]),
            ];
            sq.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if sq[2] >= sq[0] + sq[1] {
                return sq[2].sqrt() / 2.0;
            }
            // circumradius abc / (4 area), area from the Gram determinant
            let u: Vec<f64> = pts[1].iter().zip(pts[0]).map(|(x, y)| x - y).collect();
            let w: Vec<f64> = pts[2].iter().zip(pts[0]).map(|(x, y)| x - y).collect();
            let uu: f64 = u.iter().map(|x| x * x).sum();
            let ww: f64 = w.iter().map(|x| x * x).sum();
            let uw: f64 = u.iter().zip(&w).map(|(x, y)| x * y).sum();
            let area2 = (uu * ww - uw * uw).max(0.0).sqrt();
            // never below half the longest side, even after rounding
            ((sq[0] * sq[1] * sq[2]).sqrt() / (2.0 * area2)).max(sq[2].sqrt() / 2.0)
        }
        _ => unreachable!("at most 2-simplices"),
    }
}

fn sqdist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Čech filtration in ambient dimension `≤ 3`, up to 2-simplices: a simplex
/// enters at the radius of the smallest ball enclosing its vertices.
pub fn cech(
    points: &[Vec<f64>],
    max_eps: f64,
    max_dim: usize,
) -> Result<FilteredComplex, PersistenceError> {
    let d = ambient(points)?;
    if d > 3 || max_dim > 2 {
        return Err(PersistenceError::UnsupportedDimension { ambient: d, max_dim });
    }
    if max_eps.is_nan() || max_eps <= 0.0 {
        return Err(PersistenceError::BadParameter("maxEps must be positive".into()));
    }
    let simplices = expand(points.len(), max_dim, max_eps, |s, _, v| {
        let mut pts: Vec<&[f64]> = s.iter().map(|&u| points[u].as_slice()).collect();
        pts.push(&points[v]);
        enclosing_radius(&pts)
    });
    FilteredComplex::new(simplices)
}
