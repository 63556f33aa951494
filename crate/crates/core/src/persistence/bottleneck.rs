use super::PersistenceDiagram;

/// Bottleneck distance; `flagged` is set when the diagrams carry different
/// numbers of infinite bars, in which case `value` is `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bottleneck {
    pub value: f64,
    pub flagged: bool,
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn to_diagonal(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// Kuhn's augmenting paths on the `n + m` by `n + m` graph of points and
/// diagonal copies, restricted to edges of cost `≤ t`.
fn perfect_matching(a: &[(f64, f64)], b: &[(f64, f64)], t: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    // left: a_0..a_{n-1}, then diagonal copies of b; right: b_0..b_{m-1}, then copies of a
    let adj: Vec<Vec<usize>> = (0..size)
        .map(|l| {
            let mut out = Vec::new();
            if l < n {
                for (r, &q) in b.iter().enumerate() {
                    if linf(a[l], q) <= t {
                        out.push(r);
                    }
                }
                if to_diagonal(a[l]) <= t {
                    out.push(m + l);
                }
            } else {
                let j = l - n;
                if to_diagonal(b[j]) <= t {
                    out.push(j);
                }
                out.extend(m..m + n);
            }
            out
        })
        .collect();
    let mut right: Vec<Option<usize>> = vec![None; size];
    fn augment(
        l: usize,
        adj: &[Vec<usize>],
        right: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if right[r].is_none_or(|o| augment(o, adj, right, seen)) {
                right[r] = Some(l);
                return true;
            }
        }
        false
    }
    (0..size).all(|l| {
        let mut seen = vec![false; size];
        augment(l, &adj, &mut right, &mut seen)
    })
}

/// Exact bottleneck distance between finite point sets, by searching the
/// sorted candidate costs for the least feasible threshold.
pub fn bottleneck_points(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut cands = vec![0.0];
    for &p in a {
        cands.push(to_diagonal(p));
        cands.extend(b.iter().map(|&q| linf(p, q)));
    }
    cands.extend(b.iter().map(|&q| to_diagonal(q)));
    cands.sort_by(|x, y| x.partial_cmp(y).expect("finite costs"));
    cands.dedup();
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(a, b, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo]
}

/// Bottleneck distance between the degree-`k` parts of two diagrams.
/// Infinite bars are matched among themselves by sorted birth.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram, k: usize) -> Bottleneck {
    let split = |d: &PersistenceDiagram| {
        let mut fin = Vec::new();
        let mut inf = Vec::new();
        for iv in d.intervals.iter().filter(|iv| iv.k == k) {
            if iv.death.is_finite() {
                fin.push((iv.birth, iv.death));
            } else {
                inf.push(iv.birth);
            }
        }
        inf.sort_by(|x, y| x.partial_cmp(y).unwrap());
        (fin, inf)
    };
    let (f1, i1) = split(d1);
    let (f2, i2) = split(d2);
    if i1.len() != i2.len() {
        return Bottleneck {
            value: f64::INFINITY,
            flagged: true,
        };
    }
    let ess = i1
        .iter()
        .zip(&i2)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Bottleneck {
        value: bottleneck_points(&f1, &f2).max(ess),
        flagged: false,
    }
}

/// Largest degree-wise bottleneck distance over all degrees present.
pub fn bottleneck_all(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Bottleneck {
    let degrees: std::collections::BTreeSet<usize> =
        d1.intervals.iter().chain(&d2.intervals).map(|iv| iv.k).collect();
    degrees
        .into_iter()
        .map(|k| bottleneck(d1, d2, k))
        .fold(Bottleneck { value: 0.0, flagged: false }, |acc, b| Bottleneck {
            value: acc.value.max(b.value),
            flagged: acc.flagged || b.flagged,
        })
}
