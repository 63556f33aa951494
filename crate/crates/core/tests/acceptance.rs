//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use ainfty::complexes::{homology_contraction, verify_complex, Contraction};
use ainfty::dgalg::{
    cyclic_resolution, endomorphism_dga, simplicial_coalgebra, stasheff_defect, CoOp,
    DGCoalgebra,
};
use ainfty::exactlin::{Field, TensorVec};
use ainfty::perturbation::{
    bpl, check_contraction, identity_contraction, tensor_trick, Perturbation, PerturbationError,
};
use ainfty::persistence::{
    ainfty_stage, barcode, bottleneck, count_intervals, delta_barcode, persistent_rank, rips,
    DiagramKind, FilteredComplex, Interval, PersistenceDiagram,
};
use ainfty::transfer::{transfer_full, TransferOptions};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Identity suites on random complexes, with Betti numbers checked against
/// dense elimination.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(0xC1);
    let mut count = 0;
    for field in fields() {
        for t in 0..200 {
            let c = random_complex(&mut r, field, 5, 8);
            verify_complex(&c).map_err(|w| format!("{field} #{t}: {w}"))?;
            let con = homology_contraction(&c).map_err(|e| format!("{field} #{t}: {e}"))?;
            con.check().map_err(|w| format!("{field} #{t}: {w}"))?;
            for n in c.shape().degrees() {
                let betti = c.dim(n) - oracle_rank(field, &c.d(n)) - oracle_rank(field, &c.d(n + 1));
                ensure(con.small.dim(n) == betti, || format!("{field} #{t}: H_{n} dimension"))?;
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{count} complexes over F_2, F_3, Q, 100% pass, {:.1} s", elapsed.as_secs_f64()))
}

/// Transfer to arity 6 on random dg-algebras; every Stasheff defect zero.
fn criterion_2() -> Outcome {
    let mut r = rng(0xC2);
    let opts = TransferOptions {
        max_arity: 6,
        gap_search: false,
        domain: None,
        verify: false,
    };
    let mut nonzero_higher = 0;
    for t in 0..50 {
        let field = fields()[t % 3];
        let a = if t % 2 == 0 {
            random_cochain_dga(&mut r, field)
        } else {
            random_endo_dga(&mut r, field)
        };
        a.check().map_err(|w| format!("#{t}: input fails check_dga: {w}"))?;
        let res = transfer_full(&a, &opts).map_err(|e| format!("#{t}: {e}"))?;
        let s = res.structure();
        ensure(s.certified_arity == 6, || format!("#{t}: certified {}", s.certified_arity))?;
        for n in 1..=6 {
            let d = stasheff_defect(s, n).map_err(|e| format!("#{t}: {e}"))?;
            ensure(d.is_zero(), || format!("#{t}: St_{n} on {:?}", d.witness(&s.carrier)))?;
        }
        if (3..=6).any(|k| s.m(k).is_some_and(|m| !m.is_zero())) {
            nonzero_higher += 1;
        }
    }
    Ok(format!("50 dg-algebras, St_1..St_6 zero on every tuple ({nonzero_higher} with some m_k ≠ 0, k ≥ 3)"))
}

/// BPL on random perturbed contractions.
fn criterion_3() -> Outcome {
    let mut r = rng(0xC3);
    let (mut accepted, mut resampled, mut nonzero) = (0, 0, 0);
    while accepted < 50 {
        ensure(resampled < 5000, || "too many nilpotence rejections".into())?;
        let field = fields()[accepted % 3];
        let (con, delta) = random_perturbed(&mut r, field);
        let p = match Perturbation::new(delta, &con) {
            Ok(p) => p,
            Err(PerturbationError::NilpotenceExceeded { .. }) => {
                resampled += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let out = match bpl(&con, &p) {
            Ok(o) => o,
            Err(PerturbationError::NilpotenceExceeded { .. }) => {
                resampled += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let t = accepted;
        verify_complex(&out.contraction.big).map_err(|w| format!("#{t}: (∂+δ)² on {w}"))?;
        check_contraction(&out.contraction).map_err(|w| format!("#{t}: {w}"))?;
        ensure(
            out.contraction.big.betti_numbers() == con.big.betti_numbers()
                && out.contraction.small.betti_numbers() == con.small.betti_numbers(),
            || format!("#{t}: Betti numbers changed"),
        )?;
        if !p.delta.is_zero() {
            nonzero += 1;
        }
        let zero = ainfty::complexes::ChainMap::zero(
            field,
            con.big.shape().clone(),
            con.big.shape().clone(),
            -1,
        );
        let same = bpl(&con, &Perturbation::new(zero, &con).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(same.contraction == con && same.small_delta.is_zero(), || {
            format!("#{t}: δ = 0 changed the contraction")
        })?;
        accepted += 1;
    }
    Ok(format!(
        "50 instances ({nonzero} with δ ≠ 0, {resampled} resampled for nilpotence), δ = 0 exact"
    ))
}

/// Cyclic groups: m_k = 0 for 2 < k < p, m_p ≠ 0, St_{p+1} zero.
fn criterion_4() -> Outcome {
    let mut report = Vec::new();
    for p in [3u64, 5] {
        let start = Instant::now();
        let top = 2 * p as usize - 2;
        let w = 2 * p as i32 + 2;
        let a = endomorphism_dga(&cyclic_resolution(p, w as usize).map_err(|e| e.to_string())?, w)
            .map_err(|e| e.to_string())?;
        let opts = TransferOptions {
            max_arity: top,
            gap_search: false,
            domain: Some((-w, -1)),
            verify: false,
        };
        let res = transfer_full(&a, &opts).map_err(|e| format!("p = {p}: {e}"))?;
        let s = res.structure();
        for k in 3..p as usize {
            ensure(s.m(k).is_some_and(|m| m.is_zero()), || format!("p = {p}: m_{k} ≠ 0"))?;
        }
        let mp = s.m(p as usize).ok_or(format!("p = {p}: m_p missing"))?;
        let (tuple, _) = mp.iter().next().ok_or(format!("p = {p}: m_p = 0"))?;
        let labels: Vec<&str> = tuple.iter().map(|&i| s.carrier.basis().label(i)).collect();
        let d = stasheff_defect(s, p as usize + 1).map_err(|e| e.to_string())?;
        ensure(d.is_zero(), || format!("p = {p}: St_{} on {:?}", p + 1, d.witness(&s.carrier)))?;
        report.push(format!(
            "p = {p}: m_{p}({}) ≠ 0 in {:.1} s",
            labels.join(", "),
            start.elapsed().as_secs_f64()
        ));
    }
    Ok(report.join("; "))
}

/// Structures declared complete stay zero for two more arities.
fn criterion_5() -> Outcome {
    let mut r = rng(0xC5);
    let mut checked = Vec::new();
    let mut candidates: Vec<(String, ainfty::dgalg::DGAlgebra, Option<(i32, i32)>)> = vec![(
        "C_3".into(),
        endomorphism_dga(&cyclic_resolution(3, 6).map_err(|e| e.to_string())?, 6)
            .map_err(|e| e.to_string())?,
        Some((-6, -1)),
    )];
    for t in 0..60 {
        let field = fields()[t % 3];
        candidates.push((format!("cochains #{t}"), random_cochain_dga(&mut r, field), None));
    }
    for (name, a, domain) in candidates {
        if checked.len() == 10 {
            break;
        }
        let opts = TransferOptions {
            max_arity: 8,
            gap_search: true,
            domain,
            verify: true,
        };
        let res = transfer_full(&a, &opts).map_err(|e| format!("{name}: {e}"))?;
        let Some(q) = res.gap else { continue };
        let mut st = res.state.clone();
        let top = st.structure.certified_arity;
        st.extend_step().map_err(|e| format!("{name}: {e}"))?;
        st.extend_step().map_err(|e| format!("{name}: {e}"))?;
        for k in q..=top + 2 {
            ensure(st.structure.m(k).is_none_or(|m| m.is_zero()), || format!("{name}: m_{k} ≠ 0"))?;
            ensure(st.morphism.f(k).is_none_or(|f| f.is_zero()), || format!("{name}: f_{k} ≠ 0"))?;
        }
        checked.push(format!("{name} (q={q})"));
    }
    ensure(checked.len() == 10, || format!("only {} complete instances found", checked.len()))?;
    Ok(format!("10 complete structures stay zero two arities on: {}", checked.join(", ")))
}

/// Persistent rank equals interval counting.
fn criterion_6() -> Outcome {
    let mut r = rng(0xC6);
    let mut comparisons = 0;
    for t in 0..100 {
        let f = random_filtration(&mut r, 50);
        let vals = f.critical_values();
        for field in fields() {
            let diagrams: Vec<PersistenceDiagram> =
                (0..=f.max_dim()).map(|k| barcode(&f, field, k)).collect();
            for _ in 0..25 {
                let a = r.gen_range(0..vals.len());
                let b = r.gen_range(a..vals.len());
                for (k, d) in diagrams.iter().enumerate() {
                    let rank = persistent_rank(&f, field, k, vals[a], vals[b]);
                    let count = count_intervals(d, k, vals[a], vals[b]);
                    ensure(rank == count, || {
                        format!("#{t} {field} k={k} ({}, {}): rank {rank}, intervals {count}", vals[a], vals[b])
                    })?;
                    comparisons += 1;
                }
            }
        }
    }
    Ok(format!("100 filtrations, {comparisons} exact comparisons over F_2, F_3, Q"))
}

fn random_diagram(r: &mut rand_chacha::ChaCha8Rng) -> PersistenceDiagram {
    let n = r.gen_range(0..8);
    let mut iv: Vec<Interval> = (0..n)
        .map(|_| {
            let b: f64 = r.gen_range(0.0..5.0);
            Interval { k: 0, birth: b, death: b + r.gen_range(0.0..3.0) }
        })
        .collect();
    for _ in 0..r.gen_range(0..3) {
        iv.push(Interval { k: 0, birth: r.gen_range(0.0..2.0), death: f64::INFINITY });
    }
    PersistenceDiagram::new(DiagramKind::Classical, iv)
}

/// Bottleneck identity, symmetry, triangle inequality and a Rips stability instance.
fn criterion_7() -> Outcome {
    let mut r = rng(0xC7);
    let mut triples = 0;
    while triples < 100 {
        let (a, b, c) = (random_diagram(&mut r), random_diagram(&mut r), random_diagram(&mut r));
        ensure(bottleneck(&a, &a, 0).value == 0.0, || "d(D, D) ≠ 0".into())?;
        let (ab, bc, ac) = (bottleneck(&a, &b, 0), bottleneck(&b, &c, 0), bottleneck(&a, &c, 0));
        ensure(ab.value == bottleneck(&b, &a, 0).value, || "asymmetric".into())?;
        if ab.flagged || bc.flagged || ac.flagged {
            continue;
        }
        ensure(ac.value <= ab.value + bc.value + 1e-12, || {
            format!("triangle: {} > {} + {}", ac.value, ab.value, bc.value)
        })?;
        triples += 1;
    }
    let mut worst: f64 = 0.0;
    for (t, eps) in (0..10).flat_map(|t| [(t, 0.01), (t, 0.05)]) {
        let mut r = rng(0x57AB + t);
        let pts = random_points(&mut r, 15, 2);
        let moved: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| p.iter().map(|x| x + r.gen_range(-eps..=eps)).collect())
            .collect();
        let f1 = rips(&pts, f64::INFINITY, 2).map_err(|e| e.to_string())?;
        let f2 = rips(&moved, f64::INFINITY, 2).map_err(|e| e.to_string())?;
        for k in 0..=1 {
            let d = bottleneck(&barcode(&f1, Field::Rational, k), &barcode(&f2, Field::Rational, k), k);
            ensure(!d.flagged && d.value <= 2.0 * eps, || {
                format!("trial {t}, ε = {eps}, H_{k}: d_B = {} > 2ε", d.value)
            })?;
            worst = worst.max(d.value / eps);
        }
    }
    Ok(format!(
        "d_B(D, D) = 0, 100 triangle triples, 20 stability trials (max d_B/ε = {worst:.3} ≤ 2)"
    ))
}

fn stage_degenerate(f: &FilteredComplex, n: usize) -> Result<bool, String> {
    for t in f.critical_values() {
        let s = ainfty_stage(f, t, n).map_err(|e| e.to_string())?;
        if !s.structure.delta(n).is_some_and(|d| d.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Δ_n-barcode equals the classical one when Δ_n vanishes at every stage;
/// Δ_n-rank never exceeds the classical rank.
fn criterion_8() -> Outcome {
    let mut r = rng(0xC8);
    let mut filtrations: Vec<FilteredComplex> = (0..30).map(|_| random_filtration(&mut r, 18)).collect();
    for _ in 0..5 {
        let pts = random_points(&mut r, 6, 2);
        filtrations.push(rips(&pts, f64::INFINITY, 2).map_err(|e| e.to_string())?);
    }
    filtrations.push(torus_filtration());
    let (mut degenerate, mut pairs, mut strict) = (0, 0, 0);
    for (t, f) in filtrations.iter().enumerate() {
        for n in [3, 4] {
            let flat = stage_degenerate(f, n)?;
            for k in 0..=f.max_dim() {
                let res = delta_barcode(f, n, k, n).map_err(|e| format!("#{t}: {e}"))?;
                for (ij, &d) in &res.ranks.delta {
                    let c = res.ranks.classical[ij];
                    ensure(d <= c, || format!("#{t} n={n} k={k} {ij:?}: {d} > {c}"))?;
                    pairs += 1;
                    if d < c {
                        strict += 1;
                    }
                }
                if flat {
                    let classical = barcode(f, Field::Rational, k);
                    ensure(res.diagram.intervals == classical.intervals, || {
                        format!("#{t} n={n} k={k}: degenerate but diagrams differ")
                    })?;
                }
            }
            if flat {
                degenerate += 1;
            }
        }
    }
    Ok(format!(
        "{degenerate} degenerate (filtration, n) cases equal the classical barcode; \
         monotone on {pairs} stage pairs ({strict} strict)"
    ))
}

/// `(f ⊗ f) Δ g` term by term.
fn expected_delta2(c: &DGCoalgebra, con: &Contraction) -> CoOp {
    let mut op = CoOp::new(2);
    for x in 0..con.small.shape().total() {
        let mut out = TensorVec::new();
        for (&y, a) in con.g.column(x) {
            for (pair, b) in c.coproduct(y) {
                for (&u, cu) in con.f.column(pair[0]) {
                    for (&v, cv) in con.f.column(pair[1]) {
                        out.add_term(vec![u, v], &(&(a * b) * &(cu * cv)));
                    }
                }
            }
        }
        op.insert(x, out);
    }
    op
}

/// Tensor trick with φ = 0.
fn criterion_9() -> Outcome {
    let mut r = rng(0xC9);
    for t in 0..40 {
        let field = fields()[t % 3];
        let s = random_simplicial(&mut r, 6, 2, 14);
        let c = simplicial_coalgebra(field, &s).map_err(|e| e.to_string())?;
        let con = if t % 4 == 0 {
            identity_contraction(c.complex())
        } else {
            random_iso_contraction(&mut r, c.complex())
        };
        let st = tensor_trick(&c, &con, 6).map_err(|e| format!("#{t}: {e}"))?;
        ensure(st.delta(2) == Some(&expected_delta2(&c, &con)), || format!("#{t}: Δ_2 ≠ (f⊗f)Δg"))?;
        for i in 3..=6 {
            ensure(st.delta(i).is_some_and(|d| d.is_zero()), || format!("#{t}: Δ_{i} ≠ 0"))?;
        }
    }
    Ok("40 coalgebras with φ = 0: Δ_2 = (f⊗f)Δg, Δ_3..Δ_6 = 0 exactly".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("identity suites", criterion_1),
        ("Stasheff certification", criterion_2),
        ("BPL correctness", criterion_3),
        ("cyclic groups", criterion_4),
        ("gap criterion soundness", criterion_5),
        ("barcode/rank duality", criterion_6),
        ("bottleneck and stability", criterion_7),
        ("Δ_n degeneration and monotonicity", criterion_8),
        ("tensor trick with φ = 0", criterion_9),
    ];
    let results: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| scope.spawn(*f)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("panicked".into())))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), res)) in criteria.iter().zip(&results).enumerate() {
        match res {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria pass");
}
