//! Line-oriented text formats.
//!
//! ```text
//! # comment
//! degree 0: a b c
//! degree 1: e f
//! d e = -1*a + 1*b
//! m a b = 1*c
//! delta e = 1*(a,e) + 1*(e,b)
//! ```
//!
//! Contractions use `[big]`, `[small]` and `[maps]` sections with `f`, `g`
//! and `phi` lines; perturbations use `pert` lines. Filtrations are lines
//! `value: v0 v1 ..`, diagrams lines `k b d`.

use std::collections::{BTreeMap, HashMap};

use ainfty::complexes::{ChainComplex, ChainMap, Contraction, GradedBasis};
use ainfty::dgalg::{AInfinityStructure, CoOp, DGAlgebra, DGCoalgebra, MultiOp};
use ainfty::exactlin::{Field, Scalar, SparseVec, TensorVec};
use ainfty::persistence::{
    DiagramKind, FilteredComplex, Flicker, Interval, PersistenceDiagram, RankTable,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        msg: msg.into(),
    })
}

/// One term of a right-hand side: coefficient text and a label or tuple.
#[derive(Clone, Debug)]
struct Term {
    coef: String,
    negate: bool,
    labels: Vec<String>,
    tuple: bool,
}

#[derive(Clone, Debug)]
enum Record {
    Section(String),
    Degree(i32, Vec<String>),
    /// `keyword lhs.. = rhs`
    Rule {
        keyword: String,
        lhs: Vec<String>,
        rhs: Vec<Term>,
    },
}

fn valid_label(l: &str) -> bool {
    !l.is_empty()
        && !l.starts_with('-')
        && !l
            .chars()
            .any(|c| c.is_whitespace() || "*(),=+#:[]".contains(c))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

/// Removes whitespace inside parentheses so tuples stay one token.
fn squeeze_tuples(s: &str) -> String {
    let mut depth = 0;
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth > 0 && c.is_whitespace() {
            continue;
        }
        out.push(c);
    }
    out
}

fn parse_rhs(line: usize, rhs: &str) -> Result<Vec<Term>, FormatError> {
    let rhs = squeeze_tuples(rhs);
    let mut out = Vec::new();
    let mut negate = false;
    let mut expect_term = true;
    for tok in rhs.split_whitespace() {
        match tok {
            "+" | "-" if !expect_term => {
                negate = tok == "-";
                expect_term = true;
                continue;
            }
            _ => {}
        }
        if !expect_term {
            return err(line, format!("expected + or - before {tok}"));
        }
        let (coef, body, neg) = match tok.split_once('*') {
            Some((c, b)) => (c.to_string(), b, false),
            None => match tok.strip_prefix('-') {
                Some(b) => ("1".to_string(), b, true),
                None => ("1".to_string(), tok, false),
            },
        };
        let (labels, tuple) = match body.strip_prefix('(') {
            Some(inner) => {
                let Some(inner) = inner.strip_suffix(')') else {
                    return err(line, format!("unbalanced tuple {body}"));
                };
                (inner.split(',').map(str::to_string).collect::<Vec<_>>(), true)
            }
            None => (vec![body.to_string()], false),
        };
        if let Some(bad) = labels.iter().find(|l| !valid_label(l)) {
            return err(line, format!("bad label {bad:?}"));
        }
        out.push(Term {
            coef,
            negate: negate ^ neg,
            labels,
            tuple,
        });
        negate = false;
        expect_term = false;
    }
    if expect_term && !out.is_empty() {
        return err(line, "dangling sign");
    }
    Ok(out)
}

fn parse_records(text: &str) -> Result<Vec<(usize, Record)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            out.push((line, Record::Section(name.trim().to_string())));
            continue;
        }
        if let Some(rest) = s.strip_prefix("degree ") {
            let Some((n, labels)) = rest.split_once(':') else {
                return err(line, "expected `degree n: labels`");
            };
            let n: i32 = match n.trim().parse() {
                Ok(n) => n,
                Err(_) => return err(line, format!("bad degree {n:?}")),
            };
            let labels: Vec<String> = labels.split_whitespace().map(str::to_string).collect();
            if let Some(bad) = labels.iter().find(|l| !valid_label(l)) {
                return err(line, format!("bad label {bad:?}"));
            }
            out.push((line, Record::Degree(n, labels)));
            continue;
        }
        let Some((lhs, rhs)) = s.split_once('=') else {
            return err(line, format!("cannot parse {s:?}"));
        };
        let mut words = lhs.split_whitespace();
        let Some(keyword) = words.next() else {
            return err(line, "missing keyword");
        };
        let lhs: Vec<String> = words.map(str::to_string).collect();
        if lhs.is_empty() {
            return err(line, format!("`{keyword}` needs a left-hand side"));
        }
        out.push((
            line,
            Record::Rule {
                keyword: keyword.to_string(),
                lhs,
                rhs: parse_rhs(line, rhs)?,
            },
        ));
    }
    Ok(out)
}

/// Splits records at `[section]` headers; records before the first header
/// go under the empty name.
fn sections(records: Vec<(usize, Record)>) -> BTreeMap<String, Vec<(usize, Record)>> {
    let mut out: BTreeMap<String, Vec<(usize, Record)>> = BTreeMap::new();
    let mut current = String::new();
    for (line, r) in records {
        match r {
            Record::Section(name) => {
                out.entry(name.clone()).or_default();
                current = name;
            }
            other => out.entry(current.clone()).or_default().push((line, other)),
        }
    }
    out
}

fn basis_from(records: &[(usize, Record)]) -> Result<GradedBasis, FormatError> {
    let mut layers: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, r) in records {
        if let Record::Degree(n, labels) = r {
            if layers.contains_key(n) {
                return err(*line, format!("degree {n} declared twice"));
            }
            for l in labels {
                if let Some(prev) = seen.insert(l.clone(), *line) {
                    return err(*line, format!("label {l} already declared on line {prev}"));
                }
            }
            layers.insert(*n, labels.clone());
        }
    }
    let (Some(&lo), Some(&hi)) = (layers.keys().next(), layers.keys().next_back()) else {
        return err(0, "no `degree` lines");
    };
    let labels = (lo..=hi)
        .map(|n| layers.remove(&n).unwrap_or_default())
        .collect();
    GradedBasis::new(lo, labels).map_err(structural)
}

fn lookup(basis: &GradedBasis, line: usize, label: &str) -> Result<usize, FormatError> {
    basis
        .find(label)
        .map_or_else(|| err(line, format!("unknown label {label}")), Ok)
}

fn scalar(field: Field, line: usize, t: &Term) -> Result<Scalar, FormatError> {
    let c = field.parse(&t.coef).map_err(|e| FormatError {
        line,
        msg: e.to_string(),
    })?;
    Ok(if t.negate { -c } else { c })
}

/// A vector right-hand side; a lone `0` (when no label is called `0`) is zero.
fn vector(
    field: Field,
    basis: &GradedBasis,
    line: usize,
    rhs: &[Term],
) -> Result<SparseVec, FormatError> {
    let mut v = SparseVec::new();
    if rhs.len() == 1 && rhs[0].labels == ["0"] && rhs[0].coef == "1" && basis.find("0").is_none()
    {
        return Ok(v);
    }
    for t in rhs {
        if t.tuple {
            return err(line, "tuple in a vector expression");
        }
        v.add_term(lookup(basis, line, &t.labels[0])?, &scalar(field, line, t)?);
    }
    Ok(v)
}

fn tensor(
    field: Field,
    basis: &GradedBasis,
    line: usize,
    rhs: &[Term],
) -> Result<TensorVec, FormatError> {
    let mut v = TensorVec::new();
    if rhs.len() == 1 && rhs[0].labels == ["0"] && !rhs[0].tuple {
        return Ok(v);
    }
    for t in rhs {
        if !t.tuple {
            return err(line, "expected a tuple (l1,l2,..)");
        }
        let key = t
            .labels
            .iter()
            .map(|l| lookup(basis, line, l))
            .collect::<Result<Vec<_>, _>>()?;
        v.add_term(key, &scalar(field, line, t)?);
    }
    Ok(v)
}

fn rules<'a>(
    records: &'a [(usize, Record)],
    keyword: &'a str,
) -> impl Iterator<Item = (usize, &'a [String], &'a [Term])> + 'a {
    records.iter().filter_map(move |(line, r)| match r {
        Record::Rule { keyword: k, lhs, rhs } if k == keyword => {
            Some((*line, lhs.as_slice(), rhs.as_slice()))
        }
        _ => None,
    })
}

fn check_keywords(records: &[(usize, Record)], allowed: &[&str]) -> Result<(), FormatError> {
    for (line, r) in records {
        if let Record::Rule { keyword, .. } = r {
            if !allowed.contains(&keyword.as_str()) {
                return err(*line, format!("unexpected keyword `{keyword}`"));
            }
        }
    }
    Ok(())
}

fn single(line: usize, lhs: &[String]) -> Result<&str, FormatError> {
    match lhs {
        [l] => Ok(l),
        _ => err(line, "expected exactly one label on the left"),
    }
}

/// Columns of a map from `source` to `target` given by `keyword` lines.
fn map_columns(
    field: Field,
    records: &[(usize, Record)],
    keyword: &str,
    source: &GradedBasis,
    target: &GradedBasis,
) -> Result<Vec<SparseVec>, FormatError> {
    let mut cols = vec![SparseVec::new(); source.len()];
    let mut set = vec![false; source.len()];
    for (line, lhs, rhs) in rules(records, keyword) {
        let i = lookup(source, line, single(line, lhs)?)?;
        if set[i] {
            return err(line, format!("`{keyword} {}` given twice", lhs[0]));
        }
        set[i] = true;
        cols[i] = vector(field, target, line, rhs)?;
    }
    Ok(cols)
}

fn complex_from(field: Field, records: &[(usize, Record)]) -> Result<ChainComplex, FormatError> {
    let basis = basis_from(records)?;
    let cols = map_columns(field, records, "d", &basis, &basis)?;
    let shape = basis.shape().clone();
    let d = ChainMap::from_columns(field, shape.clone(), shape, -1, cols)
        .map_err(structural)?;
    ChainComplex::new(field, basis, d).map_err(structural)
}

fn structural(e: impl std::fmt::Display) -> FormatError {
    FormatError { line: 0, msg: e.to_string() }
}

pub fn read_complex(text: &str, field: Field) -> Result<ChainComplex, FormatError> {
    let records = parse_records(text)?;
    check_keywords(&records, &["d"])?;
    complex_from(field, &records)
}

pub fn read_dga(text: &str, field: Field) -> Result<DGAlgebra, FormatError> {
    let records = parse_records(text)?;
    check_keywords(&records, &["d", "m"])?;
    let c = complex_from(field, &records)?;
    let mut products = BTreeMap::new();
    for (line, lhs, rhs) in rules(&records, "m") {
        let [a, b] = lhs else {
            return err(line, "`m` takes two labels");
        };
        let key = (lookup(c.basis(), line, a)?, lookup(c.basis(), line, b)?);
        if products.contains_key(&key) {
            return err(line, format!("product {a} {b} given twice"));
        }
        products.insert(key, vector(field, c.basis(), line, rhs)?);
    }
    DGAlgebra::new(c, products).map_err(structural)
}

pub fn read_coalgebra(text: &str, field: Field) -> Result<DGCoalgebra, FormatError> {
    let records = parse_records(text)?;
    check_keywords(&records, &["d", "delta"])?;
    let c = complex_from(field, &records)?;
    let mut coproducts = vec![TensorVec::new(); c.shape().total()];
    for (line, lhs, rhs) in rules(&records, "delta") {
        let i = lookup(c.basis(), line, single(line, lhs)?)?;
        let v = tensor(field, c.basis(), line, rhs)?;
        if v.keys().any(|k| k.len() != 2) {
            return err(line, "coproduct terms must be pairs");
        }
        coproducts[i] = v;
    }
    DGCoalgebra::new(c, coproducts).map_err(structural)
}

pub fn read_contraction(text: &str, field: Field) -> Result<Contraction, FormatError> {
    let mut secs = sections(parse_records(text)?);
    let mut take = |name: &str| {
        secs.remove(name)
            .ok_or_else(|| FormatError { line: 0, msg: format!("missing [{name}] section") })
    };
    let big_r = take("big")?;
    let small_r = take("small")?;
    let maps = take("maps")?;
    check_keywords(&big_r, &["d"])?;
    check_keywords(&small_r, &["d"])?;
    check_keywords(&maps, &["f", "g", "phi"])?;
    let big = complex_from(field, &big_r)?;
    let small = complex_from(field, &small_r)?;
    let (bs, ss) = (big.shape().clone(), small.shape().clone());
    let mk = |cols, src: &ainfty::complexes::Shape, tgt: &ainfty::complexes::Shape, shift| {
        ChainMap::from_columns(field, src.clone(), tgt.clone(), shift, cols).map_err(structural)
    };
    let f = mk(map_columns(field, &maps, "f", big.basis(), small.basis())?, &bs, &ss, 0)?;
    let g = mk(map_columns(field, &maps, "g", small.basis(), big.basis())?, &ss, &bs, 0)?;
    let phi = mk(map_columns(field, &maps, "phi", big.basis(), big.basis())?, &bs, &bs, 1)?;
    Contraction::new(big, small, f, g, phi).map_err(structural)
}

/// `pert` lines: a degree `-1` map on the big complex of `host`.
pub fn read_perturbation(text: &str, field: Field, host: &Contraction) -> Result<ChainMap, FormatError> {
    let records = parse_records(text)?;
    check_keywords(&records, &["pert"])?;
    let b = host.big.basis();
    let cols = map_columns(field, &records, "pert", b, b)?;
    let s = b.shape().clone();
    ChainMap::from_columns(field, s.clone(), s, -1, cols).map_err(structural)
}

/// Operations of an A∞ structure together with its carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpTable {
    Algebra(BTreeMap<usize, MultiOp>),
    Coalgebra(BTreeMap<usize, CoOp>),
}

pub fn read_ainfty(text: &str, field: Field) -> Result<(ChainComplex, OpTable), FormatError> {
    let records = parse_records(text)?;
    check_keywords(&records, &["d", "m", "delta"])?;
    let c = complex_from(field, &records)?;
    let has_m = rules(&records, "m").next().is_some();
    if has_m && rules(&records, "delta").next().is_some() {
        return err(0, "mixes `m` and `delta` lines");
    }
    if has_m {
        let mut ops: BTreeMap<usize, MultiOp> = BTreeMap::new();
        for (line, lhs, rhs) in rules(&records, "m") {
            let t = lhs
                .iter()
                .map(|l| lookup(c.basis(), line, l))
                .collect::<Result<Vec<_>, _>>()?;
            let n = t.len();
            ops.entry(n)
                .or_insert_with(|| MultiOp::new(n))
                .insert(t, vector(field, c.basis(), line, rhs)?);
        }
        Ok((c, OpTable::Algebra(ops)))
    } else {
        let mut ops: BTreeMap<usize, CoOp> = BTreeMap::new();
        for (line, lhs, rhs) in rules(&records, "delta") {
            let i = lookup(c.basis(), line, single(line, lhs)?)?;
            let v = tensor(field, c.basis(), line, rhs)?;
            let Some(n) = v.keys().next().map(|k| k.len()) else { continue };
            if v.keys().any(|k| k.len() != n) {
                return err(line, "mixed arities on one line");
            }
            ops.entry(n).or_insert_with(|| CoOp::new(n)).insert(i, v);
        }
        Ok((c, OpTable::Coalgebra(ops)))
    }
}

fn terms(basis: &GradedBasis, v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(&i, c)| format!("{c}*{}", basis.label(i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn tensor_terms(basis: &GradedBasis, v: &TensorVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(k, c)| {
            let inner: Vec<&str> = k.iter().map(|&i| basis.label(i)).collect();
            format!("{c}*({})", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn write_complex(c: &ChainComplex) -> String {
    let b = c.basis();
    let mut out = String::new();
    for n in c.shape().degrees() {
        let labels = b.labels_in(n);
        if labels.is_empty() {
            out.push_str(&format!("degree {n}:\n"));
        } else {
            out.push_str(&format!("degree {n}: {}\n", labels.join(" ")));
        }
    }
    for i in 0..c.shape().total() {
        let col = c.differential().column(i);
        if !col.is_zero() {
            out.push_str(&format!("d {} = {}\n", b.label(i), terms(b, col)));
        }
    }
    out
}

pub fn write_dga(a: &DGAlgebra) -> String {
    let b = a.complex().basis();
    let mut out = write_complex(a.complex());
    for (&(x, y), v) in a.products() {
        if !v.is_zero() {
            out.push_str(&format!("m {} {} = {}\n", b.label(x), b.label(y), terms(b, v)));
        }
    }
    out
}

pub fn write_coalgebra(c: &DGCoalgebra) -> String {
    let b = c.complex().basis();
    let mut out = write_complex(c.complex());
    for (i, v) in c.coproducts().iter().enumerate() {
        if !v.is_zero() {
            out.push_str(&format!("delta {} = {}\n", b.label(i), tensor_terms(b, v)));
        }
    }
    out
}

fn write_map(out: &mut String, keyword: &str, m: &ChainMap, src: &GradedBasis, tgt: &GradedBasis) {
    for i in 0..src.len() {
        let col = m.column(i);
        if !col.is_zero() {
            out.push_str(&format!("{keyword} {} = {}\n", src.label(i), terms(tgt, col)));
        }
    }
}

pub fn write_contraction(c: &Contraction) -> String {
    let (bb, sb) = (c.big.basis(), c.small.basis());
    let mut out = String::from("[big]\n");
    out.push_str(&write_complex(&c.big));
    out.push_str("\n[small]\n");
    out.push_str(&write_complex(&c.small));
    out.push_str("\n[maps]\n");
    write_map(&mut out, "f", &c.f, bb, sb);
    write_map(&mut out, "g", &c.g, sb, bb);
    write_map(&mut out, "phi", &c.phi, bb, bb);
    out
}

pub fn write_perturbation(delta: &ChainMap, basis: &GradedBasis) -> String {
    let mut out = String::new();
    write_map(&mut out, "pert", delta, basis, basis);
    out
}

/// Carrier and operations `m_n` / `Δ_n` for `2 ≤ n ≤ top`.
pub fn write_ainfty(s: &AInfinityStructure, top: usize) -> String {
    let b = s.carrier.basis();
    let mut out = write_complex(&s.carrier);
    for n in 2..=top {
        if let Some(m) = s.m(n) {
            for (t, v) in m.iter() {
                let lhs: Vec<&str> = t.iter().map(|&i| b.label(i)).collect();
                out.push_str(&format!("m {} = {}\n", lhs.join(" "), terms(b, v)));
            }
        }
        if let Some(d) = s.delta(n) {
            for (&i, v) in d.iter() {
                if !v.is_zero() {
                    out.push_str(&format!("delta {} = {}\n", b.label(i), tensor_terms(b, v)));
                }
            }
        }
    }
    out
}

/// 12 significant digits; integral values keep a trailing `.0`.
pub fn fmt_value(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float");
    let s = format!("{rounded}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

/// 12 significant digits, `%g` style: no trailing `.0`.
pub fn fmt_g(x: f64) -> String {
    let s = fmt_value(x);
    s.strip_suffix(".0").map_or(s.clone(), str::to_string)
}

fn parse_f64(line: usize, s: &str) -> Result<f64, FormatError> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        _ => match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => err(line, format!("bad number {s:?}")),
        },
    }
}

pub fn read_points(text: &str) -> Result<Vec<Vec<f64>>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        let p = s
            .split_whitespace()
            .map(|w| match parse_f64(i + 1, w)? {
                x if x.is_finite() => Ok(x),
                _ => err(i + 1, "infinite coordinate"),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(p);
    }
    Ok(out)
}

/// Filtration lines `value: v0 v1 ..`. Parsing does not validate faces;
/// [`FilteredComplex::new`] does.
pub fn read_filtration_lines(text: &str) -> Result<Vec<(Vec<usize>, f64)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        let Some((v, verts)) = s.split_once(':') else {
            return err(line, "expected `value: v0 v1 ..`");
        };
        let v = parse_f64(line, v.trim())?;
        if !v.is_finite() {
            return err(line, "infinite filtration value");
        }
        let verts = verts
            .split_whitespace()
            .map(|w| w.parse::<usize>().or_else(|_| err(line, format!("bad vertex {w:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((verts, v));
    }
    Ok(out)
}

pub fn write_filtration(f: &FilteredComplex) -> String {
    let mut out = String::new();
    for (s, v) in f.simplices() {
        let verts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{}: {}\n", fmt_value(*v), verts.join(" ")));
    }
    out
}

/// Everything a diagram file carries.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramFile {
    pub kind: DiagramKind,
    pub intervals: Vec<Interval>,
    pub zero_length: usize,
    /// Δ_n kind: rank tables per degree.
    pub ranks: BTreeMap<usize, RankTable>,
    pub flickers: Vec<(usize, Flicker)>,
    /// `(k, birth, death, count)` with a negative inclusion–exclusion count.
    pub inconsistent: Vec<(usize, f64, f64, i64)>,
}

impl DiagramFile {
    pub fn classical(d: PersistenceDiagram) -> Self {
        DiagramFile {
            kind: d.kind,
            intervals: d.intervals,
            zero_length: d.zero_length,
            ranks: BTreeMap::new(),
            flickers: Vec::new(),
            inconsistent: Vec::new(),
        }
    }

    pub fn diagram(&self) -> PersistenceDiagram {
        let mut d = PersistenceDiagram::new(self.kind, self.intervals.clone());
        d.zero_length = self.zero_length;
        d
    }
}

pub fn write_diagram(d: &DiagramFile) -> String {
    let mut out = String::new();
    if let DiagramKind::Delta(n) = d.kind {
        out.push_str(&format!("# delta {n}\n"));
    }
    out.push_str(&format!("# zero-length {}\n", d.zero_length));
    for iv in &d.intervals {
        out.push_str(&format!("{} {} {}\n", iv.k, fmt_value(iv.birth), fmt_value(iv.death)));
    }
    for (k, t) in &d.ranks {
        for (&(i, j), r) in &t.delta {
            out.push_str(&format!(
                "rank {k} {} {} {r} {}\n",
                fmt_value(t.values[i]),
                fmt_value(t.values[j]),
                t.classical[&(i, j)]
            ));
        }
    }
    for (k, f) in &d.flickers {
        out.push_str(&format!(
            "flicker {k} {} {} {}\n",
            fmt_value(f.born),
            fmt_value(f.gap),
            fmt_value(f.resume)
        ));
    }
    for (k, a, b, c) in &d.inconsistent {
        out.push_str(&format!("inconsistent {k} {} {} {c}\n", fmt_value(*a), fmt_value(*b)));
    }
    out
}

pub fn read_diagram(text: &str) -> Result<DiagramFile, FormatError> {
    let mut kind = DiagramKind::Classical;
    let mut zero_length = 0;
    let mut intervals = Vec::new();
    let mut raw_ranks: BTreeMap<usize, Vec<(f64, f64, usize, usize)>> = BTreeMap::new();
    let mut flickers = Vec::new();
    let mut inconsistent = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if let Some(h) = t.strip_prefix('#') {
            let w: Vec<&str> = h.split_whitespace().collect();
            match w.as_slice() {
                ["delta", n] => {
                    kind = DiagramKind::Delta(n.parse().or_else(|_| err(line, "bad arity"))?)
                }
                ["zero-length", n] => {
                    zero_length = n.parse().or_else(|_| err(line, "bad count"))?
                }
                _ => {}
            }
            continue;
        }
        let w: Vec<&str> = strip_comment(t).split_whitespace().collect();
        let int = |s: &str| s.parse::<usize>().or_else(|_| err(line, format!("bad integer {s:?}")));
        match w.as_slice() {
            [] => {}
            ["rank", k, a, b, r, c] => raw_ranks.entry(int(k)?).or_default().push((
                parse_f64(line, a)?,
                parse_f64(line, b)?,
                int(r)?,
                int(c)?,
            )),
            ["flicker", k, a, b, c] => flickers.push((
                int(k)?,
                Flicker {
                    born: parse_f64(line, a)?,
                    gap: parse_f64(line, b)?,
                    resume: parse_f64(line, c)?,
                },
            )),
            ["inconsistent", k, a, b, c] => inconsistent.push((
                int(k)?,
                parse_f64(line, a)?,
                parse_f64(line, b)?,
                c.parse::<i64>().or_else(|_| err(line, format!("bad count {c:?}")))?,
            )),
            [k, b, d] => {
                let (birth, death) = (parse_f64(line, b)?, parse_f64(line, d)?);
                if !birth.is_finite() || birth > death {
                    return err(line, "need finite birth ≤ death");
                }
                intervals.push(Interval { k: int(k)?, birth, death });
            }
            _ => return err(line, format!("cannot parse {t:?}")),
        }
    }
    let mut ranks = BTreeMap::new();
    for (k, rows) in raw_ranks {
        let mut values: Vec<f64> = rows.iter().flat_map(|r| [r.0, r.1]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        let pos = |x: f64| values.iter().position(|&v| v == x).unwrap();
        let mut table = RankTable {
            values: values.clone(),
            delta: BTreeMap::new(),
            classical: BTreeMap::new(),
        };
        for (a, b, r, c) in rows {
            table.delta.insert((pos(a), pos(b)), r);
            table.classical.insert((pos(a), pos(b)), c);
        }
        ranks.insert(k, table);
    }
    let d = PersistenceDiagram::new(kind, intervals);
    Ok(DiagramFile {
        kind,
        intervals: d.intervals,
        zero_length,
        ranks,
        flickers,
        inconsistent,
    })
}
