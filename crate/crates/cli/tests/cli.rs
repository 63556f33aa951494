use std::path::{Path, PathBuf};
use std::process::Command;

use ainfty::exactlin::Field;
use ainfty::persistence::FilteredComplex;
use ainfty_cli::format::*;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Runs the binary; returns exit code, stdout and stderr.
fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ainfty"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn square_files(dir: &Path) -> (PathBuf, PathBuf) {
    let pts = dir.join("square.txt");
    std::fs::write(&pts, "0 0\n1 0\n1 1\n0 1\n").unwrap();
    let filt = dir.join("square.filt");
    ok(&["rips", path(&pts), "--max-dim", "2", "--out", path(&filt)]);
    let dgm = dir.join("square.dgm");
    ok(&["barcode", path(&filt), "--out", path(&dgm)]);
    (filt, dgm)
}

#[test]
fn unit_square_barcode_line() {
    let dir = tempfile::tempdir().unwrap();
    let (_, dgm) = square_files(dir.path());
    let text = std::fs::read_to_string(dgm).unwrap();
    assert!(text.lines().any(|l| l == "1 1.0 1.41421356237"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("1 ")).count(), 1);
}

#[test]
fn bottleneck_with_itself_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (_, dgm) = square_files(dir.path());
    assert_eq!(ok(&["bottleneck", path(&dgm), path(&dgm)]), "0\n");
}

#[test]
fn bottleneck_flags_unequal_infinite_bars() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dgm");
    let b = dir.path().join("b.dgm");
    std::fs::write(&a, "0 0.0 inf\n0 0.0 1.5\n").unwrap();
    std::fs::write(&b, "0 0.0 inf\n0 1.0 inf\n").unwrap();
    let (code, out, err) = run(&["bottleneck", path(&a), path(&b)]);
    assert_eq!(code, 0);
    assert_eq!(out, "inf\n");
    assert!(err.contains("infinite bars"));
    std::fs::write(&b, "0 0.0 inf\n0 0.0 1.0\n").unwrap();
    assert_eq!(ok(&["bottleneck", path(&a), path(&b)]), "0.5\n");
}

#[test]
fn transfer_on_exterior_algebra_is_complete() {
    let out = ok(&["transfer", path(&data("exterior.txt"))]);
    assert!(out.lines().any(|l| l == "# complete (gap q=3)"), "{out}");
    let m_lines: Vec<&str> = out.lines().filter(|l| l.starts_with("m ")).collect();
    assert!(!m_lines.is_empty());
    for l in m_lines {
        let lhs = l.split('=').next().unwrap();
        assert_eq!(lhs.split_whitespace().count(), 3, "{l}");
    }
}

#[test]
fn homology_of_hollow_triangle() {
    let out = ok(&["homology", path(&data("hollow_triangle.txt"))]);
    assert!(out.contains("# betti 0 1\n# betti 1 1\n"));
    let con = read_contraction(&out, Field::Rational).unwrap();
    con.check().unwrap();
    let f3 = ok(&["homology", "--field", "3", path(&data("hollow_triangle.txt"))]);
    assert!(f3.starts_with("# field F_3\n"));
}

#[test]
fn bpl_and_exit_codes_for_perturbations() {
    let dir = tempfile::tempdir().unwrap();
    let con = dir.path().join("con.txt");
    ok(&["homology", path(&data("hollow_triangle.txt")), "--out", path(&con)]);
    let pert = dir.path().join("pert.txt");
    // φδ(e12) = -e01 and φδ(e01) = 0
    std::fs::write(&pert, "pert e12 = 1*v0 - 1*v1\n").unwrap();
    let out = ok(&["bpl", path(&con), path(&pert)]);
    let p = read_contraction(&out, Field::Rational).unwrap();
    p.check().unwrap();
    assert_eq!(p.big.betti_numbers(), p.small.betti_numbers());

    // φδ(e01) = -e01 never vanishes
    std::fs::write(&pert, "pert e01 = 1*v0 - 1*v1\n").unwrap();
    let (code, _, err) = run(&["bpl", path(&con), path(&pert)]);
    assert_eq!(code, 2);
    assert!(err.contains("NilpotenceExceeded") && err.contains("e01"), "{err}");
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["homology", path(&data("not_complex.txt"))]);
    assert_eq!(code, 2);
    assert!(err.contains("NotAComplex") && err.contains(" c "), "{err}");
    let (code, _, err) = run(&["barcode", path(&data("bad_filtration.txt"))]);
    assert_eq!(code, 2);
    assert!(err.contains("FaceMissing"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "degree 0: a\nd a = 2*zz\n").unwrap();
    let (code, _, err) = run(&["homology", path(&bad)]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2") && err.contains("zz"), "{err}");
    std::fs::write(&bad, "degree 0: a\ndegree 1: a\n").unwrap();
    assert_eq!(run(&["homology", path(&bad)]).0, 1);

    let nonassoc = dir.path().join("nonassoc.txt");
    std::fs::write(&nonassoc, "degree 0: u v\nm u u = 1*v\nm v u = 1*u\n").unwrap();
    let (code, _, err) = run(&["transfer", path(&nonassoc)]);
    assert_eq!(code, 2);
    assert!(err.contains("NotADga"), "{err}");

    assert_eq!(run(&["homology", "missing-file.txt"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["homology", "--field", "4", path(&data("hollow_triangle.txt"))]).0, 1);
    assert_eq!(run(&["transfer", "--max-arity", "1", path(&data("exterior.txt"))]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn tensor_trick_on_an_edge() {
    let out = ok(&["tensor-trick", path(&data("interval_coalgebra.txt"))]);
    let (carrier, ops) = read_ainfty(&out, Field::Rational).unwrap();
    assert_eq!(carrier.shape().total(), 1);
    let OpTable::Coalgebra(ops) = ops else { panic!("coalgebra table expected") };
    assert_eq!(ops.len(), 1);
    assert!(ops.contains_key(&2));
}

#[test]
fn delta_barcode_on_torus() {
    let out = ok(&["delta-barcode", path(&data("torus.txt")), "--arity", "3"]);
    assert!(out.starts_with("# delta 3\n"));
    let d = read_diagram(&out).unwrap();
    let top: Vec<_> = d.intervals.iter().filter(|iv| iv.k == 2).collect();
    assert_eq!(top.len(), 1);
    assert_eq!((top[0].birth, top[0].death), (2.0, f64::INFINITY));
    let classical = ok(&["barcode", path(&data("torus.txt"))]);
    assert!(classical.lines().any(|l| l == "2 1.0 inf"));
}

/// Parsing an emitted file and emitting it again gives the same bytes,
/// and the parsed values agree.
#[test]
fn round_trip() {
    let q = Field::Rational;
    let dir = tempfile::tempdir().unwrap();
    let (filt, dgm) = square_files(dir.path());

    let text = std::fs::read_to_string(&filt).unwrap();
    let f = FilteredComplex::new(read_filtration_lines(&text).unwrap()).unwrap();
    assert_eq!(write_filtration(&f), text);
    let again = FilteredComplex::new(read_filtration_lines(&write_filtration(&f)).unwrap()).unwrap();
    assert_eq!(again, f);

    let text = std::fs::read_to_string(&dgm).unwrap();
    let d = read_diagram(&text).unwrap();
    assert_eq!(write_diagram(&d), text);
    assert_eq!(read_diagram(&write_diagram(&d)).unwrap(), d);

    let text = ok(&["delta-barcode", path(&data("torus.txt"))]);
    let d = read_diagram(&text).unwrap();
    assert!(!d.ranks.is_empty());
    assert_eq!(write_diagram(&d), text);

    let body = |s: &str| s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let text = ok(&["homology", path(&data("hollow_triangle.txt"))]);
    let c = read_contraction(&text, q).unwrap();
    assert_eq!(body(&write_contraction(&c)), body(&text));
    assert_eq!(read_contraction(&write_contraction(&c), q).unwrap(), c);

    let text = ok(&["transfer", path(&data("exterior.txt"))]);
    let t = read_ainfty(&text, q).unwrap();
    assert_eq!(read_ainfty(&text.replace("# complete", "#"), q).unwrap(), t);

    for (file, reader) in [
        ("hollow_triangle.txt", 0),
        ("exterior.txt", 1),
        ("interval_coalgebra.txt", 2),
    ] {
        let text = std::fs::read_to_string(data(file)).unwrap();
        let emitted = match reader {
            0 => write_complex(&read_complex(&text, q).unwrap()),
            1 => write_dga(&read_dga(&text, q).unwrap()),
            _ => write_coalgebra(&read_coalgebra(&text, q).unwrap()),
        };
        let reparsed = match reader {
            0 => write_complex(&read_complex(&emitted, q).unwrap()),
            1 => write_dga(&read_dga(&emitted, q).unwrap()),
            _ => write_coalgebra(&read_coalgebra(&emitted, q).unwrap()),
        };
        assert_eq!(reparsed, emitted, "{file}");
    }
}

#[test]
fn term_syntax() {
    let q = Field::Rational;
    let c = read_complex(
        "degree 0: a b\ndegree 1: e\nd e = 1/2*a - b + -3/4*a + (a, b)\n",
        q,
    );
    assert!(c.is_err(), "tuple in a vector expression");
    let c = read_complex("degree 0: a b\ndegree 1: e\nd e = 1/2*a - b + -3/4*a\n", q).unwrap();
    assert_eq!(write_complex(&c), "degree 0: a b\ndegree 1: e\nd e = -1/4*a + -1*b\n");
    let c = read_complex("degree 0: a\ndegree 1: e\nd e = 0\n", q).unwrap();
    assert!(c.differential().is_zero());
    let f2 = read_complex("degree 0: a\ndegree 1: e\nd e = 2*a\n", Field::prime(2).unwrap()).unwrap();
    assert!(f2.differential().is_zero());
    assert!(read_complex("degree 0: a(\n", q).is_err());
    assert!(read_complex("degree 0: a\ndegree 1: e\nd e = a a\n", q).is_err());
}

#[test]
fn number_formatting() {
    assert_eq!(fmt_value(1.0), "1.0");
    assert_eq!(fmt_value(2f64.sqrt()), "1.41421356237");
    assert_eq!(fmt_value(0.1 + 0.2), "0.3");
    assert_eq!(fmt_value(f64::INFINITY), "inf");
    assert_eq!(fmt_g(0.0), "0");
    assert_eq!(fmt_g(0.5), "0.5");
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    let mut s = String::new();
    for i in 0..12 {
        let t = i as f64 * 0.7;
        s.push_str(&format!("{} {}\n", t.cos() * (1.0 + 0.1 * i as f64), t.sin()));
    }
    std::fs::write(&pts, s).unwrap();
    for cmd in ["rips", "cech"] {
        let a = ok(&[cmd, path(&pts), "--max-eps", "1.5"]);
        assert_eq!(a, ok(&[cmd, path(&pts), "--max-eps", "1.5"]));
        let filt = dir.path().join(format!("{cmd}.filt"));
        std::fs::write(&filt, &a).unwrap();
        let b = ok(&["barcode", path(&filt)]);
        assert_eq!(b, ok(&["barcode", path(&filt)]));
    }
    let small = dir.path().join("small.filt");
    ok(&["rips", path(&pts), "--max-eps", "0.8", "--max-dim", "2", "--out", path(&small)]);
    let d = ok(&["delta-barcode", path(&small), "--max-dim", "1"]);
    assert_eq!(d, ok(&["delta-barcode", path(&small), "--max-dim", "1"]));
    let t = ok(&["transfer", path(&data("exterior.txt"))]);
    assert_eq!(t, ok(&["transfer", path(&data("exterior.txt"))]));
}
