//! `ainfty`: batch front end for homology, transfer, perturbation and
//! persistence computations.
//!
//! Exit status 0 on success, 1 on a usage or parse error, 2 when an input or
//! output violates a mathematical invariant; the message names a witness.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ainfty::complexes::{homology_contraction, ChainComplex};
use ainfty::exactlin::Field;
use ainfty::perturbation::{bpl, check_contraction, tensor_trick, Perturbation, PerturbationError};
use ainfty::persistence::{
    barcode, bottleneck, bottleneck_all, cech, delta_barcode, rips, DiagramKind, FilteredComplex,
    PersistenceDiagram, PersistenceError,
};
use ainfty::transfer::{transfer_full, TransferError, TransferOptions};

use ainfty_cli::format::*;

#[derive(Parser, Debug)]
#[command(name = "ainfty", version, about = "A∞ transfer, perturbation and persistence")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Coefficient field: a prime p, or `rational`.
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Betti numbers and a contraction onto homology.
    Homology { complex: PathBuf },
    /// Transferred A∞ operations on the homology of a dg-algebra.
    Transfer {
        algebra: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_arity: usize,
        /// Degree window `lo:hi` of allowed inputs.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
    },
    /// Perturbed contraction from the basic perturbation lemma.
    Bpl {
        contraction: PathBuf,
        perturbation: PathBuf,
    },
    /// Higher coproducts transferred through a contraction (default: onto homology).
    TensorTrick {
        coalgebra: PathBuf,
        contraction: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Vietoris–Rips filtration of a point cloud.
    Rips {
        points: PathBuf,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_eps: f64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Čech filtration of a point cloud.
    Cech {
        points: PathBuf,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_eps: f64,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Persistence diagram of a filtered complex.
    Barcode {
        filtration: PathBuf,
        /// Highest homological degree (default: top simplex dimension).
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Bottleneck distance between two diagrams.
    Bottleneck {
        first: PathBuf,
        second: PathBuf,
        /// Restrict to one homological degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Δ_n-persistence diagram and rank table (over Q).
    DeltaBarcode {
        filtration: PathBuf,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// Arity through which stage coalgebras are built (default: `--arity`).
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invariant(_) => 2,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(format!("parse error: {e}"))
    }
}

impl From<TransferError> for Failure {
    fn from(e: TransferError) -> Self {
        let name = match &e {
            TransferError::NotADga(_) => "NotADga",
            TransferError::ContractionViolation { .. } => "ContractionViolation",
            TransferError::StasheffFailure { .. } => "StasheffFailure",
            TransferError::DomainNotClosed { .. } => "DomainNotClosed",
            _ => "TransferError",
        };
        Failure::Invariant(format!("{name}: {e}"))
    }
}

impl From<PerturbationError> for Failure {
    fn from(e: PerturbationError) -> Self {
        let name = match &e {
            PerturbationError::Complex(_) | PerturbationError::ArityTooSmall => {
                return Failure::Usage(e.to_string())
            }
            PerturbationError::BadContraction(_) => "BadContraction",
            PerturbationError::NotADifferential(_) => "NotADifferential",
            PerturbationError::NilpotenceExceeded { .. } => "NilpotenceExceeded",
            PerturbationError::NotADgc(_) => "NotADgc",
            PerturbationError::StasheffFailure { .. } => "StasheffFailure",
            PerturbationError::Dg(_) => "DgError",
        };
        Failure::Invariant(format!("{name}: {e}"))
    }
}

impl From<PersistenceError> for Failure {
    fn from(e: PersistenceError) -> Self {
        match e {
            PersistenceError::FaceMissing { .. } => Failure::Invariant(format!("FaceMissing: {e}")),
            PersistenceError::FaceLater { .. } => Failure::Invariant(format!("FaceLater: {e}")),
            PersistenceError::Perturbation(p) => p.into(),
            PersistenceError::Complex(_) | PersistenceError::Dg(_) => {
                Failure::Invariant(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_field(s: &str) -> Result<Field, Failure> {
    match s {
        "rational" | "Q" | "q" => Ok(Field::Rational),
        _ => {
            let p: u64 = s
                .parse()
                .map_err(|_| Failure::Usage(format!("bad field {s:?}: use a prime or `rational`")))?;
            Field::prime(p).map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify(c: &ChainComplex, what: &str) -> Result<(), Failure> {
    c.verify()
        .map_err(|w| Failure::Invariant(format!("NotAComplex ({what}): {w}")))
}

fn filtration(path: &Path) -> Result<FilteredComplex, Failure> {
    Ok(FilteredComplex::new(read_filtration_lines(&read(path)?)?)?)
}

fn points(path: &Path) -> Result<Vec<Vec<f64>>, Failure> {
    Ok(read_points(&read(path)?)?)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let field = parse_field(&cli.field)?;
    let say = |msg: &str| {
        if cli.verbose {
            eprintln!("{msg}");
        }
    };
    match &cli.cmd {
        Cmd::Homology { complex } => {
            let c = read_complex(&read(complex)?, field)?;
            verify(&c, "input")?;
            let con = homology_contraction(&c).map_err(|e| Failure::Invariant(e.to_string()))?;
            check_contraction(&con)
                .map_err(|w| Failure::Invariant(format!("BadContraction: {w}")))?;
            say("contraction identities verified");
            let mut out = format!("# field {field}\n");
            for (n, b) in c.betti_numbers() {
                out.push_str(&format!("# betti {n} {b}\n"));
            }
            out.push_str(&write_contraction(&con));
            Ok(out)
        }
        Cmd::Transfer {
            algebra,
            max_arity,
            domain,
        } => {
            if *max_arity < 2 {
                return Err(Failure::Usage("--max-arity must be at least 2".into()));
            }
            let domain = match domain {
                None => None,
                Some(s) => {
                    let bad = || Failure::Usage(format!("bad domain {s:?}: expected lo:hi"));
                    let (a, b) = s.split_once(':').ok_or_else(bad)?;
                    Some((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
                }
            };
            let a = read_dga(&read(algebra)?, field)?;
            verify(a.complex(), "input")?;
            a.check()
                .map_err(|w| Failure::Invariant(format!("NotADga: {w}")))?;
            let opts = TransferOptions {
                max_arity: *max_arity,
                domain,
                ..TransferOptions::default()
            };
            let res = transfer_full(&a, &opts)?;
            let s = res.structure();
            say(&format!("Stasheff identities verified through arity {}", s.certified_arity + 1));
            let mut out = format!("# field {field}\n");
            match res.gap {
                Some(q) => out.push_str(&format!("# complete (gap q={q})\n")),
                None => out.push_str(&format!(
                    "# incomplete (certified through arity {})\n",
                    s.certified_arity
                )),
            }
            out.push_str(&write_ainfty(s, s.certified_arity));
            Ok(out)
        }
        Cmd::Bpl {
            contraction,
            perturbation,
        } => {
            let con = read_contraction(&read(contraction)?, field)?;
            verify(&con.big, "big")?;
            verify(&con.small, "small")?;
            check_contraction(&con)
                .map_err(|w| Failure::Invariant(format!("BadContraction: {w}")))?;
            let delta = read_perturbation(&read(perturbation)?, field, &con)?;
            let p = Perturbation::new(delta, &con)?;
            let out = bpl(&con, &p)?;
            check_contraction(&out.contraction)
                .map_err(|w| Failure::Invariant(format!("BadContraction (output): {w}")))?;
            say("perturbed contraction identities verified");
            Ok(format!("# field {field}\n{}", write_contraction(&out.contraction)))
        }
        Cmd::TensorTrick {
            coalgebra,
            contraction,
            max_arity,
        } => {
            let c = read_coalgebra(&read(coalgebra)?, field)?;
            verify(c.complex(), "input")?;
            let con = match contraction {
                Some(p) => {
                    let con = read_contraction(&read(p)?, field)?;
                    verify(&con.big, "big")?;
                    verify(&con.small, "small")?;
                    con
                }
                None => homology_contraction(c.complex())
                    .map_err(|e| Failure::Invariant(e.to_string()))?,
            };
            let s = tensor_trick(&c, &con, *max_arity)?;
            say("co-Stasheff identities verified");
            Ok(format!("# field {field}\n{}", write_ainfty(&s, *max_arity)))
        }
        Cmd::Rips {
            points: p,
            max_eps,
            max_dim,
        } => Ok(write_filtration(&rips(&points(p)?, *max_eps, *max_dim)?)),
        Cmd::Cech {
            points: p,
            max_eps,
            max_dim,
        } => Ok(write_filtration(&cech(&points(p)?, *max_eps, *max_dim)?)),
        Cmd::Barcode {
            filtration: path,
            max_dim,
        } => {
            let f = filtration(path)?;
            let top = max_dim.unwrap_or(f.max_dim());
            let parts = (0..=top).map(|k| barcode(&f, field, k)).collect();
            Ok(write_diagram(&DiagramFile::classical(PersistenceDiagram::merge(parts))))
        }
        Cmd::Bottleneck {
            first,
            second,
            degree,
        } => {
            let a = read_diagram(&read(first)?)?.diagram();
            let b = read_diagram(&read(second)?)?.diagram();
            if cli.verbose {
                for k in a.degrees().union(&b.degrees()) {
                    let d = bottleneck(&a, &b, *k);
                    eprintln!("degree {k}: {}", fmt_g(d.value));
                }
            }
            let d = match degree {
                Some(k) => bottleneck(&a, &b, *k),
                None => bottleneck_all(&a, &b),
            };
            if d.flagged {
                eprintln!("warning: the diagrams have different numbers of infinite bars");
            }
            Ok(format!("{}\n", fmt_g(d.value)))
        }
        Cmd::DeltaBarcode {
            filtration: path,
            arity,
            max_arity,
            max_dim,
        } => {
            if field != Field::Rational {
                say("note: Δ_n persistence is computed over Q");
            }
            let f = filtration(path)?;
            let limit = max_arity.unwrap_or(*arity);
            let top = max_dim.unwrap_or(f.max_dim());
            let mut file = DiagramFile {
                kind: DiagramKind::Delta(*arity),
                intervals: Vec::new(),
                zero_length: 0,
                ranks: Default::default(),
                flickers: Vec::new(),
                inconsistent: Vec::new(),
            };
            let mut notes = String::new();
            for k in 0..=top {
                let r = delta_barcode(&f, *arity, k, limit)?;
                file.intervals.extend(r.diagram.intervals);
                file.zero_length += r.diagram.zero_length;
                file.ranks.insert(k, r.ranks);
                file.flickers.extend(r.flickers.into_iter().map(|x| (k, x)));
                file.inconsistent
                    .extend(r.inconsistent.into_iter().map(|(a, b, c)| (k, a, b, c)));
                if k == 0 {
                    for w in r.warnings {
                        notes.push_str(&format!(
                            "# warning: Δ_{} differs on {} between stages {} and {}\n",
                            w.arity,
                            w.class,
                            fmt_value(w.from),
                            fmt_value(w.to)
                        ));
                    }
                }
            }
            file.intervals = PersistenceDiagram::new(file.kind, file.intervals).intervals;
            Ok(format!("{notes}{}", write_diagram(&file)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Invariant(m) => eprintln!("invariant violated: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
