//! `ncconic`: command-line front end.
//!
//! Exit status is 0 on success, 1 when a computation or verification check
//! fails, and 2 on usage or parse errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use ncconic::dataset::{self, Outcome};
use ncconic::elements;
use ncconic::findim;
use ncconic::galgebra::{self, GradedAlgebra, Presentation};
use ncconic::geometry::{self, PointScheme};
use ncconic::homog::{self, RelationSequence};
use ncconic::parse::{self, PresentationFile};
use ncconic::quadratic::{self, QuadraticPresentation};
use ncconic::cmap;

#[derive(Parser)]
#[command(name = "ncconic", version, about = "Exact computations with noncommutative conics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the quadratic dual presentation.
    Dual { file: PathBuf },
    /// Print the Hilbert function prefix.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Print the normal words of one degree.
    Basis {
        file: PathBuf,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Print a basis of the center in one degree.
    Center {
        file: PathBuf,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// List the degree-1 normal elements with their certificates.
    Normal1 {
        file: PathBuf,
        #[arg(long)]
        max_deg: Option<usize>,
    },
    /// Homogenize: `rel:` lines give S, `elem:` lines give F.
    Homogenize { file: PathBuf },
    /// Dehomogenize at a degree-1 element w.
    Dehomogenize {
        file: PathBuf,
        #[arg(long)]
        elem: String,
    },
    /// Structure constants and class of C(A) for a conic.
    Cmap { file: PathBuf },
    /// Classify k<gens>/(rels, elems) as a finite-dimensional algebra.
    Classify { file: PathBuf },
    /// The conic attached to a pencil (`rel:` h, `elem:` f and g).
    Nabla { file: PathBuf },
    /// The pencil algebra attached to a conic.
    Delta { file: PathBuf },
    /// Minors, points and sigma of the point scheme.
    Pointscheme { file: PathBuf },
    /// Verify stored table rows.
    Verify {
        /// Table number (1 to 15), row letter (A to K), or "identifications".
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        row: Option<String>,
        /// Also list the checks that passed.
        #[arg(long, short)]
        verbose: bool,
    },
}

/// Errors sorted by exit status.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Check(e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn read(path: &Path) -> Result<PresentationFile, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
    parse::parse(&text).with_context(|| path.display().to_string()).map_err(usage)
}

fn graded(file: &PresentationFile, max_deg: Option<usize>) -> Result<GradedAlgebra, Failure> {
    let p = file.presentation().map_err(usage)?;
    Ok(GradedAlgebra::build(p, max_deg.unwrap_or_else(galgebra::default_max_deg))?)
}

fn as_file(p: &Presentation, field: ncconic::scalar::FieldSpec) -> PresentationFile {
    PresentationFile { field, gens: p.names().to_vec(), rels: p.relations.clone(), ..Default::default() }
}

fn run(cmd: Cmd) -> Result<String, Failure> {
    let mut out = String::new();
    match cmd {
        Cmd::Dual { file } => {
            let f = read(&file)?;
            let q = QuadraticPresentation::new(f.presentation().map_err(usage)?)?;
            out.push_str(&as_file(&quadratic::quadratic_dual(&q).presentation, f.field).to_string());
        }
        Cmd::Hilbert { file, max_deg } => {
            let a = graded(&read(&file)?, max_deg)?;
            let h: Vec<String> = a.hilbert.0.iter().map(|d| d.to_string()).collect();
            writeln!(out, "{}", h.join(","))?;
        }
        Cmd::Basis { file, deg, max_deg } => {
            let a = graded(&read(&file)?, Some(max_deg.unwrap_or_else(galgebra::default_max_deg).max(deg)))?;
            for w in a.basis(deg) {
                writeln!(out, "{}", if w.is_empty() { "1".into() } else { w.render(a.names()) })?;
            }
        }
        Cmd::Center { file, deg, max_deg } => {
            let a = graded(&read(&file)?, Some(max_deg.unwrap_or_else(galgebra::default_max_deg).max(deg + 1)))?;
            let z = elements::center_degree(&a, deg)?;
            if z.is_empty() {
                writeln!(out, "0")?;
            }
            for p in z {
                writeln!(out, "{}", p.render(a.names()))?;
            }
        }
        Cmd::Normal1 { file, max_deg } => {
            let f = read(&file)?;
            let a = graded(&f, max_deg)?;
            let s = elements::find_normal_degree1(&a, f.field)?;
            if s.found.is_empty() {
                writeln!(out, "none")?;
            }
            for c in &s.found {
                writeln!(out, "{}", c.render(a.names()))?;
            }
            writeln!(out, "search complete over {}: {}", f.field, s.complete)?;
            for n in &s.notes {
                writeln!(out, "note: {n}")?;
            }
        }
        Cmd::Homogenize { file } => {
            let f = read(&file)?;
            let s = f.presentation().map_err(usage)?;
            let seq = RelationSequence::new(f.ambient(), f.elems.clone())?;
            let h = homog::homogenize_presentation(&s, &seq, "z")?;
            out.push_str(&as_file(&h, f.field).to_string());
        }
        Cmd::Dehomogenize { file, elem } => {
            let f = read(&file)?;
            let w = f.parse_poly(&elem).map_err(usage)?;
            let a = graded(&f, None)?;
            let cert = elements::certify(&a, &w)?;
            writeln!(out, "# {}", cert.render(a.names()))?;
            let (names, rels) = homog::dehomogenized_relations(&a, &w).ok_or_else(|| anyhow!("w has no degree-1 part"))?;
            let g = PresentationFile { field: f.field, gens: names, rels, ..Default::default() };
            out.push_str(&g.to_string());
        }
        Cmd::Cmap { file } => {
            let f = read(&file)?;
            let c = cmap::compute_c(&f.presentation().map_err(usage)?, f.field)?;
            match &c.route {
                cmap::CRoute::DegreeOne(cert) => writeln!(out, "# localized at {}", cert.render(c.dual.names()))?,
                cmap::CRoute::DualElement(cert) => writeln!(out, "# localized at f^! = {}", cert.render(c.dual.names()))?,
            }
            out.push_str(&c.algebra.render());
            writeln!(out, "class: {}", findim::classify(&c.algebra)?)?;
        }
        Cmd::Classify { file } => {
            let f = read(&file)?;
            let mut rels = f.rels.clone();
            rels.extend(f.elems.iter().cloned());
            let a = findim::from_presentation(&f.gens, &rels, 8)?;
            writeln!(out, "dim: {}", a.dim())?;
            writeln!(out, "class: {}", findim::classify(&a)?)?;
        }
        Cmd::Nabla { file } => {
            let f = read(&file)?;
            let s = f.presentation().map_err(usage)?;
            let seq = RelationSequence::new(f.ambient(), f.elems.clone())?;
            out.push_str(&as_file(&cmap::nabla(&s, &seq)?, f.field).to_string());
        }
        Cmd::Delta { file } => {
            let f = read(&file)?;
            let (d, cert) = cmap::delta(&f.presentation().map_err(usage)?, f.field)?;
            writeln!(out, "# dehomogenized at {}", cert.render(&f.gens))?;
            out.push_str(&d.render());
            writeln!(out, "class: {}", findim::classify(&d)?)?;
        }
        Cmd::Pointscheme { file } => {
            let f = read(&file)?;
            let k = geometry::k_matrix(&f.rels, f.gens.len())?;
            let names: Vec<&str> = f.gens.iter().map(String::as_str).collect();
            writeln!(out, "minors:")?;
            for m in geometry::minors_ideal(&k) {
                writeln!(out, "  {}", m.render(&names))?;
            }
            match geometry::point_scheme(&f.rels, f.field)? {
                PointScheme::Generators(_) => writeln!(out, "E is positive-dimensional")?,
                ps => {
                    out.push_str(&ps.to_string());
                    if let Some(c) = ps.cycle_type() {
                        writeln!(out, "cycle type of sigma: {c:?}")?;
                    }
                }
            }
        }
        Cmd::Verify { table, row, verbose } => return verify(table, row, verbose),
    }
    Ok(out)
}

fn verify(table: Option<String>, row: Option<String>, verbose: bool) -> Result<String, Failure> {
    let tables: Vec<&dataset::Table> = match &table {
        Some(t) => vec![dataset::table(t).map_err(usage)?],
        None => dataset::TABLES.iter().collect(),
    };
    let mut out = String::new();
    let mut failed = 0;
    let mut total = 0;
    for t in tables {
        let reports = dataset::verify_table(t, row.as_deref()).map_err(usage)?;
        writeln!(out, "== {}: {}", t.name(), t.title)?;
        for r in &reports {
            out.push_str(&if verbose { format!("{r:#}") } else { r.to_string() });
            total += 1;
            failed += usize::from(r.outcome() == Outcome::Fail);
        }
    }
    writeln!(out, "{total} row(s), {failed} failed")?;
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Check(anyhow!("{failed} row(s) failed")));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
