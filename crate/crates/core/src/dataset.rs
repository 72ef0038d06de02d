//! The classification tables as data, and a row-by-row verifier.
//!
//! Each table is a multi-section presentation file (see [`crate::parse`])
//! stored under `data/`. A row carries its presentation and `expect:` keys;
//! [`verify_row`] runs whatever checks those keys call for and returns one
//! [`Check`] per claim.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::cmap;
use crate::elements::{self, NormalSearch, Regularity};
use crate::findim::{self, ClassLabel, FiniteAlgebra, FrobeniusClass};
use crate::freealg::{NcPoly, Word};
use crate::galgebra::GradedAlgebra;
use crate::geometry::{self, elim, PointScheme};
use crate::homog::{self, RelationSequence};
use crate::linalg::{self, Matrix, Vector};
use crate::parse::{self, PresentationFile, SyntaxError};
use crate::quadratic;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("no row matches {0:?}")]
    UnknownRow(String),
    #[error("table {table}: {err}")]
    Syntax { table: u32, err: SyntaxError },
}

/// One stored table.
#[derive(Clone, Copy, Debug)]
pub struct Table {
    pub number: u32,
    /// Row-name letter for the C(A) tables (A for table 5, ..., K for 15).
    pub letter: Option<char>,
    pub title: &'static str,
    text: &'static str,
}

pub const TABLES: [Table; 16] = [
    Table { number: 1, letter: None, title: "central conics up to graded Morita equivalence", text: include_str!("../data/table01.txt") },
    Table { number: 2, letter: None, title: "noncommutative affine pencils of conics", text: include_str!("../data/table02.txt") },
    Table { number: 3, letter: None, title: "degree-2 centers Z(S)_2", text: include_str!("../data/table03.txt") },
    Table { number: 4, letter: None, title: "geometric pairs (E_A, sigma_A)", text: include_str!("../data/table04.txt") },
    Table { number: 5, letter: Some('A'), title: "C(A) = M_2(k)", text: include_str!("../data/table05.txt") },
    Table { number: 6, letter: Some('B'), title: "C(A) = k_{-1}[u,v]/(u^2-1,v^2)", text: include_str!("../data/table06.txt") },
    Table { number: 7, letter: Some('C'), title: "C(A) = k_{-1}[u,v]/(u^2+uv,v^2)", text: include_str!("../data/table07.txt") },
    Table { number: 8, letter: Some('D'), title: "C(A) = k_{-1}[u,v]/(u^2,v^2)", text: include_str!("../data/table08.txt") },
    Table { number: 9, letter: Some('E'), title: "C(A) = k_{-lambda}[u,v]/(u^2,v^2)", text: include_str!("../data/table09.txt") },
    Table { number: 10, letter: Some('F'), title: "C(A) = k[u,v]/(u^2,v^2)", text: include_str!("../data/table10.txt") },
    Table { number: 11, letter: Some('G'), title: "C(A) = (k[u]/(u^2))^2", text: include_str!("../data/table11.txt") },
    Table { number: 12, letter: Some('H'), title: "C(A) = k[u]/(u^4)", text: include_str!("../data/table12.txt") },
    Table { number: 13, letter: Some('I'), title: "C(A) = k^4", text: include_str!("../data/table13.txt") },
    Table { number: 14, letter: Some('J'), title: "C(A) = k[u]/(u^2) x k^2", text: include_str!("../data/table14.txt") },
    Table { number: 15, letter: Some('K'), title: "C(A) = k[u]/(u^3) x k", text: include_str!("../data/table15.txt") },
    Table { number: 0, letter: None, title: "isomorphisms between table rows", text: include_str!("../data/identifications.txt") },
];

/// Pseudo-table number of the identification list.
pub const IDENTIFICATIONS: u32 = 0;

impl Table {
    pub fn rows(&self) -> Result<Vec<PresentationFile>, DatasetError> {
        parse::parse_sections(self.text).map_err(|err| DatasetError::Syntax { table: self.number, err })
    }

    pub fn name(&self) -> String {
        match (self.number, self.letter) {
            (IDENTIFICATIONS, _) => "identifications".into(),
            (n, Some(l)) => format!("table {n} ({l})"),
            (n, None) => format!("table {n}"),
        }
    }
}

/// Look a table up by number ("10"), by row letter ("F"), or as
/// "identifications".
pub fn table(name: &str) -> Result<&'static Table, DatasetError> {
    let s = name.trim();
    let found = if s.eq_ignore_ascii_case("identifications") || s.eq_ignore_ascii_case("ident") {
        TABLES.iter().find(|t| t.number == IDENTIFICATIONS)
    } else if let Ok(n) = s.parse::<u32>() {
        TABLES.iter().find(|t| t.number == n && n != IDENTIFICATIONS)
    } else {
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => TABLES.iter().find(|t| t.letter == Some(c.to_ascii_uppercase())),
            _ => None,
        }
    };
    found.ok_or_else(|| DatasetError::UnknownTable(name.to_string()))
}

/// A row label with any `[parameters]` suffix removed.
pub fn base_label(label: &str) -> &str {
    label.split('[').next().unwrap_or(label)
}

/// Find a row of tables 5 to 15 by its full label, e.g. `E1[lambda=2]`.
pub fn find_conic_row(label: &str) -> Result<PresentationFile, DatasetError> {
    for t in TABLES.iter().filter(|t| t.letter.is_some()) {
        if let Some(r) = t.rows()?.into_iter().find(|r| r.label.as_deref() == Some(label)) {
            return Ok(r);
        }
    }
    Err(DatasetError::UnknownRow(label.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Pass, detail: detail.into() }
    }
    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Fail, detail: detail.into() }
    }
    fn skip(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Skipped(reason.into()), detail: String::new() }
    }
    fn verdict(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        if ok {
            Check::pass(name, detail)
        } else {
            Check::fail(name, detail)
        }
    }
}

/// Overall status of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Partial,
    Skipped,
    Fail,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Partial => "pass (some checks skipped)",
            Outcome::Skipped => "skipped",
            Outcome::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReport {
    pub table: u32,
    pub row: String,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn outcome(&self) -> Outcome {
        let passes = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        if self.failed().next().is_some() {
            Outcome::Fail
        } else if passes == 0 {
            Outcome::Skipped
        } else if passes < self.checks.len() {
            Outcome::Partial
        } else {
            Outcome::Pass
        }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for RowReport {
    /// One summary line, then one indented line per failed or skipped check.
    /// The alternate form `{:#}` lists passed checks too.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let tname = if self.table == IDENTIFICATIONS { "ident".to_string() } else { format!("table {}", self.table) };
        writeln!(f, "{tname} {}: {} ({passed}/{} checks passed)", self.row, self.outcome(), self.checks.len())?;
        for c in &self.checks {
            match &c.status {
                Status::Pass if f.alternate() => writeln!(f, "    ok   {}: {}", c.name, c.detail)?,
                Status::Pass => {}
                Status::Fail => writeln!(f, "    fail {}: {}", c.name, c.detail)?,
                Status::Skipped(r) => writeln!(f, "    skip {}: {r}", c.name)?,
            }
        }
        Ok(())
    }
}

/// Verify every row of a table (optionally only rows whose label or base
/// label equals `row`), in parallel, reporting in file order.
pub fn verify_table(t: &Table, row: Option<&str>) -> Result<Vec<RowReport>, DatasetError> {
    let mut rows = t.rows()?;
    if let Some(r) = row {
        rows.retain(|x| x.label.as_deref().is_some_and(|l| l == r || base_label(l) == r));
        if rows.is_empty() {
            return Err(DatasetError::UnknownRow(r.to_string()));
        }
    }
    Ok(rows.par_iter().map(|r| verify_row(t.number, r)).collect())
}

/// Run all checks that the row's `expect:` keys call for.
pub fn verify_row(table: u32, row: &PresentationFile) -> RowReport {
    let label = row.label.clone().unwrap_or_else(|| "(unnamed)".into());
    let checks = if let Some(reason) = row.expect_one("skip") {
        vec![Check::skip("row", reason)]
    } else {
        match table {
            IDENTIFICATIONS => verify_identification(row),
            2 => verify_pencil(row),
            3 => verify_center(row),
            4 if row.rels.len() == 3 => verify_sigma_square(row),
            4 => verify_geometric_pair(row),
            _ => verify_conic(row),
        }
    };
    RowReport { table, row: label, checks }
}

/// The identification list as a report.
pub fn verify_identifications() -> Result<Vec<RowReport>, DatasetError> {
    verify_table(table("identifications")?, None)
}

fn vectors(ps: &[NcPoly], n: usize) -> Vec<Vector> {
    ps.iter().map(|p| quadratic::word_vector(p, n)).collect()
}

fn span_eq(a: &[NcPoly], b: &[NcPoly], n: usize) -> bool {
    linalg::same_span(&vectors(a, n), &vectors(b, n))
}

fn render_all(ps: &[NcPoly], names: &[String]) -> String {
    ps.iter().map(|p| p.render(names)).collect::<Vec<_>>().join(", ")
}

fn parse_expect(row: &PresentationFile, text: &str) -> Result<NcPoly, String> {
    row.parse_poly(text).map_err(|e| format!("cannot parse {text:?}: {e}"))
}

/// Comma-separated polynomials; "0" is the empty list.
fn parse_list(row: &PresentationFile, text: &str) -> Result<Vec<NcPoly>, String> {
    if text.trim() == "0" {
        return Ok(vec![]);
    }
    text.split(',').map(|t| parse_expect(row, t)).collect()
}

fn parse_scalar(row: &PresentationFile, text: &str) -> Result<Scalar, String> {
    let p = parse_expect(row, text)?;
    if p.terms.keys().any(|w| !w.is_empty()) {
        return Err(format!("{text:?} is not a constant"));
    }
    Ok(p.coeff(&Word::empty()))
}

/// `a : b : c`
fn parse_point(row: &PresentationFile, text: &str) -> Result<Vec<Scalar>, String> {
    text.split(':').map(|t| parse_scalar(row, t)).collect()
}

/// Rows separated by `;`, entries by whitespace.
fn parse_matrix(row: &PresentationFile, text: &str) -> Result<Matrix, String> {
    text.split(';').map(|r| r.split_whitespace().map(|t| parse_scalar(row, t)).collect()).collect()
}

fn first_err(checks: &mut Vec<Check>, name: &str, r: Result<Check, String>) {
    checks.push(r.unwrap_or_else(|e| Check::fail(name, e)));
}

fn hilbert_check(name: &str, a: &GradedAlgebra, expect: &[usize]) -> Check {
    let got = &a.hilbert.0[..expect.len().min(a.hilbert.0.len())];
    Check::verdict(name, got == expect, format!("got {got:?}, expected {expect:?}"))
}

fn class_checks(checks: &mut Vec<Check>, row: &PresentationFile, got: &FrobeniusClass) {
    if let Some(exp) = row.expect_one("class") {
        match ClassLabel::parse(exp) {
            Some(l) => checks.push(Check::verdict("class", got.label == l, format!("got {got}, expected {exp}"))),
            None => checks.push(Check::fail("class", format!("unknown class label {exp:?}"))),
        }
    }
    if let Some(exp) = row.expect_one("lambda") {
        let ok = match (parse_scalar(row, exp), &got.lambda) {
            (Ok(mu), Some(pair)) => pair.contains(&mu),
            _ => false,
        };
        checks.push(Check::verdict("lambda", ok, format!("got {got}, expected a pair containing {exp}")));
    }
}

/// Dimension, algebra laws, Frobenius form, then class and λ.
fn finite_algebra_checks(checks: &mut Vec<Check>, row: &PresentationFile, prefix: &str, c: &FiniteAlgebra, dim: usize) {
    checks.push(Check::verdict(format!("{prefix} dim"), c.dim() == dim, format!("dim {}, expected {dim}", c.dim())));
    checks.push(match c.check_laws() {
        Ok(()) => Check::pass(format!("{prefix} associative"), ""),
        Err(e) => Check::fail(format!("{prefix} associative"), e.to_string()),
    });
    if c.dim() != dim {
        return;
    }
    let frob = findim::is_frobenius(c);
    let detail = if frob.frobenius { "nondegenerate functional found" } else { "no nondegenerate functional" };
    checks.push(Check::verdict(format!("{prefix} frobenius"), frob.frobenius, detail));
    if dim == 4 && frob.frobenius {
        match findim::classify(c) {
            Ok(got) => class_checks(checks, row, &got),
            Err(e) => checks.push(Check::fail("class", e.to_string())),
        }
    }
}

/// An empty RN or RZ cell: the search must be exhaustive and find no
/// element that could be regular.
fn empty_search_check(name: &str, s: &NormalSearch, names: &[String]) -> Check {
    let hits: Vec<String> = s.found.iter().filter(|c| c.regular != Regularity::No).map(|c| c.render(names)).collect();
    if !s.complete {
        Check::fail(name, format!("search incomplete: {}", s.notes.join("; ")))
    } else if !hits.is_empty() {
        Check::fail(name, format!("found {}", hits.join(" | ")))
    } else {
        let mut detail = format!("exhaustive search found {} candidate(s), none regular", s.found.len());
        for n in &s.notes {
            detail.push_str("; ");
            detail.push_str(n);
        }
        Check::pass(name, detail)
    }
}

fn verify_conic(row: &PresentationFile) -> Vec<Check> {
    let mut checks = Vec::new();
    let p = match row.presentation() {
        Ok(p) if p.n() == 3 && p.relations.len() == 4 => p,
        Ok(p) => return vec![Check::fail("presentation", format!("{} generators, {} relations", p.n(), p.relations.len()))],
        Err(e) => return vec![Check::fail("presentation", e.to_string())],
    };
    let names = p.names().to_vec();
    let tables_row = row.expect_one("dual").is_some() || row.expect_one("RN").is_some();

    // Hilbert prefixes and the Koszul identity
    if tables_row {
        match GradedAlgebra::build(p.clone(), 6) {
            Ok(a) => {
                checks.push(hilbert_check("hilbert A", &a, &[1, 3, 5, 7, 9]));
                checks.push(match quadratic::koszul_series_check(&a, 6) {
                    Ok(ok) => Check::verdict("koszul identity", ok, format!("H_{{A^!}}(t) H_A(-t) {} 1 through degree 6", if ok { "=" } else { "!=" })),
                    Err(e) => Check::fail("koszul identity", e.to_string()),
                });
            }
            Err(e) => checks.push(Check::fail("hilbert A", e.to_string())),
        }
    }
    let dual = match cmap::dual_algebra(&p) {
        Ok(d) => d,
        Err(e) => {
            checks.push(Check::fail("dual", e.to_string()));
            return checks;
        }
    };
    if tables_row {
        checks.push(hilbert_check("hilbert A^!", &dual, &[1, 3, 4, 4, 4]));
    }

    // dual relations
    let expected_dual = row.expect_all("dual");
    if !expected_dual.is_empty() {
        let r = expected_dual.iter().map(|t| parse_expect(row, t)).collect::<Result<Vec<_>, _>>().map(|g| {
            let got = &dual.presentation.relations;
            let ok = got.len() == 5 && linalg::row_basis(&vectors(&g, 3)).len() == 5 && span_eq(got, &g, 3);
            Check::verdict("dual span", ok, format!("computed {}", render_all(got, &names)))
        });
        first_err(&mut checks, "dual span", r);
    }

    // RN / RZ
    let rn = row.expect_one("RN");
    let rz = row.expect_one("RZ");
    let mut search: Option<Result<NormalSearch, String>> = None;
    let mut get_search = || {
        search
            .get_or_insert_with(|| elements::find_normal_degree1(&dual, row.field).map_err(|e| e.to_string()))
            .clone()
    };
    let mut central_w: Option<NcPoly> = None;
    for (key, value) in [("RN", rn), ("RZ", rz)] {
        let Some(v) = value else { continue };
        let name = format!("{key} {v}");
        match v {
            "star" => checks.push(Check::skip(name, "marked *: an element is known to exist but none is listed")),
            "none" => {
                let r = if key == "RZ" {
                    elements::find_central_degree1(&dual, row.field).map_err(|e| e.to_string())
                } else {
                    get_search()
                };
                let r = r.map(|s| empty_search_check(&name, &s, &names));
                first_err(&mut checks, &name, r);
            }
            text => {
                let r = parse_expect(row, text).and_then(|w| {
                    let cert = elements::certify(&dual, &w).map_err(|e| format!("not normal: {e}"))?;
                    // an RN entry whose RZ cell is empty must not be central
                    let central_ok = if key == "RZ" { cert.central } else { rz != Some("none") || !cert.central };
                    let ok = cert.regular == Regularity::Yes && central_ok;
                    if key == "RZ" && ok {
                        central_w = Some(w.clone());
                    }
                    Ok(Check::verdict(name.clone(), ok, cert.render(&names)))
                });
                first_err(&mut checks, &name, r);
            }
        }
    }

    // C(A)
    match cmap::compute_c(&p, row.field) {
        Ok(c) => finite_algebra_checks(&mut checks, row, "C(A)", &c.algebra, 4),
        Err(e) => checks.push(Check::fail("C(A)", e.to_string())),
    }

    // re-homogenizing the dehomogenized dual at a central element
    if let Some(w) = central_w {
        checks.push(match cmap::rehomogenized_dual(&p, &w) {
            Ok((moved, back)) => {
                Check::verdict("rehomogenized dual", span_eq(&moved, &back, 3), format!("got {}", render_all(&back, &names)))
            }
            Err(e) => Check::fail("rehomogenized dual", e.to_string()),
        });
    }
    checks
}

fn verify_pencil(row: &PresentationFile) -> Vec<Check> {
    let mut checks = Vec::new();
    let s = match row.presentation() {
        Ok(s) => s,
        Err(e) => return vec![Check::fail("presentation", e.to_string())],
    };
    let f = match RelationSequence::new(row.ambient(), row.elems.clone()) {
        Ok(f) => f,
        Err(e) => return vec![Check::fail("sequence", e.to_string())],
    };
    let expect_srn = row.expect_one("strongly_regular") != Some("false");
    let srn = GradedAlgebra::build(s.clone(), 6)
        .map_err(|e| e.to_string())
        .and_then(|sa| homog::is_strongly_regular_normal(&sa, &f).map_err(|e| e.to_string()));
    let srn_ok = match &srn {
        Ok(r) => {
            let got = r.strongly_regular_normal();
            checks.push(Check::verdict("strongly regular normal", got == expect_srn, format!("got {got}, expected {expect_srn}")));
            got
        }
        Err(e) => {
            checks.push(Check::fail("strongly regular normal", e.clone()));
            false
        }
    };

    let mut rels = s.relations.clone();
    rels.extend(f.elems.iter().cloned());
    let dim = row.expect_one("dim").and_then(|d| d.parse().ok()).unwrap_or(4);
    let e = match findim::from_presentation(&row.gens, &rels, 8) {
        Ok(e) => e,
        Err(err) => {
            checks.push(Check::fail("E", err.to_string()));
            return checks;
        }
    };
    finite_algebra_checks(&mut checks, row, "E", &e, dim);
    let commutative = s.relations.len() == 1 && s.relations[0] == NcPoly::word(&[0, 1]).sub(&NcPoly::word(&[1, 0]));
    if commutative && expect_srn {
        let prod: usize = f.elems.iter().map(|g| g.degree().unwrap_or(0)).product();
        checks.push(Check::verdict("bezout", e.dim() == prod, format!("dim {} vs product of degrees {prod}", e.dim())));
    }
    if !srn_ok {
        return checks;
    }

    // ∇ then Δ
    let class_e = findim::classify(&e).ok();
    let conic = match cmap::nabla(&s, &f) {
        Ok(a) => a,
        Err(err) => {
            checks.push(Check::fail("nabla", err.to_string()));
            return checks;
        }
    };
    match cmap::delta(&conic, row.field) {
        Ok((d, cert)) => {
            let got = findim::classify(&d).ok();
            let same = match (&got, &class_e) {
                (Some(a), Some(b)) => a.label == b.label && a.lambda.as_ref().map(|l| &l.sum) == b.lambda.as_ref().map(|l| &l.sum),
                _ => false,
            };
            let show = |c: &Option<FrobeniusClass>| c.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "unclassified".into());
            checks.push(Check::verdict(
                "delta(nabla(E))",
                same,
                format!("class {} vs {}", show(&got), show(&class_e)),
            ));
            if row.expect_one("rehomogenized") == Some("true") {
                checks.push(match cmap::rehomogenized_dual(&conic, &cert.w) {
                    Ok((moved, back)) => Check::verdict(
                        "rehomogenized dual",
                        span_eq(&moved, &back, 3),
                        format!("got {}", render_all(&back, conic.names())),
                    ),
                    Err(err) => Check::fail("rehomogenized dual", err.to_string()),
                });
            }
        }
        Err(err) => checks.push(Check::fail("delta(nabla(E))", err.to_string())),
    }
    checks
}

fn verify_center(row: &PresentationFile) -> Vec<Check> {
    let mut checks = Vec::new();
    let a = match row.presentation().map_err(|e| e.to_string()).and_then(|p| GradedAlgebra::build(p, 4).map_err(|e| e.to_string())) {
        Ok(a) => a,
        Err(e) => return vec![Check::fail("presentation", e)],
    };
    checks.push(hilbert_check("hilbert S", &a, &[1, 3, 6, 10]));
    if let Some(text) = row.expect_one("center") {
        let r = parse_list(row, text).and_then(|exp| {
            let got = elements::center_degree(&a, 2).map_err(|e| e.to_string())?;
            let coords = |ps: &[NcPoly]| -> Result<Vec<Vector>, String> {
                ps.iter().map(|p| a.coords(p, 2).map_err(|e| e.to_string())).collect()
            };
            let (ge, ee) = (coords(&got)?, coords(&exp)?);
            let ok = got.len() == linalg::row_basis(&ee).len() && linalg::same_span(&ge, &ee);
            Ok(Check::verdict("center", ok, format!("computed {}", if got.is_empty() { "0".into() } else { render_all(&got, a.names()) })))
        });
        first_err(&mut checks, "center", r);
    }
    if let Some(text) = row.expect_one("basis3") {
        let r = parse_list(row, text).map(|exp| {
            let mut want: Vec<Word> = exp.iter().filter_map(|p| p.leading().map(|(w, _)| w.clone())).collect();
            want.sort();
            let mut got = a.basis(3).to_vec();
            got.sort();
            let shown: Vec<String> = a.basis(3).iter().map(|w| w.render(a.names())).collect();
            Check::verdict("normal words of degree 3", got == want, format!("computed {}", shown.join(", ")))
        });
        first_err(&mut checks, "normal words of degree 3", r);
    }
    checks
}

fn same_point(p: &[Scalar], q: &[Scalar]) -> bool {
    geometry::normalize_point(p) == geometry::normalize_point(q)
}

fn point_text(p: &[Scalar]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
}

fn verify_geometric_pair(row: &PresentationFile) -> Vec<Check> {
    let mut checks = Vec::new();
    if let Some(locus) = row.expect_one("locus") {
        let r = (|| {
            let g = geometry::commutative_image(&parse_expect(row, locus)?, 3);
            let k = geometry::k_matrix(&row.rels, 3).map_err(|e| e.to_string())?;
            let minors = geometry::minors_ideal(&k);
            let vanish = minors.iter().all(|m| elim::reduce(m, &[g.clone()], elim::TermOrder::GrLex).is_zero());
            let contained = geometry::zeros_contained_in(&minors, &g, row.field).map_err(|e| e.to_string())?;
            let shown: Vec<String> = minors.iter().map(|m| m.render(&["x", "y", "z"])).collect();
            Ok(Check::verdict(
                "E_A = V(locus)",
                vanish && contained,
                format!("minors {}; vanish on locus: {vanish}; zeros inside locus: {contained}", shown.join(", ")),
            ))
        })();
        first_err(&mut checks, "E_A = V(locus)", r);
        if let Some(m) = row.expect_one("sigma") {
            let r = parse_matrix(row, m).and_then(|m| {
                let mut bad = Vec::new();
                let samples = row.expect_all("sample");
                for s in &samples {
                    let p = parse_point(row, s)?;
                    let on = geometry::commutative_image(&parse_expect(row, locus)?, 3).eval(&p).is_zero();
                    let got = geometry::sigma_at(&row.rels, &p).map_err(|e| format!("{s}: {e}"))?;
                    let want = linalg::mat_vec(&m, &p);
                    if !on || got.as_deref().map(|q| same_point(q, &want)) != Some(true) {
                        bad.push(format!("sigma({}) = {}", point_text(&p), got.map(|q| point_text(&q)).unwrap_or("?".into())));
                    }
                }
                Ok(Check::verdict("sigma_A on samples", bad.is_empty() && !samples.is_empty(), bad.join("; ")))
            });
            first_err(&mut checks, "sigma_A on samples", r);
        }
    }
    if let Some(count) = row.expect_one("points") {
        match geometry::point_scheme(&row.rels, row.field) {
            Ok(PointScheme::Finite { points, sigma, complete }) => {
                let want: usize = count.parse().unwrap_or(usize::MAX);
                let shown: Vec<String> = points.iter().map(|p| point_text(p)).collect();
                checks.push(Check::verdict(
                    "points",
                    points.len() == want && complete,
                    format!("{} point(s) {} over {}{}", points.len(), shown.join(" "), row.field, if complete { "" } else { ", incomplete" }),
                ));
                let cycle = PointScheme::Finite { points: points.clone(), sigma: sigma.clone(), complete }.cycle_type();
                if let Some(c) = row.expect_one("cycle") {
                    let want: Option<Vec<usize>> = c.split(',').map(|t| t.trim().parse().ok()).collect();
                    checks.push(Check::verdict("sigma cycle type", cycle.is_some() && cycle == want, format!("got {cycle:?}")));
                }
                let n = points.len();
                let mut triples = 0;
                let mut on_line = vec![vec![false; n]; n];
                for a in 0..n {
                    for b in a + 1..n {
                        for c in b + 1..n {
                            if geometry::collinear(&points[a], &points[b], &points[c]) {
                                triples += 1;
                                for (i, j) in [(a, b), (a, c), (b, c)] {
                                    on_line[i][j] = true;
                                    on_line[j][i] = true;
                                }
                            }
                        }
                    }
                }
                if let Some(c) = row.expect_one("collinear") {
                    checks.push(Check::verdict("collinear triples", c.parse() == Ok(triples), format!("got {triples}")));
                }
                if let Some(c) = row.expect_one("swaps_on_lines") {
                    let swaps = (0..n).filter(|&i| sigma[i].is_some_and(|j| j > i && sigma[j] == Some(i) && on_line[i][j])).count();
                    checks.push(Check::verdict("swaps on lines", c.parse() == Ok(swaps), format!("got {swaps}")));
                }
                let involutive = (0..n).any(|i| sigma[i].and_then(|j| sigma[j]) == Some(i));
                checks.push(Check::verdict("sigma^2 = id on a component", involutive, if involutive { "some point has sigma^2(p) = p" } else { "no point with sigma^2(p) = p" }));
            }
            Ok(PointScheme::Generators(_)) => checks.push(Check::fail("points", "point scheme is positive-dimensional")),
            Err(e) => checks.push(Check::fail("points", e.to_string())),
        }
    }
    checks
}

/// σ² = id on a component of the pair (E, σ) of S itself.
fn verify_sigma_square(row: &PresentationFile) -> Vec<Check> {
    let Some(comp) = row.expect_one("component") else {
        return vec![Check::fail("component", "no component given")];
    };
    let r = (|| {
        let g = geometry::commutative_image(&parse_expect(row, comp)?, 3);
        let k = geometry::k_matrix(&row.rels, 3).map_err(|e| e.to_string())?;
        let det = geometry::minors_ideal(&k).remove(0);
        let divides = g.is_zero() && det.is_zero() || !g.is_zero() && elim::reduce(&det, &[g.clone()], elim::TermOrder::GrLex).is_zero();
        let mut bad = Vec::new();
        let samples = row.expect_all("sample");
        for s in &samples {
            let p = parse_point(row, s)?;
            let q = geometry::sigma_at(&row.rels, &p).map_err(|e| format!("{s}: {e}"))?;
            let back = match &q {
                Some(q) => geometry::sigma_at(&row.rels, q).map_err(|e| format!("{s}: {e}"))?,
                None => None,
            };
            if !g.eval(&p).is_zero() || back.as_deref().map(|b| same_point(b, &p)) != Some(true) {
                bad.push(point_text(&p));
            }
        }
        Ok(Check::verdict(
            "sigma^2 = id on a component",
            divides && bad.is_empty() && !samples.is_empty(),
            format!("det K = {}; component divides det K: {divides}; failing samples: {}", det.render(&["x", "y", "z"]), bad.join(" ")),
        ))
    })();
    let mut checks = Vec::new();
    first_err(&mut checks, "sigma^2 = id on a component", r);
    checks
}

/// Relations of the Zhang twist: Σ c_ij x_i x_j ↦ Σ c_ij σ(x_i) x_j with
/// σ(x_i) = Σ_j m[i][j] x_j.
pub fn zhang_twist(relations: &[NcPoly], m: &Matrix) -> Vec<NcPoly> {
    relations
        .iter()
        .map(|r| {
            let mut out = NcPoly::zero();
            for (w, c) in &r.terms {
                let (i, j) = (w.0[0] as usize, w.0[1] as usize);
                for (k, a) in m[i].iter().enumerate() {
                    if !a.is_zero() {
                        out.add_term(Word::from_indices(&[k, j]), &(c * a));
                    }
                }
            }
            out
        })
        .collect()
}

fn verify_identification(row: &PresentationFile) -> Vec<Check> {
    let name = "isomorphism";
    let Some(witness) = row.expect_one("witness") else {
        return vec![Check::fail(name, "no witness entry")];
    };
    if witness == "missing" {
        return vec![Check::skip(name, "no witness is stored for this isomorphism")];
    }
    let r = (|| {
        let lookup = |key: &str| -> Result<Option<PresentationFile>, String> {
            row.expect_one(key).map(|l| find_conic_row(l).map_err(|e| e.to_string())).transpose()
        };
        let left = lookup("left")?.unwrap_or_else(|| row.clone());
        let right = lookup("right")?.ok_or("no right-hand row")?;
        let n = left.gens.len();
        let (kind, mat) = witness.split_once(' ').unwrap_or((witness, ""));
        let image = match kind {
            "equal" => left.rels.clone(),
            "substitute" => {
                let m = parse_matrix(row, mat)?;
                left.rels.iter().map(|r| r.substitute(&m)).collect()
            }
            "twist" => {
                let m = parse_matrix(row, mat)?;
                let both = |r: &NcPoly| r.substitute(&m);
                let fixed: Vec<NcPoly> = left.rels.iter().map(both).collect();
                if !span_eq(&fixed, &left.rels, n) {
                    return Ok(Check::fail(name, "sigma is not a graded automorphism of the left algebra"));
                }
                zhang_twist(&left.rels, &m)
            }
            other => return Err(format!("unknown witness kind {other:?}")),
        };
        Ok(Check::verdict(name, span_eq(&image, &right.rels, n), format!("image {}", render_all(&image, &left.gens))))
    })();
    let mut checks = Vec::new();
    first_err(&mut checks, name, r);
    checks
}
