//! Text format for presentations.
//!
//! ```text
//! field: Q(sqrt 3)
//! gens: x y z
//! rel: x*y + y*x
//! rel: x^2 + y(x+z)
//! elem: (2/sqrt(3))*y^2
//! expect: class = M2
//! ```
//!
//! Products need `*`, a parenthesized factor, or a leading number
//! (`2x`, `y(x+z)`); `x y` and `xy` are rejected, the latter as an unknown
//! identifier. Division is allowed only by nonzero constants.

use std::fmt;

use thiserror::Error;

use crate::freealg::{Ambient, NcPoly};
use crate::galgebra::Presentation;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

/// One parsed section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub field: FieldSpec,
    pub gens: Vec<String>,
    pub rels: Vec<NcPoly>,
    pub elems: Vec<NcPoly>,
    /// `expect:` entries in file order; keys may repeat.
    pub expect: Vec<(String, String)>,
    /// Set by `row:` in multi-section files.
    pub label: Option<String>,
    /// Set by `table:` in multi-section files.
    pub table: Option<String>,
}

impl Default for PresentationFile {
    fn default() -> Self {
        PresentationFile {
            field: FieldSpec::Rationals,
            gens: Vec::new(),
            rels: Vec::new(),
            elems: Vec::new(),
            expect: Vec::new(),
            label: None,
            table: None,
        }
    }
}

impl PresentationFile {
    pub fn ambient(&self) -> Ambient {
        Ambient { names: self.gens.clone(), field: self.field }
    }

    /// Graded presentation; fails on inhomogeneous relations.
    pub fn presentation(&self) -> Result<Presentation, crate::galgebra::AlgebraError> {
        let mut p = Presentation::new(self.ambient(), self.rels.clone())?;
        p.label = self.label.clone();
        Ok(p)
    }

    /// All values for `key`, in order.
    pub fn expect_all(&self, key: &str) -> Vec<&str> {
        self.expect.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn expect_one(&self, key: &str) -> Option<&str> {
        self.expect.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse_poly(&self, text: &str) -> Result<NcPoly, SyntaxError> {
        parse_poly(text, &self.gens, self.field)
    }

    pub fn render_poly(&self, p: &NcPoly) -> String {
        p.render(&self.gens)
    }
}

impl fmt::Display for PresentationFile {
    /// Prints in the same format; `parse` reads it back to an equal value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = &self.table {
            writeln!(f, "table: {t}")?;
        }
        if let Some(l) = &self.label {
            writeln!(f, "row: {l}")?;
        }
        writeln!(f, "field: {}", self.field)?;
        writeln!(f, "gens: {}", self.gens.join(" "))?;
        for r in &self.rels {
            writeln!(f, "rel: {}", r.render(&self.gens))?;
        }
        for e in &self.elems {
            writeln!(f, "elem: {}", e.render(&self.gens))?;
        }
        for (k, v) in &self.expect {
            writeln!(f, "expect: {k} = {v}")?;
        }
        Ok(())
    }
}

/// Parse a single-section file. `table:` and `row:` lines are accepted
/// but only one section is allowed.
pub fn parse(text: &str) -> Result<PresentationFile, SyntaxError> {
    let mut sections = parse_sections(text)?;
    match sections.len() {
        0 => Ok(PresentationFile::default()),
        1 => Ok(sections.remove(0)),
        _ => Err(SyntaxError { line: 1, col: 1, expected: "a single section (found several `row:` lines)".into() }),
    }
}

/// Parse a multi-section file: `row:` opens a new section, `table:` sets
/// the table for the following rows, and `field:`/`gens:` lines before the
/// first row act as defaults.
pub fn parse_sections(text: &str) -> Result<Vec<PresentationFile>, SyntaxError> {
    let mut defaults = PresentationFile::default();
    let mut current: Option<PresentationFile> = None;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(SyntaxError { line: line_no, col: 1, expected: "a header such as `rel:`".into() });
        };
        let key = line[..colon].trim();
        let body = &line[colon + 1..];
        let body_col = colon + 2;
        let err = |col: usize, expected: &str| SyntaxError { line: line_no, col, expected: expected.into() };
        match key {
            "table" => {
                if let Some(sec) = current.take() {
                    out.push(sec);
                }
                defaults = PresentationFile { table: Some(body.trim().to_string()), ..PresentationFile::default() };
            }
            "row" => {
                if let Some(sec) = current.take() {
                    out.push(sec);
                }
                let mut sec = defaults.clone();
                sec.label = Some(body.trim().to_string());
                current = Some(sec);
            }
            _ => {
                let sec = current.as_mut().unwrap_or(&mut defaults);
                match key {
                    "field" => sec.field = parse_field(body).map_err(|e| err(body_col, &e))?,
                    "gens" => {
                        let gens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                        if gens.is_empty() {
                            return Err(err(body_col, "at least one generator name"));
                        }
                        for g in &gens {
                            if !is_ident(g) || g == "sqrt" {
                                return Err(err(body_col, "identifiers made of letters, digits and `_`"));
                            }
                        }
                        sec.gens = gens;
                    }
                    "rel" | "elem" => {
                        if sec.gens.is_empty() {
                            return Err(err(1, "`gens:` before polynomials"));
                        }
                        let p = parse_poly(body, &sec.gens, sec.field)
                            .map_err(|e| SyntaxError { line: line_no, col: e.col + colon + 1, expected: e.expected })?;
                        if key == "rel" {
                            sec.rels.push(p);
                        } else {
                            sec.elems.push(p);
                        }
                    }
                    "expect" => {
                        let Some(eq) = body.find('=') else {
                            return Err(err(body_col, "`key = value`"));
                        };
                        let k = body[..eq].trim();
                        if k.is_empty() {
                            return Err(err(body_col, "a key before `=`"));
                        }
                        sec.expect.push((k.to_string(), body[eq + 1..].trim().to_string()));
                    }
                    _ => return Err(err(1, "one of field, gens, rel, elem, expect, table, row")),
                }
            }
        }
    }
    if let Some(sec) = current {
        out.push(sec);
    } else if defaults.table.is_none() && (!defaults.gens.is_empty() || !defaults.rels.is_empty()) {
        out.push(defaults);
    }
    Ok(out)
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// `Q`, `Q(i)`, `Q(sqrt d)` or `Q(sqrt(d))`.
pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let expected = || "a field: Q, Q(i) or Q(sqrt d)".to_string();
    if compact == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    if compact == "Q(i)" {
        return Ok(FieldSpec::gaussian());
    }
    let inner = compact.strip_prefix("Q(sqrt").and_then(|s| s.strip_suffix(')')).ok_or_else(expected)?;
    let inner = inner.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(inner);
    let d: i64 = inner.parse().map_err(|_| expected())?;
    FieldSpec::quadratic(d).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of line".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            _ => "",
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| SyntaxError { line: 1, col, expected: "an integer below 2^63".into() })?;
            out.push((Tok::Num(n), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(SyntaxError { line: 1, col, expected: "a number, identifier or operator".into() }),
        };
        out.push((t, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    gens: &'a [String],
    field: FieldSpec,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn fail<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError { line: 1, col: self.col(), expected: format!("{expected}, found {}", self.peek().describe()) })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<NcPoly, SyntaxError> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                self.term()?.neg()
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<NcPoly, SyntaxError> {
        let (mut acc, mut last) = self.power()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let (p, k) = self.power()?;
                    acc = acc.mul(&p);
                    last = k;
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.col();
                    let (p, k) = self.power()?;
                    let c = constant_of(&p).and_then(|c| c.inv()).ok_or(SyntaxError {
                        line: 1,
                        col,
                        expected: "a nonzero constant divisor".into(),
                    })?;
                    acc = acc.scale(&c);
                    last = k;
                }
                Tok::LParen => {
                    let (p, k) = self.power()?;
                    acc = acc.mul(&p);
                    last = k;
                }
                Tok::Ident(_) | Tok::Num(_) => {
                    if last != Kind::Number || matches!(self.peek(), Tok::Num(_)) {
                        return self.fail("`*` between factors");
                    }
                    let (p, k) = self.power()?;
                    acc = acc.mul(&p);
                    last = k;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<(NcPoly, Kind), SyntaxError> {
        let (base, kind) = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let Tok::Num(e) = self.bump() else {
                self.pos -= 1;
                return self.fail("a nonnegative exponent");
            };
            return Ok((base.pow(e as usize), Kind::Other));
        }
        Ok((base, kind))
    }

    fn atom(&mut self) -> Result<(NcPoly, Kind), SyntaxError> {
        let col = self.col();
        match self.bump() {
            Tok::Num(n) => Ok((NcPoly::constant(Scalar::int(n)), Kind::Number)),
            Tok::LParen => {
                let p = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("`)`");
                }
                self.bump();
                Ok((p, Kind::Other))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.gens.iter().position(|g| *g == name) {
                    return Ok((NcPoly::var(i), Kind::Other));
                }
                if name == "i" {
                    return if self.field == FieldSpec::gaussian() {
                        Ok((NcPoly::constant(Scalar::i()), Kind::Other))
                    } else {
                        Err(SyntaxError { line: 1, col, expected: "`i` only over Q(i)".into() })
                    };
                }
                if name == "sqrt" {
                    if *self.peek() != Tok::LParen {
                        return self.fail("`(` after sqrt");
                    }
                    self.bump();
                    let arg_col = self.col();
                    let arg = self.expr()?;
                    if *self.peek() != Tok::RParen {
                        return self.fail("`)`");
                    }
                    self.bump();
                    let root = constant_of(&arg).and_then(|c| c.sqrt_in(self.field)).ok_or(SyntaxError {
                        line: 1,
                        col: arg_col,
                        expected: format!("a constant whose square root lies in {}", self.field),
                    })?;
                    return Ok((NcPoly::constant(root), Kind::Other));
                }
                Err(SyntaxError { line: 1, col, expected: format!("a generator name, not `{name}`") })
            }
            t => Err(SyntaxError { line: 1, col, expected: format!("a number, generator or `(`, found {}", t.describe()) }),
        }
    }
}

/// Whether the factor just parsed was a bare number literal; only those
/// may be followed by an identifier without `*`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Number,
    Other,
}

fn constant_of(p: &NcPoly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.terms.len() == 1 {
        let (w, c) = p.terms.iter().next().unwrap();
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

/// Parse one polynomial over the given generators.
pub fn parse_poly(text: &str, gens: &[String], field: FieldSpec) -> Result<NcPoly, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, gens, field };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of line");
    }
    if out.field().join(field).ok() != Some(field) {
        return Err(SyntaxError { line: 1, col: 1, expected: format!("coefficients in {field}") });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn basic_file() {
        let f = parse("field: Q\ngens: x y z\nrel: x*y + y*x").unwrap();
        assert_eq!(f.rels, vec![NcPoly::word(&[0, 1]).add(&NcPoly::word(&[1, 0]))]);
    }

    #[test]
    fn parenthesized_factor_expands() {
        let p = parse_poly("x^2 + y(x+z)", &xyz(), FieldSpec::Rationals).unwrap();
        let want = NcPoly::word(&[0, 0]).add(&NcPoly::word(&[1, 0])).add(&NcPoly::word(&[1, 2]));
        assert_eq!(p, want);
    }

    #[test]
    fn sqrt_scalar() {
        let f = parse("field: Q(sqrt 3)\ngens: x y z\nrel: (2/sqrt(3))*y^2").unwrap();
        let c = f.rels[0].coeff(&crate::freealg::Word::from_indices(&[1, 1]));
        // (2/√3)² = 4/3
        assert_eq!(&c * &c, Scalar::frac(4, 3));
        assert!(!c.is_rational());
    }

    #[test]
    fn juxtaposed_identifiers_rejected() {
        let e = parse_poly("yx", &xyz(), FieldSpec::Rationals).unwrap_err();
        assert_eq!(e.col, 1);
        let e = parse_poly("y x", &xyz(), FieldSpec::Rationals).unwrap_err();
        assert_eq!(e.col, 3);
        assert!(parse_poly("2x + 3 y", &xyz(), FieldSpec::Rationals).is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("gens: x y\nrel: x + w").unwrap_err();
        assert_eq!((e.line, e.col), (2, 10));
        assert!(parse("gens: x\nrel: x / x").is_err());
        assert!(parse("gens: x\nrel: i*x").is_err());
        assert!(parse("field: Q(i)\ngens: x\nrel: i*x").is_ok());
        assert!(parse("field: Q\ngens: x\nrel: sqrt(2)*x").is_err());
    }

    #[test]
    fn sections() {
        let text = "table: 5\nrow: A1\ngens: x y\nrel: x*y\nexpect: class = M2\nrow: A2\ngens: x\nrel: x^2\n";
        let s = parse_sections(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].table.as_deref(), Some("5"));
        assert_eq!(s[1].label.as_deref(), Some("A2"));
        assert_eq!(s[0].expect_one("class"), Some("M2"));
    }
}
