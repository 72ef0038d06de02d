//! Noncommutative polynomials in k⟨x₁,…,xₙ⟩ under degree-lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeAlgError {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,
    #[error("generator index {0} out of range for {1} generators")]
    BadGenerator(usize, usize),
}

/// A monomial: generator indices, compared by length and then
/// lexicographically (index order is generator precedence).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Word {
        Word(vec![i as u8])
    }

    pub fn from_indices(ix: &[usize]) -> Word {
        Word(ix.iter().map(|&i| i as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right` without intermediate allocation.
    pub fn wrap(left: &[u8], mid: &[u8], right: &[u8]) -> Word {
        let mut v = Vec::with_capacity(left.len() + mid.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(mid);
        v.extend_from_slice(right);
        Word(v)
    }

    /// Position of the first occurrence of `sub` as a factor.
    pub fn find(&self, sub: &Word) -> Option<usize> {
        let (h, n) = (&self.0, &sub.0);
        if n.len() > h.len() {
            return None;
        }
        (0..=h.len() - n.len()).find(|&s| &h[s..s + n.len()] == n.as_slice())
    }

    pub fn contains(&self, sub: &Word) -> bool {
        self.find(sub).is_some()
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            let name = names.get(g as usize).cloned().unwrap_or_else(|| format!("g{g}"));
            if j - i == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree-lexicographic order with a generator precedence:
/// `rank[i]` is the position of generator `i` (0 = smallest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub rank: Vec<usize>,
}

impl MonomialOrder {
    /// Index order: x₀ < x₁ < … .
    pub fn natural(n: usize) -> MonomialOrder {
        MonomialOrder { rank: (0..n).collect() }
    }

    pub fn with_rank(rank: Vec<usize>) -> MonomialOrder {
        let mut seen = rank.clone();
        seen.sort_unstable();
        assert!(seen.iter().enumerate().all(|(i, &r)| i == r), "rank must be a permutation");
        MonomialOrder { rank }
    }

    pub fn is_natural(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        self.relabel_word(a).cmp(&self.relabel_word(b))
    }

    pub fn relabel_word(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&g| self.rank[g as usize] as u8).collect())
    }

    pub fn unlabel_word(&self, w: &Word) -> Word {
        let mut inv = vec![0u8; self.rank.len()];
        for (i, &r) in self.rank.iter().enumerate() {
            inv[r] = i as u8;
        }
        Word(w.0.iter().map(|&g| inv[g as usize]).collect())
    }

    /// Rename generators so that index order realizes this order.
    pub fn relabel(&self, p: &NcPoly) -> NcPoly {
        if self.is_natural() {
            return p.clone();
        }
        NcPoly { terms: p.terms.iter().map(|(w, c)| (self.relabel_word(w), c.clone())).collect() }
    }

    pub fn unlabel(&self, p: &NcPoly) -> NcPoly {
        if self.is_natural() {
            return p.clone();
        }
        NcPoly { terms: p.terms.iter().map(|(w, c)| (self.unlabel_word(w), c.clone())).collect() }
    }
}

/// Generator names and coefficient field shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub names: Vec<String>,
    pub field: FieldSpec,
}

impl Ambient {
    pub fn new(names: &[&str], field: FieldSpec) -> Ambient {
        Ambient { names: names.iter().map(|s| s.to_string()).collect(), field }
    }

    pub fn xyz() -> Ambient {
        Ambient::new(&["x", "y", "z"], FieldSpec::Rationals)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// An element of the free algebra; terms are kept sorted by the natural
/// order and never store zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct NcPoly {
    pub terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> NcPoly {
        NcPoly::default()
    }

    pub fn constant(c: Scalar) -> NcPoly {
        NcPoly::monomial(Word::empty(), c)
    }

    pub fn one() -> NcPoly {
        NcPoly::constant(Scalar::one())
    }

    pub fn var(i: usize) -> NcPoly {
        NcPoly::monomial(Word::letter(i), Scalar::one())
    }

    pub fn word(w: &[usize]) -> NcPoly {
        NcPoly::monomial(Word::from_indices(w), Scalar::one())
    }

    pub fn monomial(w: Word, c: Scalar) -> NcPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { terms }
    }

    /// Sum of `c · word` over the given pairs.
    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(it: I) -> NcPoly {
        let mut p = NcPoly::zero();
        for (w, c) in it {
            p.add_term(w, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest term under the natural order.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.len())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn component(&self, d: usize) -> NcPoly {
        NcPoly { terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> NcPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => NcPoly::zero(),
        }
    }

    pub fn add(&self, o: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &NcPoly) -> NcPoly {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), &-c);
        }
        r
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&Scalar::int(-1))
    }

    pub fn mul(&self, o: &NcPoly) -> NcPoly {
        let mut r = NcPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term(a.concat(b), &(ca * cb));
            }
        }
        r
    }

    pub fn pow(&self, e: usize) -> NcPoly {
        let mut r = NcPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// `left · self · right` for words.
    pub fn wrap(&self, left: &[u8], right: &[u8]) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (Word::wrap(left, &w.0, right), c.clone())).collect() }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.0.iter()).map(|&g| g as usize).max()
    }

    /// Field generated by the coefficients.
    pub fn field(&self) -> FieldSpec {
        self.terms.values().fold(FieldSpec::Rationals, |f, c| f.join(c.field()).unwrap_or(f))
    }

    /// Substitute z = 1: delete generator `z`, shifting higher indices down.
    pub fn dehomogenize(&self, z: usize) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| {
            let nw: Vec<u8> = w
                .0
                .iter()
                .filter(|&&g| g as usize != z)
                .map(|&g| if g as usize > z { g - 1 } else { g })
                .collect();
            (Word(nw), c.clone())
        }))
    }

    /// f^z: right-multiply each degree-i component by z^{d−i}.
    pub fn homogenize(&self, z: usize) -> Result<NcPoly, FreeAlgError> {
        let d = self.degree().ok_or(FreeAlgError::ZeroInput)?;
        Ok(NcPoly::from_terms(self.terms.iter().map(|(w, c)| {
            let mut v = w.0.clone();
            v.extend(std::iter::repeat(z as u8).take(d - w.len()));
            (Word(v), c.clone())
        })))
    }

    /// f^∨: the top-degree component.
    pub fn wild_homogenize(&self) -> Result<NcPoly, FreeAlgError> {
        let d = self.degree().ok_or(FreeAlgError::ZeroInput)?;
        Ok(self.component(d))
    }

    /// Apply the graded substitution x_i ↦ Σ_j phi[i][j] x_j.
    pub fn substitute(&self, phi: &Matrix) -> NcPoly {
        let images: Vec<NcPoly> = phi
            .iter()
            .map(|row| NcPoly::from_terms(row.iter().enumerate().map(|(j, c)| (Word::letter(j), c.clone()))))
            .collect();
        let mut r = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut t = NcPoly::constant(c.clone());
            for &g in &w.0 {
                t = t.mul(&images[g as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    /// Rename generator indices through `map`.
    pub fn rename(&self, map: &[usize]) -> NcPoly {
        NcPoly::from_terms(
            self.terms.iter().map(|(w, c)| (Word(w.0.iter().map(|&g| map[g as usize] as u8).collect()), c.clone())),
        )
    }

    /// Parser-compatible text, leading term first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = if c.is_rational() {
                c.re() < &num_rational::BigRational::from_integer(0.into())
            } else {
                c.re() == &num_rational::BigRational::from_integer(0.into())
                    && c.irr() < &num_rational::BigRational::from_integer(0.into())
            };
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&w.render(names));
            } else {
                out.push_str(&format!("{}*{}", mag, w.render(names)));
            }
        }
        out
    }
}

/// Display helper binding a polynomial to generator names.
pub struct Named<'a>(pub &'a NcPoly, pub &'a [String]);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.render(self.1))
    }
}
