//! Presented graded algebras k⟨x₁,…,xₙ⟩/I with Hilbert prefixes.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::elements::{self, ElementsError};
use crate::freealg::{Ambient, MonomialOrder, NcPoly, Word};
use crate::rewrite::{self, RewriteError, RewriteSystem};
use crate::scalar::Scalar;

/// Default truncation degree; `NCCONIC_MAX_DEG` overrides it.
pub const DEFAULT_MAX_DEG: usize = 6;

pub fn default_max_deg() -> usize {
    std::env::var("NCCONIC_MAX_DEG").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEG)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("relation is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("truncation degree {0} too small (need at least {1})")]
    TruncationTooSmall(usize, usize),
    #[error("prefix agrees to degree {0} but that does not certify the claim")]
    InconclusiveTruncation(usize),
}

/// Generators plus homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub ambient: Ambient,
    pub relations: Vec<NcPoly>,
    pub label: Option<String>,
}

impl Presentation {
    /// Drops zero and duplicate relations; rejects inhomogeneous ones.
    pub fn new(ambient: Ambient, relations: Vec<NcPoly>) -> Result<Presentation, AlgebraError> {
        let mut rels: Vec<NcPoly> = Vec::new();
        for r in relations {
            if r.is_zero() || rels.contains(&r) {
                continue;
            }
            if !r.is_homogeneous() {
                return Err(AlgebraError::NotHomogeneous(r.render(&ambient.names)));
            }
            rels.push(r);
        }
        Ok(Presentation { ambient, relations: rels, label: None })
    }

    pub fn with_label(mut self, label: &str) -> Presentation {
        self.label = Some(label.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    pub fn names(&self) -> &[String] {
        &self.ambient.names
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().filter_map(NcPoly::degree).max().unwrap_or(0)
    }
}

/// Graded dimensions dims[d] = dim A_d for d = 0..=D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPrefix(pub Vec<usize>);

impl HilbertPrefix {
    /// Smallest d₀ with dims[d₀] = dims[d₀+1] = dims[d₀+2], and that value.
    pub fn stable_from(&self) -> Option<(usize, usize)> {
        let v = &self.0;
        (0..v.len().saturating_sub(2)).find(|&d| v[d] == v[d + 1] && v[d] == v[d + 2]).map(|d| (d, v[d]))
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }
}

impl fmt::Display for HilbertPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Product of truncated power series.
pub fn series_mul(a: &[i64], b: &[i64], len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        for (j, &y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Prefix of (1 − t^d)·H.
pub fn times_one_minus_t_pow(h: &[i64], d: usize) -> Vec<i64> {
    let mut f = vec![0i64; d + 1];
    f[0] = 1;
    f[d] -= 1;
    series_mul(&f, h, h.len())
}

/// A presentation together with its truncated rewrite system and bases.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pub presentation: Presentation,
    pub rs: RewriteSystem,
    pub hilbert: HilbertPrefix,
    bases: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl GradedAlgebra {
    pub fn build(p: Presentation, d: usize) -> Result<GradedAlgebra, AlgebraError> {
        let order = MonomialOrder::natural(p.n());
        GradedAlgebra::build_with_order(p, d, &order)
    }

    pub fn build_with_order(p: Presentation, d: usize, order: &MonomialOrder) -> Result<GradedAlgebra, AlgebraError> {
        let need = p.max_relation_degree().max(1);
        if d < need {
            return Err(AlgebraError::TruncationTooSmall(d, need));
        }
        let rs = rewrite::complete(&p.relations, p.n(), d, order)?;
        let bases = rs.graded_bases(d)?;
        let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
        let hilbert = HilbertPrefix(bases.iter().map(Vec::len).collect());
        Ok(GradedAlgebra { presentation: p, rs, hilbert, bases, index })
    }

    pub fn n(&self) -> usize {
        self.presentation.n()
    }

    pub fn names(&self) -> &[String] {
        self.presentation.names()
    }

    pub fn truncation(&self) -> usize {
        self.rs.confluent_up_to
    }

    pub fn dim(&self, d: usize) -> usize {
        self.hilbert.0[d]
    }

    pub fn basis(&self, d: usize) -> &[Word] {
        &self.bases[d]
    }

    pub fn nf(&self, f: &NcPoly) -> Result<NcPoly, AlgebraError> {
        Ok(self.rs.normal_form(f)?)
    }

    pub fn mul(&self, f: &NcPoly, g: &NcPoly) -> Result<NcPoly, AlgebraError> {
        self.nf(&f.mul(g))
    }

    /// Coordinates of the degree-`d` part of NF(f) in the reduced-word basis.
    pub fn coords(&self, f: &NcPoly, d: usize) -> Result<Vec<Scalar>, AlgebraError> {
        if d > self.truncation() {
            return Err(RewriteError::DegreeExceedsTruncation(d, self.truncation()).into());
        }
        let r = self.nf(f)?;
        let mut v = vec![Scalar::zero(); self.dim(d)];
        for (w, c) in &r.terms {
            if w.len() == d {
                v[self.index[d][w]] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &[Scalar], d: usize) -> NcPoly {
        NcPoly::from_terms(self.bases[d].iter().cloned().zip(v.iter().cloned()))
    }

    /// A/(f) rebuilt to degree `d`.
    pub fn quotient(&self, f: &NcPoly, d: usize) -> Result<GradedAlgebra, AlgebraError> {
        self.quotient_many(std::slice::from_ref(f), d)
    }

    pub fn quotient_many(&self, fs: &[NcPoly], d: usize) -> Result<GradedAlgebra, AlgebraError> {
        let mut rels = self.presentation.relations.clone();
        for f in fs {
            if f.is_zero() {
                return Err(AlgebraError::ZeroElement);
            }
            rels.push(f.clone());
        }
        let p = Presentation::new(self.presentation.ambient.clone(), rels)?;
        GradedAlgebra::build_with_order(p, d, &self.rs.order)
    }

    /// Hilbert-series test of a homogeneous sequence, element by element.
    pub fn is_regular_normal_sequence(&self, fs: &[NcPoly]) -> Result<SequenceReport, AlgebraError> {
        let d = self.truncation();
        let mut current = self.clone();
        let mut evidence = vec![self.hilbert.clone()];
        let mut verdicts = Vec::new();
        for f in fs {
            if f.is_zero() {
                return Err(AlgebraError::ZeroElement);
            }
            if !f.is_homogeneous() {
                return Err(AlgebraError::NotHomogeneous(f.render(self.names())));
            }
            let deg = f.degree().unwrap();
            if deg + 1 > d {
                return Err(AlgebraError::TruncationTooSmall(d, deg + 1));
            }
            let normal = match elements::normalize_check(&current, f) {
                Ok(_) => true,
                Err(ElementsError::NotNormal(_)) => false,
                // zero in the current quotient: normal, never regular
                Err(ElementsError::ZeroElement) => true,
                Err(ElementsError::Algebra(e)) => return Err(e),
                Err(e) => return Err(AlgebraError::NotHomogeneous(e.to_string())),
            };
            let next = current.quotient(f, d)?;
            let expect = times_one_minus_t_pow(&current.hilbert.as_i64(), deg);
            let regular = normal && next.hilbert.as_i64() == expect;
            verdicts.push(ElementVerdict { normal, regular });
            evidence.push(next.hilbert.clone());
            current = next;
        }
        Ok(SequenceReport { verdicts, evidence })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementVerdict {
    pub normal: bool,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceReport {
    pub verdicts: Vec<ElementVerdict>,
    /// Hilbert prefixes of S, S/(f₁), S/(f₁,f₂), …
    pub evidence: Vec<HilbertPrefix>,
}

impl SequenceReport {
    pub fn all_regular_normal(&self) -> bool {
        self.verdicts.iter().all(|v| v.normal && v.regular)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::Ambient;

    fn w(ix: &[usize]) -> NcPoly {
        NcPoly::word(ix)
    }

    fn anti(i: usize, j: usize) -> NcPoly {
        w(&[i, j]).add(&w(&[j, i]))
    }

    fn comm(i: usize, j: usize) -> NcPoly {
        w(&[i, j]).sub(&w(&[j, i]))
    }

    fn skew() -> Presentation {
        Presentation::new(Ambient::xyz(), vec![anti(1, 2), anti(2, 0), anti(0, 1)]).unwrap()
    }

    #[test]
    fn skew_polynomial_ring_dims() {
        let a = GradedAlgebra::build(skew(), 4).unwrap();
        assert_eq!(a.hilbert.0, vec![1, 3, 6, 10, 15]);
        let c = a.quotient(&w(&[0, 0]), 4).unwrap();
        assert_eq!(c.hilbert.0, vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn squares_form_a_regular_normal_sequence() {
        let a = GradedAlgebra::build(skew(), 5).unwrap();
        let rep = a.is_regular_normal_sequence(&[w(&[0, 0]), w(&[1, 1]), w(&[2, 2])]).unwrap();
        assert!(rep.all_regular_normal());
        assert_eq!(rep.evidence[3].0, vec![1, 3, 3, 1, 0, 0]);
    }

    #[test]
    fn repeated_square_is_not_regular() {
        let p = Presentation::new(Ambient::new(&["x", "y"], crate::scalar::FieldSpec::Rationals), vec![comm(0, 1)]).unwrap();
        let a = GradedAlgebra::build(p, 5).unwrap();
        let rep = a.is_regular_normal_sequence(&[w(&[0, 0]), w(&[0, 0])]).unwrap();
        assert!(rep.verdicts[0].regular);
        assert!(!rep.verdicts[1].regular);
    }

    #[test]
    fn commutative_square_quotient() {
        let p = Presentation::new(Ambient::xyz(), vec![comm(0, 1), comm(1, 2), comm(2, 0)]).unwrap();
        let a = GradedAlgebra::build(p, 5).unwrap();
        let rep = a.is_regular_normal_sequence(&[w(&[0, 0])]).unwrap();
        assert!(rep.all_regular_normal());
        assert_eq!(rep.evidence[1].0, vec![1, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn stabilization_detection() {
        assert_eq!(HilbertPrefix(vec![1, 3, 4, 4, 4]).stable_from(), Some((2, 4)));
        assert_eq!(HilbertPrefix(vec![1, 3, 5, 7, 9]).stable_from(), None);
    }
}
