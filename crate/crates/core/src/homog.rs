//! Homogenization of relation sequences, ~s/~t transformations and
//! localization at regular normal elements.

use thiserror::Error;

use crate::elements::{NormalCertificate, Regularity};
use crate::findim::{FinDimError, FiniteAlgebra};
use crate::freealg::{Ambient, NcPoly, Word};
use crate::galgebra::{AlgebraError, GradedAlgebra, Presentation, SequenceReport};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogError {
    #[error("zero element in a relation sequence")]
    ZeroInput,
    #[error("singular transformation matrix")]
    SingularMatrix,
    #[error("Hilbert prefix {0} does not stabilize within the truncation")]
    NotStabilized(String),
    #[error("certificate is not a regular normal element")]
    NotRegularCertificate,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    FinDim(#[from] FinDimError),
}

/// An ordered sequence of nonzero, possibly inhomogeneous elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSequence {
    pub ambient: Ambient,
    pub elems: Vec<NcPoly>,
}

impl RelationSequence {
    pub fn new(ambient: Ambient, elems: Vec<NcPoly>) -> Result<RelationSequence, HomogError> {
        if elems.iter().any(NcPoly::is_zero) {
            return Err(HomogError::ZeroInput);
        }
        Ok(RelationSequence { ambient, elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// F_z: delete generator z from every element.
    pub fn dehomogenize(&self, z: usize) -> RelationSequence {
        let mut names = self.ambient.names.clone();
        names.remove(z);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        RelationSequence {
            ambient: Ambient::new(&refs, self.ambient.field),
            elems: self.elems.iter().map(|f| f.dehomogenize(z)).filter(|f| !f.is_zero()).collect(),
        }
    }
}

fn with_z(ambient: &Ambient, z_name: &str) -> Ambient {
    let mut names: Vec<&str> = ambient.names.iter().map(String::as_str).collect();
    names.push(z_name);
    Ambient::new(&names, ambient.field)
}

/// F^z, with the new generator appended after the existing ones.
pub fn homogenize_seq(f: &RelationSequence, z_name: &str) -> RelationSequence {
    let z = f.ambient.n();
    RelationSequence {
        ambient: with_z(&f.ambient, z_name),
        elems: f.elems.iter().map(|p| p.homogenize(z).expect("nonzero")).collect(),
    }
}

/// ℋ^z(S, F) = S[z]/(F^z): S's relations, [x_i, z], and the homogenized F.
pub fn homogenize_presentation(s: &Presentation, f: &RelationSequence, z_name: &str) -> Result<Presentation, HomogError> {
    let n = s.n();
    let mut rels = s.relations.clone();
    for i in 0..n {
        rels.push(NcPoly::word(&[i, n]).sub(&NcPoly::word(&[n, i])));
    }
    rels.extend(homogenize_seq(f, z_name).elems);
    Ok(Presentation::new(with_z(&s.ambient, z_name), rels)?)
}

/// F^∨ elementwise.
pub fn wild_homogenize_seq(f: &RelationSequence) -> RelationSequence {
    RelationSequence {
        ambient: f.ambient.clone(),
        elems: f.elems.iter().map(|p| p.wild_homogenize().expect("nonzero")).collect(),
    }
}

/// 𝒯(S, F) = S/(F^∨).
pub fn tau_quotient(s: &Presentation, f: &RelationSequence) -> Result<Presentation, HomogError> {
    let mut rels = s.relations.clone();
    rels.extend(wild_homogenize_seq(f).elems);
    Ok(Presentation::new(s.ambient.clone(), rels)?)
}

/// Evidence for strong regularity of F in S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongRegularity {
    /// F^∨ tested in S.
    pub top_forms: SequenceReport,
    /// (F^z, z) tested in S[z].
    pub homogenized: SequenceReport,
}

impl StrongRegularity {
    pub fn strongly_regular_normal(&self) -> bool {
        self.top_forms.all_regular_normal() && self.homogenized.all_regular_normal()
    }
}

/// Check F^∨ in S and (F^z, z) in S[z] with z central.
pub fn is_strongly_regular_normal(s: &GradedAlgebra, f: &RelationSequence) -> Result<StrongRegularity, HomogError> {
    let d = s.truncation();
    let top_forms = s.is_regular_normal_sequence(&wild_homogenize_seq(f).elems)?;
    let sz = homogenize_presentation(&s.presentation, &RelationSequence { ambient: f.ambient.clone(), elems: vec![] }, "z")?;
    let sz = GradedAlgebra::build(sz, d)?;
    let mut seq = homogenize_seq(f, "z").elems;
    seq.push(NcPoly::var(s.n()));
    let homogenized = sz.is_regular_normal_sequence(&seq)?;
    Ok(StrongRegularity { top_forms, homogenized })
}

/// ~t then ~s: f'_i = φ(f_i), then f''_j = Σ_i alpha[i][j]·f'_i.
pub fn apply_st(f: &RelationSequence, alpha: &Matrix, phi: &Matrix) -> Result<RelationSequence, HomogError> {
    if linalg::determinant(alpha).is_zero() || linalg::determinant(phi).is_zero() {
        return Err(HomogError::SingularMatrix);
    }
    let twisted: Vec<NcPoly> = f.elems.iter().map(|p| p.substitute(phi)).collect();
    let m = twisted.len();
    let elems = (0..m)
        .map(|j| {
            let mut acc = NcPoly::zero();
            for (i, p) in twisted.iter().enumerate() {
                acc = acc.add(&p.scale(&alpha[i][j]));
            }
            acc
        })
        .collect();
    RelationSequence::new(f.ambient.clone(), elems)
}

/// A[w^{-1}]_0 as structure constants on the basis A_{eN}·w^{-N}, where
/// (f w^{-N})(g w^{-N}) = f ν^N(g) w^{-2N}.
pub fn localize(a: &GradedAlgebra, w: &NcPoly, nu: &Matrix, big_n: usize) -> Result<FiniteAlgebra, HomogError> {
    let e = w.degree().ok_or(HomogError::ZeroInput)?;
    let lo = e * big_n;
    let hi = 2 * lo;
    if hi > a.truncation() {
        return Err(AlgebraError::TruncationTooSmall(a.truncation(), hi).into());
    }
    if a.dim(lo) != a.dim(hi) {
        return Err(HomogError::NotStabilized(a.hilbert.to_string()));
    }
    let basis: Vec<Word> = a.basis(lo).to_vec();
    let wn = w.pow(big_n);
    // m ↦ NF(m·w^N) must be a bijection A_{eN} → A_{2eN}
    let cols: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|b| a.coords(&NcPoly::monomial(b.clone(), Scalar::one()).mul(&wn), hi))
        .collect::<Result<_, _>>()?;
    let m = linalg::transpose(&cols);
    let minv = linalg::inverse(&m).ok_or(HomogError::NotRegularCertificate)?;
    let mut nu_n = linalg::identity(a.n());
    for _ in 0..big_n {
        nu_n = linalg::mat_mul(&nu_n, nu);
    }
    let to_local = |p: &NcPoly| -> Result<Vec<Scalar>, HomogError> { Ok(linalg::mat_vec(&minv, &a.coords(p, hi)?)) };
    let mut consts = Vec::with_capacity(basis.len());
    for f in &basis {
        let fp = NcPoly::monomial(f.clone(), Scalar::one());
        let mut row = Vec::with_capacity(basis.len());
        for g in &basis {
            let g_twisted = NcPoly::monomial(g.clone(), Scalar::one()).substitute(&nu_n);
            row.push(to_local(&fp.mul(&g_twisted))?);
        }
        consts.push(row);
    }
    let unit = linalg::mat_vec(&minv, &a.coords(&wn.mul(&wn), hi)?);
    let labels = basis.iter().map(|b| b.render(a.names())).collect();
    Ok(FiniteAlgebra::new(labels, consts, unit)?)
}

/// 𝒟_w(A) for a degree-1 regular normal certificate.
pub fn dehomogenize_algebra(a: &GradedAlgebra, cert: &NormalCertificate) -> Result<FiniteAlgebra, HomogError> {
    if cert.regular != Regularity::Yes {
        return Err(HomogError::NotRegularCertificate);
    }
    let (d0, _) = a.hilbert.stable_from().ok_or_else(|| HomogError::NotStabilized(a.hilbert.to_string()))?;
    let big_n = d0.max(1).div_ceil(cert.degree);
    localize(a, &cert.w, &cert.nu, big_n)
}

/// Coordinates in which the degree-1 element `w` becomes the last generator:
/// returns φ with x_i ↦ Σ_j φ[i][j] y_j expressing old generators in new ones.
pub fn put_last(w: &NcPoly, n: usize) -> Option<Matrix> {
    let coeffs: Vec<Scalar> = (0..n).map(|i| w.coeff(&Word::letter(i))).collect();
    let p = coeffs.iter().rposition(|c| !c.is_zero())?;
    let inv = coeffs[p].inv().unwrap();
    // new generators: y_j = x_j for j < p, y_j = x_{j+1} for p ≤ j < n−1, y_{n−1} = w
    let old_to_new: Vec<Option<usize>> = (0..n).map(|i| if i == p { None } else if i < p { Some(i) } else { Some(i - 1) }).collect();
    let mut phi = linalg::zeros(n, n);
    for i in 0..n {
        match old_to_new[i] {
            Some(j) => phi[i][j] = Scalar::one(),
            None => {
                // x_p = (w − Σ_{k≠p} a_k x_k)/a_p
                phi[i][n - 1] = inv.clone();
                for k in 0..n {
                    if k != p {
                        phi[i][old_to_new[k].unwrap()] = -(&coeffs[k] * &inv);
                    }
                }
            }
        }
    }
    Some(phi)
}

/// The ungraded presentation A/(w − 1) with w moved to the last generator
/// and then deleted.
pub fn dehomogenized_relations(a: &GradedAlgebra, w: &NcPoly) -> Option<(Vec<String>, Vec<NcPoly>)> {
    let n = a.n();
    let phi = put_last(w, n)?;
    let rels: Vec<NcPoly> = a
        .presentation
        .relations
        .iter()
        .map(|r| r.substitute(&phi).dehomogenize(n - 1))
        .filter(|r| !r.is_zero())
        .collect();
    let coeffs_pivot = (0..n).rposition(|i| !w.coeff(&Word::letter(i)).is_zero())?;
    let names: Vec<String> = (0..n).filter(|&i| i != coeffs_pivot).map(|i| a.names()[i].clone()).collect();
    Some((names, rels))
}
