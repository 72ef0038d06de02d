//! C(A) = A^![(f^!)^{-1}]_0 and the maps ∇, Δ between conics and pencils.

use thiserror::Error;

use crate::elements::{self, ElementsError, NormalCertificate, Regularity};
use crate::findim::FiniteAlgebra;
use crate::freealg::NcPoly;
use crate::galgebra::{AlgebraError, GradedAlgebra, Presentation};
use crate::homog::{self, HomogError, RelationSequence};
use crate::quadratic::{self, QuadraticError, QuadraticPresentation};
use crate::scalar::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmapError {
    #[error("no regular certificate: {0}")]
    NoRegularCertificate(String),
    #[error("no central regular degree-1 element in the dual")]
    NoCentralCertificate,
    #[error("input is not a conic presentation: {0}")]
    NotConic(String),
    #[error("sequence is not strongly regular normal")]
    NotStronglyRegular,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Elements(#[from] ElementsError),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
    #[error(transparent)]
    Homog(#[from] HomogError),
}

/// Which route produced C(A).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CRoute {
    /// Localization of A^! at a degree-1 regular normal element.
    DegreeOne(NormalCertificate),
    /// Localization of A^! at the dual element f^! of degree 2.
    DualElement(NormalCertificate),
}

#[derive(Clone, Debug)]
pub struct CResult {
    pub algebra: FiniteAlgebra,
    pub route: CRoute,
    pub dual: GradedAlgebra,
}

/// Truncation used for duals: localization needs degree 4.
fn dual_truncation() -> usize {
    crate::galgebra::default_max_deg().max(4)
}

/// A^! built from a quadratic presentation.
pub fn dual_algebra(a: &Presentation) -> Result<GradedAlgebra, CmapError> {
    let q = QuadraticPresentation::new(a.clone())?;
    Ok(GradedAlgebra::build(quadratic::quadratic_dual(&q).presentation, dual_truncation())?)
}

/// Prefer central certificates, then the smallest w.
fn pick(found: &[NormalCertificate]) -> Option<NormalCertificate> {
    let mut regular: Vec<&NormalCertificate> = found.iter().filter(|c| c.regular == Regularity::Yes).collect();
    regular.sort_by(|a, b| b.central.cmp(&a.central).then_with(|| a.w.leading().unwrap().0.cmp(b.w.leading().unwrap().0)));
    regular.first().map(|c| (*c).clone())
}

/// C(A) for a conic whose last relation is f and whose other relations form S.
pub fn compute_c(a: &Presentation, field: FieldSpec) -> Result<CResult, CmapError> {
    if a.n() != 3 || a.relations.len() != 4 {
        return Err(CmapError::NotConic(format!("{} generators, {} relations", a.n(), a.relations.len())));
    }
    let dual = dual_algebra(a)?;
    let search = elements::find_normal_degree1(&dual, field)?;
    if let Some(cert) = pick(&search.found) {
        let algebra = homog::dehomogenize_algebra(&dual, &cert)?;
        return Ok(CResult { algebra, route: CRoute::DegreeOne(cert), dual });
    }
    // general route through f^!
    let s = Presentation { ambient: a.ambient.clone(), relations: a.relations[..3].to_vec(), label: None };
    let f = a.relations[3].clone();
    let f_dual = quadratic::dual_element(&QuadraticPresentation::new(s)?, &f)?;
    let cert = match elements::certify(&dual, &f_dual) {
        Ok(c) => c,
        Err(ElementsError::NotNormal(m)) => return Err(CmapError::NoRegularCertificate(format!("f^! not normal: {m}"))),
        Err(e) => return Err(e.into()),
    };
    if cert.regular != Regularity::Yes {
        return Err(CmapError::NoRegularCertificate(format!("f^! = {} has regularity {}", cert.w.render(dual.names()), cert.regular)));
    }
    let algebra = homog::localize(&dual, &cert.w, &cert.nu, 1)?;
    Ok(CResult { algebra, route: CRoute::DualElement(cert), dual })
}

/// ∇(E) = ℋ^z(S, F)^! for a pencil E = S/I_F.
pub fn nabla(s: &Presentation, f: &RelationSequence) -> Result<Presentation, CmapError> {
    let sa = GradedAlgebra::build(s.clone(), dual_truncation())?;
    if !homog::is_strongly_regular_normal(&sa, f)?.strongly_regular_normal() {
        return Err(CmapError::NotStronglyRegular);
    }
    let h = homog::homogenize_presentation(s, f, "z")?;
    let q = QuadraticPresentation::new(h)?;
    Ok(quadratic::quadratic_dual(&q).presentation)
}

/// Δ(A) = 𝒟_z(A^!) at a central regular degree-1 element z of A^!.
pub fn delta(a: &Presentation, field: FieldSpec) -> Result<(FiniteAlgebra, NormalCertificate), CmapError> {
    let dual = dual_algebra(a)?;
    let search = elements::find_normal_degree1(&dual, field)?;
    let cert = search
        .found
        .iter()
        .filter(|c| c.central && c.regular == Regularity::Yes)
        .min_by(|a, b| a.w.leading().unwrap().0.cmp(b.w.leading().unwrap().0))
        .cloned()
        .ok_or(CmapError::NoCentralCertificate)?;
    Ok((homog::dehomogenize_algebra(&dual, &cert)?, cert))
}

/// The relations of 𝒟_z(A^!) re-homogenized at z, with z last; spans
/// should agree with A^! in the same coordinates.
pub fn rehomogenized_dual(a: &Presentation, w: &NcPoly) -> Result<(Vec<NcPoly>, Vec<NcPoly>), CmapError> {
    let dual = dual_algebra(a)?;
    let n = dual.n();
    let phi = homog::put_last(w, n).ok_or(CmapError::Algebra(AlgebraError::ZeroElement))?;
    let moved: Vec<NcPoly> = dual.presentation.relations.iter().map(|r| r.substitute(&phi)).collect();
    let (_, rels) = homog::dehomogenized_relations(&dual, w).ok_or(CmapError::Algebra(AlgebraError::ZeroElement))?;
    let z = n - 1;
    let mut back: Vec<NcPoly> = rels.iter().map(|r| r.homogenize(z).expect("nonzero")).collect();
    for i in 0..z {
        back.push(NcPoly::word(&[i, z]).sub(&NcPoly::word(&[z, i])));
    }
    Ok((moved, back))
}
