//! Quadratic duals, dual elements and the finite Koszul series identity.

use thiserror::Error;

use crate::freealg::{Ambient, NcPoly, Word};
use crate::galgebra::{series_mul, AlgebraError, GradedAlgebra, Presentation};
use crate::linalg::{self, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticError {
    #[error("relation of degree other than 2: {0}")]
    NotQuadratic(String),
    #[error("f lies in the span of the relations")]
    NotCodimensionOne,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A presentation with only degree-2 relations plus its relation space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation {
    pub presentation: Presentation,
    /// Independent rows in the x_i x_j basis, index i·n + j, reduced echelon form.
    pub w: Matrix,
}

/// Coordinates of a degree-2 polynomial in the n² word basis.
pub fn word_vector(f: &NcPoly, n: usize) -> Vector {
    let mut v = vec![Scalar::zero(); n * n];
    for (w, c) in &f.terms {
        v[w.0[0] as usize * n + w.0[1] as usize] = c.clone();
    }
    v
}

/// Inverse of [`word_vector`].
pub fn vector_poly(v: &[Scalar], n: usize) -> NcPoly {
    NcPoly::from_terms(v.iter().enumerate().map(|(k, c)| (Word::from_indices(&[k / n, k % n]), c.clone())))
}

/// Row-reduce so that pivots sit on the largest words, giving monic
/// polynomials with distinct leading words.
fn echelon_high(rows: &[Vector]) -> Vec<Vector> {
    if rows.is_empty() {
        return vec![];
    }
    let rev: Vec<Vector> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    linalg::row_basis(&rev).into_iter().map(|r| r.into_iter().rev().collect()).collect()
}

impl QuadraticPresentation {
    pub fn new(p: Presentation) -> Result<QuadraticPresentation, QuadraticError> {
        let n = p.n();
        let mut rows = Vec::new();
        for r in &p.relations {
            if r.degree() != Some(2) || !r.is_homogeneous() {
                return Err(QuadraticError::NotQuadratic(r.render(p.names())));
            }
            rows.push(word_vector(r, n));
        }
        let w = echelon_high(&rows);
        Ok(QuadraticPresentation { presentation: p, w })
    }

    pub fn n(&self) -> usize {
        self.presentation.n()
    }

    /// Orthogonal complement W^⊥ under ⟨x_i x_j, x_k* x_l*⟩ = δ_ik δ_jl.
    pub fn perp(&self) -> Vec<Vector> {
        let n = self.n();
        if self.w.is_empty() {
            return linalg::identity(n * n);
        }
        echelon_high(&linalg::kernel(&self.w, n * n))
    }

    pub fn relation_polys(&self) -> Vec<NcPoly> {
        self.w.iter().map(|r| vector_poly(r, self.n())).collect()
    }
}

/// A^! = T(V*)/(W^⊥) on the same generator names.
pub fn quadratic_dual(q: &QuadraticPresentation) -> QuadraticPresentation {
    let n = q.n();
    let rels: Vec<NcPoly> = q.perp().iter().map(|r| vector_poly(r, n)).collect();
    let p = Presentation { ambient: q.presentation.ambient.clone(), relations: rels, label: None };
    QuadraticPresentation::new(p).expect("dual relations are quadratic")
}

/// The element f^! with A^!/(f^!) = S^! for A = S/(f), monic.
pub fn dual_element(s: &QuadraticPresentation, f: &NcPoly) -> Result<NcPoly, QuadraticError> {
    let n = s.n();
    if f.degree() != Some(2) || !f.is_homogeneous() {
        return Err(QuadraticError::NotQuadratic(f.render(s.presentation.names())));
    }
    let mut rels = s.presentation.relations.clone();
    rels.push(f.clone());
    let a = QuadraticPresentation::new(Presentation { ambient: s.presentation.ambient.clone(), relations: rels, label: None })?;
    if a.w.len() != s.w.len() + 1 {
        return Err(QuadraticError::NotCodimensionOne);
    }
    let perp_s = s.perp();
    let perp_a = a.perp();
    debug_assert_eq!(perp_a.len() + 1, perp_s.len());
    let v = perp_s.iter().find(|v| !linalg::in_span(&perp_a, v)).ok_or(QuadraticError::NotCodimensionOne)?;
    // canonical representative: clear the pivot words of W_A^⊥
    let mut rows = perp_a.clone();
    rows.push(v.clone());
    let basis = echelon_high(&rows);
    let pivot = |r: &Vector| r.iter().rposition(|c| !c.is_zero());
    let a_pivots: Vec<usize> = perp_a.iter().filter_map(pivot).collect();
    let mut rem = v.clone();
    for r in &perp_a {
        let p = pivot(r).unwrap();
        if !rem[p].is_zero() {
            let c = rem[p].clone();
            for (x, y) in rem.iter_mut().zip(r) {
                *x -= &(&c * y);
            }
        }
    }
    debug_assert!(a_pivots.iter().all(|&p| rem[p].is_zero()));
    debug_assert_eq!(basis.len(), perp_s.len());
    Ok(vector_poly(&rem, n).monic())
}

/// Whether H_{A^!}(t)·H_A(−t) = 1 through degree `d`.
pub fn koszul_series_check(a: &GradedAlgebra, d: usize) -> Result<bool, QuadraticError> {
    let q = QuadraticPresentation::new(a.presentation.clone())?;
    let dual = GradedAlgebra::build(quadratic_dual(&q).presentation, d)?;
    let ha = a.hilbert.as_i64();
    if ha.len() < d + 1 {
        return Err(AlgebraError::TruncationTooSmall(ha.len() - 1, d).into());
    }
    let hneg: Vec<i64> = ha.iter().take(d + 1).enumerate().map(|(k, &x)| if k % 2 == 1 { -x } else { x }).collect();
    let prod = series_mul(&dual.hilbert.as_i64(), &hneg, d + 1);
    Ok(prod.iter().enumerate().all(|(k, &x)| x == i64::from(k == 0)))
}

/// Dual relation space of a quadratic algebra given by its relation polys,
/// convenience for callers holding an ambient.
pub fn dual_relations(ambient: &Ambient, relations: &[NcPoly]) -> Result<Vec<NcPoly>, QuadraticError> {
    let p = Presentation { ambient: ambient.clone(), relations: relations.to_vec(), label: None };
    Ok(quadratic_dual(&QuadraticPresentation::new(p)?).relation_polys())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn w(ix: &[usize]) -> NcPoly {
        NcPoly::word(ix)
    }

    fn span_eq(a: &[NcPoly], b: &[NcPoly], n: usize) -> bool {
        let va: Vec<Vector> = a.iter().map(|p| word_vector(p, n)).collect();
        let vb: Vec<Vector> = b.iter().map(|p| word_vector(p, n)).collect();
        linalg::same_span(&va, &vb)
    }

    #[test]
    fn free_algebra_dual_is_everything() {
        let p = Presentation::new(Ambient::new(&["x", "y"], FieldSpec::Rationals), vec![]).unwrap();
        let q = QuadraticPresentation::new(p).unwrap();
        assert_eq!(quadratic_dual(&q).w.len(), 4);
    }

    #[test]
    fn skew_lambda_dual() {
        // k_λ[x,y]/(x²) has dual k_{−1/λ}[x,y]/(y²), λ = 3
        let lam = Scalar::int(3);
        let r = w(&[0, 1]).sub(&w(&[1, 0]).scale(&lam));
        let p = Presentation::new(Ambient::new(&["x", "y"], FieldSpec::Rationals), vec![r.clone(), w(&[0, 0])]).unwrap();
        let dual = quadratic_dual(&QuadraticPresentation::new(p).unwrap()).relation_polys();
        let expect = vec![w(&[0, 1]).add(&w(&[1, 0]).scale(&lam.inv().unwrap())), w(&[1, 1])];
        assert!(span_eq(&dual, &expect, 2));

        let s = QuadraticPresentation::new(
            Presentation::new(Ambient::new(&["x", "y"], FieldSpec::Rationals), vec![r]).unwrap(),
        )
        .unwrap();
        assert_eq!(dual_element(&s, &w(&[0, 0])).unwrap(), w(&[0, 0]));
        assert_eq!(dual_element(&s, &w(&[0, 1]).sub(&w(&[1, 0]).scale(&lam))), Err(QuadraticError::NotCodimensionOne));
    }
}
