//! Point schemes (E_A, σ_A) of quadratic algebras on three generators.

pub mod elim;

use std::fmt;

use thiserror::Error;

use crate::freealg::NcPoly;
use crate::linalg;
use crate::scalar::{FieldSpec, Scalar};
use elim::{CommPoly, ElimError, Solutions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("relation is not purely quadratic: {0}")]
    NotQuadratic(String),
    #[error("point does not lie on the scheme")]
    PointNotOnScheme,
    #[error("expected relations in 3 generators")]
    WrongArity,
    #[error(transparent)]
    Elim(#[from] ElimError),
}

/// Projective point with first nonzero coordinate normalized to 1.
pub type Point = Vec<Scalar>;

pub fn normalize_point(p: &[Scalar]) -> Option<Point> {
    let k = p.iter().position(|c| !c.is_zero())?;
    let inv = p[k].inv().unwrap();
    Some(p.iter().map(|c| c * &inv).collect())
}

/// K with f_k = Σ_i x_i·K[i][k]; entries are linear forms in x, y, z.
pub fn k_matrix(relations: &[NcPoly], n: usize) -> Result<Vec<Vec<CommPoly>>, GeometryError> {
    let mut k = vec![vec![CommPoly::zero(n); relations.len()]; n];
    for (col, f) in relations.iter().enumerate() {
        for (w, c) in &f.terms {
            if w.len() != 2 {
                return Err(GeometryError::NotQuadratic(format!("{} terms of degree {}", f.terms.len(), w.len())));
            }
            let (i, j) = (w.0[0] as usize, w.0[1] as usize);
            if i >= n || j >= n {
                return Err(GeometryError::WrongArity);
            }
            k[i][col] = k[i][col].add(&CommPoly::var(n, j).scale(c));
        }
    }
    Ok(k)
}

/// The 3×3 minors of a 3×4 K, deleting column 3, 2, 1, 0 in turn. A square
/// K (the three relations of S alone) gives the single minor det K.
pub fn minors_ideal(k: &[Vec<CommPoly>]) -> Vec<CommPoly> {
    let n = k.len();
    let cols = if n == 0 { 0 } else { k[0].len() };
    let nvars = k.first().and_then(|r| r.first()).map(|p| p.nvars).unwrap_or(3);
    if cols == n {
        return vec![elim::poly_det(k, nvars)];
    }
    (0..cols)
        .rev()
        .map(|del| {
            let sub: Vec<Vec<CommPoly>> =
                k.iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != del).map(|(_, p)| p.clone()).collect()).collect();
            elim::poly_det(&sub, nvars)
        })
        .collect()
}

/// The image of `p` in the commutative polynomial ring on `n` variables.
pub fn commutative_image(p: &NcPoly, n: usize) -> CommPoly {
    let mut out = CommPoly::zero(n);
    for (w, c) in &p.terms {
        let mut e = vec![0u32; n];
        for &l in &w.0 {
            e[l as usize] += 1;
        }
        out.add_term(e, c);
    }
    out
}

/// σ(p): the common kernel of q ↦ f_k(p, q).
pub fn sigma_at(relations: &[NcPoly], p: &[Scalar]) -> Result<Option<Point>, GeometryError> {
    let n = p.len();
    let k = k_matrix(relations, n)?;
    if minors_ideal(&k).iter().any(|m| !m.eval(p).is_zero()) {
        return Err(GeometryError::PointNotOnScheme);
    }
    let mut m = linalg::zeros(relations.len(), n);
    for (row, f) in relations.iter().enumerate() {
        for (w, c) in &f.terms {
            let (i, j) = (w.0[0] as usize, w.0[1] as usize);
            m[row][j] += &(c * &p[i]);
        }
    }
    let ker = linalg::kernel(&m, n);
    Ok(if ker.len() == 1 { normalize_point(&ker[0]) } else { None })
}

/// Affine chart j: coordinate j set to 1, coordinates before it set to 0.
fn chart_images(chart: usize, n: usize, extra: usize) -> (Vec<CommPoly>, usize) {
    let nv = n - chart - 1 + extra;
    let images = (0..n)
        .map(|i| {
            if i < chart {
                CommPoly::zero(nv)
            } else if i == chart {
                CommPoly::constant(nv, Scalar::one())
            } else {
                CommPoly::var(nv, i - chart - 1)
            }
        })
        .collect();
    (images, nv)
}

fn chart_point(chart: usize, n: usize, sol: &[Scalar]) -> Point {
    (0..n)
        .map(|i| {
            if i < chart {
                Scalar::zero()
            } else if i == chart {
                Scalar::one()
            } else {
                sol[i - chart - 1].clone()
            }
        })
        .collect()
}

/// Projective zeros of homogeneous forms over `field`.
pub fn projective_zeros(forms: &[CommPoly], field: FieldSpec) -> Result<Solutions, GeometryError> {
    let n = forms.first().map(|f| f.nvars).unwrap_or(3);
    let mut points = Vec::new();
    let mut residue = None;
    for chart in 0..n {
        let (images, nv) = chart_images(chart, n, 0);
        let sys: Vec<CommPoly> = forms.iter().map(|f| f.compose(&images, nv)).collect();
        let sol = if nv == 0 {
            let ok = sys.iter().all(|f| f.is_zero());
            Solutions::Finite(if ok { vec![vec![]] } else { vec![] })
        } else {
            elim::eliminate_small(&sys, field)?
        };
        match sol {
            Solutions::PositiveDimensional => return Ok(Solutions::PositiveDimensional),
            Solutions::Finite(ps) => points.extend(ps.iter().map(|s| chart_point(chart, n, s))),
            Solutions::Residue { points: ps, eliminant } => {
                points.extend(ps.iter().map(|s| chart_point(chart, n, s)));
                residue.get_or_insert(eliminant);
            }
        }
    }
    Ok(match residue {
        None => Solutions::Finite(points),
        Some(eliminant) => Solutions::Residue { points, eliminant },
    })
}

/// Whether every projective zero of `forms` satisfies g = 0, by showing
/// forms ∪ {t·g − 1} has no solution in any chart.
pub fn zeros_contained_in(forms: &[CommPoly], g: &CommPoly, field: FieldSpec) -> Result<bool, GeometryError> {
    let n = g.nvars;
    for chart in 0..n {
        let (images, nv) = chart_images(chart, n, 1);
        let mut sys: Vec<CommPoly> = forms.iter().map(|f| f.compose(&images, nv)).collect();
        let t = CommPoly::var(nv, nv - 1);
        sys.push(t.mul(&g.compose(&images, nv)).sub(&CommPoly::constant(nv, Scalar::one())));
        match elim::eliminate_small(&sys, field)? {
            Solutions::Finite(ps) if ps.is_empty() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// (E_A, σ_A) either as finitely many points or as generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointScheme {
    Finite {
        points: Vec<Point>,
        /// sigma[i] = index of σ(points[i]); None when σ is not determined.
        sigma: Vec<Option<usize>>,
        /// False when some points need a larger field.
        complete: bool,
    },
    Generators(Vec<CommPoly>),
}

impl PointScheme {
    /// Cycle lengths of σ on a finite scheme, sorted.
    pub fn cycle_type(&self) -> Option<Vec<usize>> {
        let PointScheme::Finite { sigma, .. } = self else { return None };
        let mut seen = vec![false; sigma.len()];
        let mut out = Vec::new();
        for s in 0..sigma.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = sigma[cur]?;
            }
            if cur != s {
                return None;
            }
            out.push(len);
        }
        out.sort_unstable();
        Some(out)
    }
}

impl fmt::Display for PointScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointScheme::Finite { points, sigma, complete } => {
                writeln!(f, "finite: {} point(s){}", points.len(), if *complete { "" } else { " (incomplete over this field)" })?;
                for (i, p) in points.iter().enumerate() {
                    let s: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                    let image = sigma[i].map(|j| format!("p{j}")).unwrap_or_else(|| "?".into());
                    writeln!(f, "  p{i} = ({}) -> {image}", s.join(" : "))?;
                }
                Ok(())
            }
            PointScheme::Generators(gs) => {
                writeln!(f, "positive-dimensional; minors:")?;
                for g in gs {
                    writeln!(f, "  {}", g.render(&["x", "y", "z"]))?;
                }
                Ok(())
            }
        }
    }
}

/// Compute (E_A, σ_A) for four quadratic relations in three generators.
pub fn point_scheme(relations: &[NcPoly], field: FieldSpec) -> Result<PointScheme, GeometryError> {
    let k = k_matrix(relations, 3)?;
    let minors = minors_ideal(&k);
    let sol = projective_zeros(&minors, field)?;
    let (points, complete) = match sol {
        Solutions::PositiveDimensional => return Ok(PointScheme::Generators(minors)),
        Solutions::Finite(p) => (p, true),
        Solutions::Residue { points, .. } => (points, false),
    };
    let mut sigma = Vec::with_capacity(points.len());
    for p in &points {
        let image = sigma_at(relations, p)?;
        sigma.push(image.and_then(|q| points.iter().position(|r| *r == q)));
    }
    Ok(PointScheme::Finite { points, sigma, complete })
}

/// Whether three points are collinear.
pub fn collinear(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> bool {
    linalg::determinant(&vec![a.to_vec(), b.to_vec(), c.to_vec()]).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ix: &[usize]) -> NcPoly {
        NcPoly::word(ix)
    }
    fn anti(i: usize, j: usize) -> NcPoly {
        w(&[i, j]).add(&w(&[j, i]))
    }
    fn v(i: usize) -> CommPoly {
        CommPoly::var(3, i)
    }

    fn skew_x2() -> Vec<NcPoly> {
        vec![anti(1, 2), anti(2, 0), anti(0, 1), w(&[0, 0])]
    }

    #[test]
    fn worked_example_minors() {
        let k = k_matrix(&skew_x2(), 3).unwrap();
        let (x, y, z) = (v(0), v(1), v(2));
        assert_eq!(k[0], vec![CommPoly::zero(3), z.clone(), y.clone(), x.clone()]);
        let m = minors_ideal(&k);
        let two = Scalar::int(2);
        let m1 = Scalar::int(-1);
        assert_eq!(
            m,
            vec![
                x.mul(&y).mul(&z).scale(&two),
                x.pow(2).mul(&z),
                x.pow(2).mul(&y).scale(&m1),
                x.pow(3).scale(&m1)
            ]
        );
    }

    #[test]
    fn worked_example_sigma() {
        let c = Scalar::int(5);
        let q = sigma_at(&skew_x2(), &[Scalar::zero(), Scalar::one(), c.clone()]).unwrap().unwrap();
        assert_eq!(q, vec![Scalar::zero(), Scalar::one(), -c]);
        assert_eq!(
            sigma_at(&skew_x2(), &[Scalar::one(), Scalar::one(), Scalar::one()]),
            Err(GeometryError::PointNotOnScheme)
        );
    }

    #[test]
    fn single_relation_columns() {
        let k = k_matrix(&[w(&[0, 1])], 3).unwrap();
        assert_eq!(k[0][0], v(1));
        assert!(k[1][0].is_zero() && k[2][0].is_zero());
        let sq = w(&[0, 0]).add(&w(&[1, 1])).add(&w(&[2, 2]));
        let k = k_matrix(&[sq], 3).unwrap();
        assert_eq!((k[0][0].clone(), k[1][0].clone(), k[2][0].clone()), (v(0), v(1), v(2)));
    }

    #[test]
    fn line_scheme_is_contained_in_v_x() {
        let m = minors_ideal(&k_matrix(&skew_x2(), 3).unwrap());
        assert!(zeros_contained_in(&m, &v(0), FieldSpec::Rationals).unwrap());
        assert!(!zeros_contained_in(&m, &v(1), FieldSpec::Rationals).unwrap());
        assert_eq!(point_scheme(&skew_x2(), FieldSpec::Rationals).unwrap(), PointScheme::Generators(m));
    }
}
