//! Central, normal and regular elements.

use std::fmt;

use thiserror::Error;

use crate::freealg::{Ambient, NcPoly, Word};
use crate::galgebra::{times_one_minus_t_pow, AlgebraError, GradedAlgebra, Presentation};
use crate::geometry::elim::{self, CommPoly, Solutions};
use crate::linalg::{self, Matrix, Vector};
use crate::quadratic::{self, QuadraticPresentation};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementsError {
    #[error("not normal: {0}")]
    NotNormal(String),
    #[error("element is zero in the algebra")]
    ZeroElement,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} needs truncation at least {1}")]
    DegreeExceedsTruncation(usize, usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regularity::Yes => "yes",
            Regularity::No => "no",
            Regularity::Unknown => "unknown",
        })
    }
}

/// Witness that `w` is normal: x_i·w = w·ν(x_i) with ν(x_i) = Σ_j nu[i][j] x_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalCertificate {
    pub w: NcPoly,
    pub degree: usize,
    pub nu: Matrix,
    pub regular: Regularity,
    pub central: bool,
}

impl NormalCertificate {
    pub fn render(&self, names: &[String]) -> String {
        let rows: Vec<String> = self
            .nu
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!(
            "w = {}; central = {}; regular = {}; nu = [{}]",
            self.w.render(names),
            self.central,
            self.regular,
            rows.join("; ")
        )
    }
}

fn check_degree(a: &GradedAlgebra, d: usize) -> Result<(), ElementsError> {
    if d + 1 > a.truncation() {
        return Err(ElementsError::DegreeExceedsTruncation(d, d + 1));
    }
    Ok(())
}

/// Basis of Z(A)_d in reduced echelon form.
pub fn center_degree(a: &GradedAlgebra, d: usize) -> Result<Vec<NcPoly>, ElementsError> {
    check_degree(a, d)?;
    let basis = a.basis(d).to_vec();
    let target = a.dim(d + 1);
    let n = a.n();
    let mut m = linalg::zeros(n * target, basis.len());
    for (k, b) in basis.iter().enumerate() {
        let bp = NcPoly::monomial(b.clone(), Scalar::one());
        for i in 0..n {
            let x = NcPoly::var(i);
            let c = a.coords(&x.mul(&bp).sub(&bp.mul(&x)), d + 1)?;
            for (r, v) in c.into_iter().enumerate() {
                m[i * target + r][k] = v;
            }
        }
    }
    let ker = linalg::kernel(&m, basis.len());
    Ok(linalg::row_basis(&ker).iter().map(|v| a.from_coords(v, d)).collect())
}

/// Decide whether `w` is normal; `regular` is left as Unknown.
pub fn normalize_check(a: &GradedAlgebra, w: &NcPoly) -> Result<NormalCertificate, ElementsError> {
    if !w.is_homogeneous() {
        return Err(ElementsError::NotHomogeneous);
    }
    let d = w.degree().ok_or(ElementsError::ZeroElement)?;
    check_degree(a, d)?;
    let w = a.nf(w)?;
    if w.is_zero() {
        return Err(ElementsError::ZeroElement);
    }
    let n = a.n();
    let mut left: Vec<Vector> = Vec::with_capacity(n); // x_i w
    let mut right: Vec<Vector> = Vec::with_capacity(n); // w x_j
    for i in 0..n {
        let x = NcPoly::var(i);
        left.push(a.coords(&x.mul(&w), d + 1)?);
        right.push(a.coords(&w.mul(&x), d + 1)?);
    }
    let central = left == right;
    // columns w x_j, right-hand sides x_i w
    let cols = linalg::transpose(&right);
    let rhs = linalg::transpose(&left);
    let sol = linalg::solve_linear(&cols, &rhs).map_err(|e| ElementsError::NotNormal(e.to_string()))?;
    let mut nu = Vec::with_capacity(n);
    for (i, s) in sol.solutions.into_iter().enumerate() {
        match s {
            Some(v) => nu.push(v),
            None => return Err(ElementsError::NotNormal(format!("x{i}·w is not in w·A_1"))),
        }
    }
    // mirror inclusion w x_j ∈ A_1 w
    for (j, r) in right.iter().enumerate() {
        if !linalg::in_span(&left, r) {
            return Err(ElementsError::NotNormal(format!("w·x{j} is not in A_1·w")));
        }
    }
    let nu = if central { linalg::identity(n) } else { nu };
    Ok(NormalCertificate { w, degree: d, nu, regular: Regularity::Unknown, central })
}

/// Right multiplication by `w` (or left, when `left` is set) as a map A_k → A_{k+d}.
fn mult_matrix(a: &GradedAlgebra, w: &NcPoly, k: usize, d: usize, left: bool) -> Result<Matrix, ElementsError> {
    let basis = a.basis(k).to_vec();
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let bp = NcPoly::monomial(b, Scalar::one());
        let p = if left { w.mul(&bp) } else { bp.mul(w) };
        cols.push(a.coords(&p, k + d)?);
    }
    if cols.is_empty() {
        return Ok(vec![]);
    }
    Ok(linalg::transpose(&cols))
}

/// Outcome of the dual-quotient certificate for degree-1 elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualQuotientCertificate {
    /// The single relation a x² + b xy + c yx + d y² of (A/(w))^!.
    pub relation: NcPoly,
    pub names: Vec<String>,
    pub holds: bool,
}

/// For A with n = 3 and w of degree 1: eliminate one generator through w,
/// dualize A/(w) on the remaining two, and test for one relation with ad ≠ bc.
pub fn dual_quotient_certificate(a: &GradedAlgebra, w: &NcPoly) -> Result<Option<DualQuotientCertificate>, ElementsError> {
    let n = a.n();
    if w.degree() != Some(1) || n != 3 {
        return Ok(None);
    }
    let coeffs: Vec<Scalar> = (0..n).map(|i| w.coeff(&Word::letter(i))).collect();
    let Some(p) = coeffs.iter().rposition(|c| !c.is_zero()) else { return Err(ElementsError::ZeroElement) };
    let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    // x_p = −Σ_{i≠p} (a_i/a_p) x_i, then relabel the kept generators 0, 1
    let inv = coeffs[p].inv().unwrap();
    let mut phi = linalg::zeros(n, 2);
    for (slot, &i) in keep.iter().enumerate() {
        phi[i][slot] = Scalar::one();
        phi[p][slot] = -(&coeffs[i] * &inv);
    }
    let mut rels = Vec::new();
    for r in &a.presentation.relations {
        if r.degree() != Some(2) {
            return Ok(None);
        }
        let s = r.substitute(&phi);
        if !s.is_zero() {
            rels.push(s);
        }
    }
    let names: Vec<String> = keep.iter().map(|&i| a.names()[i].clone()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ambient = Ambient::new(&refs, a.presentation.ambient.field);
    let q = QuadraticPresentation::new(Presentation { ambient, relations: rels, label: None })
        .map_err(|e| ElementsError::NotNormal(e.to_string()))?;
    let dual = quadratic::quadratic_dual(&q).relation_polys();
    if dual.len() != 1 {
        return Ok(Some(DualQuotientCertificate { relation: NcPoly::zero(), names, holds: false }));
    }
    let r = dual[0].clone();
    let c = |ix: &[usize]| r.coeff(&Word::from_indices(ix));
    let holds = &c(&[0, 0]) * &c(&[1, 1]) != &c(&[0, 1]) * &c(&[1, 0]);
    Ok(Some(DualQuotientCertificate { relation: r, names, holds }))
}

/// Whether a conic-dual style algebra: three generators, dims 1, 3, 4.
fn looks_like_conic_dual(a: &GradedAlgebra) -> bool {
    a.n() == 3 && a.hilbert.0.len() > 2 && a.hilbert.0[1] == 3 && a.hilbert.0[2] == 4
}

/// Regularity of a normal element through the truncation.
pub fn regularity_check(a: &GradedAlgebra, cert: &NormalCertificate) -> Result<Regularity, ElementsError> {
    let d = cert.degree;
    let top = a.truncation();
    for k in 0..=top.saturating_sub(d) {
        if a.dim(k) == 0 {
            continue;
        }
        for left in [true, false] {
            let m = mult_matrix(a, &cert.w, k, d, left)?;
            if a.dim(k + d) == 0 || linalg::rank(&m) < a.dim(k) {
                return Ok(Regularity::No);
            }
        }
    }
    let q = a.quotient(&cert.w, top)?;
    let expect = times_one_minus_t_pow(&a.hilbert.as_i64(), d);
    if q.hilbert.as_i64() != expect {
        return Ok(Regularity::Unknown);
    }
    if linalg::determinant(&cert.nu).is_zero() {
        return Ok(Regularity::Unknown);
    }
    if d == 1 && looks_like_conic_dual(a) {
        return Ok(match dual_quotient_certificate(a, &cert.w)? {
            Some(c) if c.holds => Regularity::Yes,
            _ => Regularity::Unknown,
        });
    }
    Ok(Regularity::Yes)
}

/// normalize_check followed by regularity_check.
pub fn certify(a: &GradedAlgebra, w: &NcPoly) -> Result<NormalCertificate, ElementsError> {
    let mut cert = normalize_check(a, w)?;
    cert.regular = regularity_check(a, &cert)?;
    Ok(cert)
}

/// Result of the degree-1 normal element search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSearch {
    pub found: Vec<NormalCertificate>,
    /// False when some chart left a positive-dimensional family, so that
    /// not every solution over the field could be listed. Solutions that
    /// only exist in a larger field are mentioned in `notes`.
    pub complete: bool,
    pub notes: Vec<String>,
}

impl NormalSearch {
    pub fn regular(&self) -> impl Iterator<Item = &NormalCertificate> {
        self.found.iter().filter(|c| c.regular == Regularity::Yes)
    }
}

fn minors(rows: &[Vec<CommPoly>], k: usize, nvars: usize) -> Vec<CommPoly> {
    // k×k minors of a rows×k matrix (all column-sets are the full k columns)
    let m = rows.len();
    let mut out = Vec::new();
    if m < k {
        return out;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let sub: Vec<Vec<CommPoly>> = pick.iter().map(|&r| rows[r].clone()).collect();
        let det = elim::poly_det(&sub, nvars);
        if !det.is_zero() {
            out.push(det);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] < m - k + i {
                pick[i] += 1;
                for j in i + 1..k {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All normal elements w = Σ a_i x_i whose products w·x_j are independent,
/// up to scale (first nonzero coordinate 1), over `field`.
pub fn find_normal_degree1(a: &GradedAlgebra, field: FieldSpec) -> Result<NormalSearch, ElementsError> {
    check_degree(a, 1)?;
    let n = a.n();
    let m = a.dim(2);
    let mut found: Vec<NormalCertificate> = Vec::new();
    let mut notes = Vec::new();
    let mut complete = true;
    if m < n {
        return Ok(NormalSearch { found, complete, notes });
    }
    // products x_i x_j as coordinate vectors in A_2
    let mut prod = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            prod[i][j] = a.coords(&NcPoly::word(&[i, j]), 2)?;
        }
    }
    for chart in 0..n {
        let free: Vec<usize> = (chart + 1..n).collect();
        let nv = free.len();
        // coordinate a_k as a polynomial in the chart variables
        let coord = |k: usize| -> CommPoly {
            if k == chart {
                CommPoly::constant(nv, Scalar::one())
            } else if let Some(p) = free.iter().position(|&f| f == k) {
                CommPoly::var(nv, p)
            } else {
                CommPoly::zero(nv)
            }
        };
        // R[r][j] = coords of w x_j, L[r][i] = coords of x_i w
        let entry = |r: usize, fix: usize, right: bool| -> CommPoly {
            let mut s = CommPoly::zero(nv);
            for k in 0..n {
                let c = if right { &prod[k][fix][r] } else { &prod[fix][k][r] };
                if !c.is_zero() {
                    s = s.add(&coord(k).scale(c));
                }
            }
            s
        };
        let rmat: Vec<Vec<CommPoly>> = (0..m).map(|r| (0..n).map(|j| entry(r, j, true)).collect()).collect();
        let mut eqs = Vec::new();
        for i in 0..n {
            let bordered: Vec<Vec<CommPoly>> = (0..m)
                .map(|r| {
                    let mut row = rmat[r].clone();
                    row.push(entry(r, i, false));
                    row
                })
                .collect();
            eqs.extend(minors(&bordered, n + 1, nv));
        }
        let nondeg = minors(&rmat, n, nv);
        if nondeg.is_empty() {
            continue;
        }
        let mut candidates: Vec<Vec<Scalar>> = Vec::new();
        let sol = if nv == 0 {
            let ok = eqs.iter().all(|e| e.eval(&[]).is_zero());
            Solutions::Finite(if ok { vec![vec![]] } else { vec![] })
        } else if eqs.is_empty() {
            Solutions::PositiveDimensional
        } else {
            elim::eliminate_small(&eqs, field).map_err(|e| ElementsError::NotNormal(e.to_string()))?
        };
        match sol {
            Solutions::Finite(ps) => candidates.extend(ps),
            Solutions::Residue { points, eliminant } => {
                notes.push(format!("chart {chart}: further solutions outside {field}: {eliminant}"));
                candidates.extend(points);
            }
            Solutions::PositiveDimensional => {
                // restrict to the nondegenerate locus, one minor at a time
                for r in &nondeg {
                    let mut sys: Vec<CommPoly> = eqs.iter().map(|e| lift(e, nv + 1)).collect();
                    let t = CommPoly::var(nv + 1, nv);
                    sys.push(t.mul(&lift(r, nv + 1)).sub(&CommPoly::constant(nv + 1, Scalar::one())));
                    match elim::eliminate_small(&sys, field).map_err(|e| ElementsError::NotNormal(e.to_string()))? {
                        Solutions::Finite(ps) => candidates.extend(ps.into_iter().map(|mut p| {
                            p.pop();
                            p
                        })),
                        Solutions::Residue { points, eliminant } => {
                            notes.push(format!("chart {chart}: further solutions outside {field}: {eliminant}"));
                            candidates.extend(points.into_iter().map(|mut p| {
                                p.pop();
                                p
                            }));
                        }
                        Solutions::PositiveDimensional => match never_injective(a, &coord, &eqs, r, nv, field)? {
                            Some(k) => notes.push(format!(
                                "chart {chart}: positive-dimensional family of normal elements, none injective from degree {k}"
                            )),
                            None => {
                                complete = false;
                                notes.push(format!("chart {chart}: positive-dimensional family of normal elements"));
                            }
                        },
                    }
                }
            }
        }
        for pt in candidates {
            let mut coeffs = vec![Scalar::zero(); n];
            coeffs[chart] = Scalar::one();
            for (p, &k) in free.iter().enumerate() {
                coeffs[k] = pt[p].clone();
            }
            let w = NcPoly::from_terms(coeffs.into_iter().enumerate().map(|(k, c)| (Word::letter(k), c)));
            if found.iter().any(|c| c.w == w) {
                continue;
            }
            match certify(a, &w) {
                Ok(c) => found.push(c),
                Err(ElementsError::NotNormal(_)) | Err(ElementsError::ZeroElement) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(NormalSearch { found, complete, notes })
}

/// All central regular elements of degree 1 up to scale. Z(A)_1 is a
/// linear space; each projective chart of it either is a single element,
/// which gets certified, or is shown to contain no regular element.
pub fn find_central_degree1(a: &GradedAlgebra, field: FieldSpec) -> Result<NormalSearch, ElementsError> {
    check_degree(a, 1)?;
    let z = center_degree(a, 1)?;
    let n = a.n();
    let m = z.len();
    let mut found = Vec::new();
    let mut notes = Vec::new();
    let mut complete = true;
    let zc: Vec<Vec<Scalar>> = z.iter().map(|b| (0..n).map(|i| b.coeff(&Word::letter(i))).collect()).collect();
    for chart in 0..m {
        let nv = m - chart - 1;
        if nv == 0 {
            let c = certify(a, &z[chart])?;
            if c.regular != Regularity::No {
                found.push(c);
            }
            continue;
        }
        let coord = |i: usize| -> CommPoly {
            let mut s = CommPoly::constant(nv, zc[chart][i].clone());
            for p in 0..nv {
                let c = &zc[chart + 1 + p][i];
                if !c.is_zero() {
                    s = s.add(&CommPoly::var(nv, p).scale(c));
                }
            }
            s
        };
        let one = CommPoly::constant(nv, Scalar::one());
        match never_injective(a, &coord, &[], &one, nv, field)? {
            Some(k) => notes.push(format!("chart {chart}: no central element is injective from degree {k}")),
            None => {
                complete = false;
                notes.push(format!("chart {chart}: positive-dimensional family of central elements"));
            }
        }
    }
    Ok(NormalSearch { found, complete, notes })
}

/// Matrix of u ↦ w·u (or u·w) from A_k to A_{k+1} for the generic
/// w = Σ coord(i) x_i, rows indexed by the basis of A_{k+1}.
fn generic_mult(
    a: &GradedAlgebra,
    coord: &dyn Fn(usize) -> CommPoly,
    nv: usize,
    k: usize,
    left: bool,
) -> Result<Vec<Vec<CommPoly>>, ElementsError> {
    let mut rows = vec![vec![CommPoly::zero(nv); a.dim(k)]; a.dim(k + 1)];
    for (j, b) in a.basis(k).iter().enumerate() {
        let bp = NcPoly::monomial(b.clone(), Scalar::one());
        for i in 0..a.n() {
            let x = NcPoly::word(&[i]);
            let p = if left { x.mul(&bp) } else { bp.mul(&x) };
            let c = a.coords(&p, k + 1)?;
            let ci = coord(i);
            for (r, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    rows[r][j] = rows[r][j].add(&ci.scale(v));
                }
            }
        }
    }
    Ok(rows)
}

/// For a family V(eqs) \ V(r) of normal elements, find a degree k such
/// that multiplication by every member, on one side, fails to be injective
/// on A_k. Such members are not regular.
fn never_injective(
    a: &GradedAlgebra,
    coord: &dyn Fn(usize) -> CommPoly,
    eqs: &[CommPoly],
    r: &CommPoly,
    nv: usize,
    field: FieldSpec,
) -> Result<Option<usize>, ElementsError> {
    let t = CommPoly::var(nv + 1, nv);
    let one = CommPoly::constant(nv + 1, Scalar::one());
    let vanishes = |m: &CommPoly| -> bool {
        let mut sys: Vec<CommPoly> = eqs.iter().map(|e| lift(e, nv + 1)).collect();
        sys.push(t.mul(&lift(&r.mul(m), nv + 1)).sub(&one));
        matches!(elim::eliminate_small(&sys, field), Ok(Solutions::Finite(ps)) if ps.is_empty())
    };
    for k in 1..a.truncation() {
        if a.dim(k) == 0 {
            continue;
        }
        for left in [true, false] {
            let m = generic_mult(a, coord, nv, k, left)?;
            if minors(&m, a.dim(k), nv).iter().all(|d| vanishes(d)) {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}

fn lift(p: &CommPoly, nvars: usize) -> CommPoly {
    let images: Vec<CommPoly> = (0..p.nvars).map(|i| CommPoly::var(nvars, i)).collect();
    p.compose(&images, nvars)
}
