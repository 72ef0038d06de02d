//! Finite-dimensional algebras by structure constants, Frobenius test and
//! classification of four-dimensional Frobenius algebras.

use std::fmt;

use thiserror::Error;

use crate::freealg::{NcPoly, Word};
use crate::geometry::elim::{self, CommPoly};
use crate::linalg::{self, Matrix, Vector};
use crate::rewrite::Engine;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinDimError {
    #[error("not finite-dimensional within word-length bound {0}")]
    NotFiniteDimensionalWithinBound(usize),
    #[error("expected a 4-dimensional algebra, got dimension {0}")]
    NotFourDimensional(usize),
    #[error("algebra admits no nondegenerate Frobenius form")]
    NotFrobenius,
    #[error("invariant signature matches no reference class: {0}")]
    SignatureUnmatched(String),
    #[error("structure constants violate {0}")]
    BadStructure(String),
    #[error("singular basis change")]
    SingularMatrix,
}

/// Structure constants c[a][b] = coordinates of e_a·e_b, plus the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub labels: Vec<String>,
    pub consts: Vec<Vec<Vector>>,
    pub unit: Vector,
}

impl FiniteAlgebra {
    /// Validates unit and associativity laws exactly.
    pub fn new(labels: Vec<String>, consts: Vec<Vec<Vector>>, unit: Vector) -> Result<FiniteAlgebra, FinDimError> {
        let a = FiniteAlgebra { labels, consts, unit };
        a.check_laws()?;
        Ok(a)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis_vector(&self, a: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[a] = Scalar::one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = xa * yb;
                for (o, c) in out.iter_mut().zip(&self.consts[a][b]) {
                    if !c.is_zero() {
                        *o += &(&f * c);
                    }
                }
            }
        }
        out
    }

    pub fn check_laws(&self) -> Result<(), FinDimError> {
        let n = self.dim();
        for a in 0..n {
            let e = self.basis_vector(a);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(FinDimError::BadStructure(format!("unit law at {}", self.labels[a])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = &self.consts[a][b];
                for c in 0..n {
                    let ec = self.basis_vector(c);
                    let l = self.mul(ab, &ec);
                    let r = self.mul(&self.basis_vector(a), &self.consts[b][c]);
                    if l != r {
                        return Err(FinDimError::BadStructure(format!(
                            "associativity at ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Left multiplication by x as a matrix acting on column vectors.
    pub fn left_mult(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|b| self.mul(x, &self.basis_vector(b))).collect();
        linalg::transpose(&cols)
    }

    pub fn trace_of_left(&self, x: &[Scalar]) -> Scalar {
        let m = self.left_mult(x);
        let mut t = Scalar::zero();
        for (i, row) in m.iter().enumerate() {
            t += &row[i];
        }
        t
    }

    /// New basis f_i = Σ_j p[i][j] e_j.
    pub fn change_basis(&self, p: &Matrix) -> Result<FiniteAlgebra, FinDimError> {
        let inv = linalg::inverse(p).ok_or(FinDimError::SingularMatrix)?;
        let n = self.dim();
        let to_new = |v: &Vector| -> Vector {
            // v = Σ_j v_j e_j = Σ_i w_i f_i  ⇒  w = v·P^{-1}
            (0..n)
                .map(|i| {
                    let mut s = Scalar::zero();
                    for (j, vj) in v.iter().enumerate() {
                        if !vj.is_zero() {
                            s += &(vj * &inv[j][i]);
                        }
                    }
                    s
                })
                .collect()
        };
        let consts = (0..n).map(|a| (0..n).map(|b| to_new(&self.mul(&p[a], &p[b]))).collect()).collect();
        let labels = (0..n).map(|i| format!("f{i}")).collect();
        Ok(FiniteAlgebra { labels, consts, unit: to_new(&self.unit) })
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|a| (0..n).all(|b| self.consts[a][b] == self.consts[b][a]))
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("basis: {}\n", self.labels.join(", ")));
        s.push_str(&format!("unit: {}\n", self.render_vec(&self.unit)));
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                s.push_str(&format!("{} * {} = {}\n", self.labels[a], self.labels[b], self.render_vec(&self.consts[a][b])));
            }
        }
        s
    }

    pub fn render_vec(&self, v: &[Scalar]) -> String {
        let parts: Vec<String> = v
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { l.clone() } else { format!("{c}*{l}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Materialize k⟨gens⟩/(relations) by completing the (inhomogeneous)
/// relations with overlaps up to word length `bound`.
pub fn from_presentation(names: &[String], relations: &[NcPoly], bound: usize) -> Result<FiniteAlgebra, FinDimError> {
    let n = names.len();
    let mut engine = Engine::new();
    let complete = engine.run(relations.iter().filter(|r| !r.is_zero()).cloned().collect(), bound);
    if !complete {
        return Err(FinDimError::NotFiniteDimensionalWithinBound(bound));
    }
    // normal words, extended letter by letter
    let mut basis: Vec<Word> = Vec::new();
    let mut level: Vec<Word> = if engine.is_reducible(&[]) { vec![] } else { vec![Word::empty()] };
    let mut len = 0;
    while !level.is_empty() {
        if len > bound {
            return Err(FinDimError::NotFiniteDimensionalWithinBound(bound));
        }
        basis.extend(level.iter().cloned());
        let mut next = Vec::new();
        for w in &level {
            for g in 0..n as u8 {
                let mut v = w.0.clone();
                v.push(g);
                if !engine.suffix_reducible(&v) {
                    next.push(Word(v));
                }
            }
        }
        level = next;
        len += 1;
    }
    let idx = |w: &Word| basis.iter().position(|b| b == w);
    let coords = |p: &NcPoly| -> Vector {
        let mut v = vec![Scalar::zero(); basis.len()];
        for (w, c) in &p.terms {
            v[idx(w).expect("normal word in basis")] = c.clone();
        }
        v
    };
    let consts = basis
        .iter()
        .map(|a| basis.iter().map(|b| coords(&engine.reduce(&NcPoly::monomial(a.concat(b), Scalar::one())))).collect())
        .collect();
    let unit = coords(&engine.reduce(&NcPoly::one()));
    let labels = basis.iter().map(|w| if w.is_empty() { "1".to_string() } else { w.render(names) }).collect();
    FiniteAlgebra::new(labels, consts, unit)
}

/// Frobenius test: a functional φ with det(φ(e_a e_b)) ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusWitness {
    pub frobenius: bool,
    pub functional: Option<Vector>,
}

pub fn is_frobenius(a: &FiniteAlgebra) -> FrobeniusWitness {
    let n = a.dim();
    let gram: Vec<Vec<CommPoly>> = (0..n)
        .map(|x| (0..n).map(|y| CommPoly::linear(&a.consts[x][y])).collect())
        .collect();
    let det = elim::poly_det(&gram, n);
    if det.is_zero() {
        return FrobeniusWitness { frobenius: false, functional: None };
    }
    // a nonzero polynomial of degree ≤ n does not vanish on all of {0..n}^n
    let mut point = vec![0i64; n];
    loop {
        let phi: Vector = point.iter().map(|&k| Scalar::int(k)).collect();
        if !det.eval(&phi).is_zero() {
            return FrobeniusWitness { frobenius: true, functional: Some(phi) };
        }
        let mut i = 0;
        loop {
            if i == n {
                unreachable!("grid exhausted for a nonzero polynomial");
            }
            point[i] += 1;
            if point[i] <= n as i64 {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// Base-change invariant data used for classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub dim: usize,
    pub commutative: bool,
    pub center_dim: usize,
    pub dim_j: usize,
    pub dim_j2: usize,
    pub dim_j3: usize,
    /// dim Z(A/J): number of simple blocks over the algebraic closure when
    /// every block is a matrix algebra.
    pub quotient_center_dim: usize,
    /// Rank of the squaring form J/J² → J² when dim J² = 1.
    pub squaring_rank: Option<usize>,
    /// λ + 1/λ when uv = λ·vu on isotropic directions u, v of J/J².
    pub lambda_sum: Option<Scalar>,
}

fn span_products(a: &FiniteAlgebra, xs: &[Vector], ys: &[Vector]) -> Vec<Vector> {
    let mut v = Vec::new();
    for x in xs {
        for y in ys {
            v.push(a.mul(x, y));
        }
    }
    linalg::row_basis(&v)
}

/// Basis of the Jacobson radical (trace-form criterion, char 0).
pub fn radical(a: &FiniteAlgebra) -> Vec<Vector> {
    let n = a.dim();
    // T[c][b] = tr L_{e_b e_c}; x ∈ J iff Σ_b x_b T[c][b] = 0 for all c
    let t: Matrix = (0..n).map(|c| (0..n).map(|b| a.trace_of_left(&a.consts[b][c])).collect()).collect();
    linalg::row_basis(&linalg::kernel(&t, n))
}

pub fn invariants(a: &FiniteAlgebra) -> Invariants {
    let n = a.dim();
    let e: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let commutative = a.is_commutative();
    let center = {
        let mut rows = Vec::new();
        for b in 0..n {
            // row block for commutator with e_b, as a function of x
            for out in 0..n {
                rows.push((0..n).map(|x| &a.consts[x][b][out] - &a.consts[b][x][out]).collect::<Vector>());
            }
        }
        linalg::kernel(&rows, n).len()
    };
    let j = radical(a);
    let j2 = if j.is_empty() { vec![] } else { span_products(a, &j, &j) };
    let j3 = if j2.is_empty() { vec![] } else { span_products(a, &j2, &j) };
    // functionals vanishing on J
    let annihilators: Vec<Vector> = if j.is_empty() { linalg::identity(n) } else { linalg::kernel(&j, n) };
    let quotient_center_dim = {
        let mut rows = Vec::new();
        for eb in &e {
            for phi in &annihilators {
                rows.push(
                    (0..n)
                        .map(|x| {
                            let xb = a.mul(&e[x], eb);
                            let bx = a.mul(eb, &e[x]);
                            let mut s = Scalar::zero();
                            for k in 0..n {
                                s += &(&phi[k] * &(&xb[k] - &bx[k]));
                            }
                            s
                        })
                        .collect::<Vector>(),
                );
            }
        }
        linalg::kernel(&rows, n).len() - j.len()
    };
    let (squaring_rank, lambda_sum) = squaring_data(a, &j, &j2);
    Invariants {
        dim: n,
        commutative,
        center_dim: center,
        dim_j: j.len(),
        dim_j2: j2.len(),
        dim_j3: j3.len(),
        quotient_center_dim,
        squaring_rank,
        lambda_sum,
    }
}

/// For dim J = 3, dim J² = 1: the bilinear form B(a, b) = ab on a complement
/// of J² in J, valued in the line J².
fn squaring_data(a: &FiniteAlgebra, j: &[Vector], j2: &[Vector]) -> (Option<usize>, Option<Scalar>) {
    if j.len() != 3 || j2.len() != 1 {
        return (None, None);
    }
    let t = &j2[0];
    // extend J² to a basis of J greedily; B does not depend on the choice
    // because J·J² ⊆ J³ = 0
    let mut all = j2.to_vec();
    let mut comp = Vec::new();
    for v in j {
        if !linalg::in_span(&all, v) {
            all.push(v.clone());
            comp.push(v.clone());
        }
    }
    if comp.len() != 2 {
        return (None, None);
    }
    let p = t.iter().position(|c| !c.is_zero()).unwrap();
    let coord = |v: &Vector| -> Scalar { &v[p] * &t[p].inv().unwrap() };
    let b: Matrix = comp.iter().map(|x| comp.iter().map(|y| coord(&a.mul(x, y))).collect()).collect();
    let half = Scalar::frac(1, 2);
    let s: Matrix =
        (0..2).map(|i| (0..2).map(|k| &(&b[i][k] + &b[k][i]) * &half).collect()).collect();
    let rank = linalg::rank(&s);
    let det_b = linalg::determinant(&b);
    let det_s = linalg::determinant(&s);
    let sum = if rank == 2 && !det_b.is_zero() {
        Some(&(&(&Scalar::int(4) * &det_s) * &det_b.inv().unwrap()) - &Scalar::int(2))
    } else {
        None
    };
    (Some(rank), sum)
}

/// Isomorphism classes of four-dimensional Frobenius algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    K4,
    U2xK2,
    U2xU2,
    U3xK,
    U4,
    U2V2Comm,
    M2,
    BClass,
    CClass,
    DClass,
    EClass,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::K4 => "K4",
            ClassLabel::U2xK2 => "U2xK2",
            ClassLabel::U2xU2 => "U2xU2",
            ClassLabel::U3xK => "U3xK",
            ClassLabel::U4 => "U4",
            ClassLabel::U2V2Comm => "U2V2-comm",
            ClassLabel::M2 => "M2",
            ClassLabel::BClass => "B-class",
            ClassLabel::CClass => "C-class",
            ClassLabel::DClass => "D-class",
            ClassLabel::EClass => "E-class",
        }
    }

    pub fn parse(s: &str) -> Option<ClassLabel> {
        ClassLabel::all().into_iter().find(|c| c.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn all() -> [ClassLabel; 11] {
        use ClassLabel::*;
        [K4, U2xK2, U2xU2, U3xK, U4, U2V2Comm, M2, BClass, CClass, DClass, EClass]
    }

    /// The representative algebra as printed in the classification.
    pub fn description(&self) -> &'static str {
        match self {
            ClassLabel::K4 => "k^4",
            ClassLabel::U2xK2 => "k[u]/(u^2) x k^2",
            ClassLabel::U2xU2 => "k[u]/(u^2) x k[u]/(u^2)",
            ClassLabel::U3xK => "k[u]/(u^3) x k",
            ClassLabel::U4 => "k[u]/(u^4)",
            ClassLabel::U2V2Comm => "k[u,v]/(u^2,v^2)",
            ClassLabel::M2 => "M_2(k)",
            ClassLabel::BClass => "k_{-1}[u,v]/(u^2-1,v^2)",
            ClassLabel::CClass => "k_{-1}[u,v]/(u^2+uv,v^2)",
            ClassLabel::DClass => "k_{-1}[u,v]/(u^2,v^2)",
            ClassLabel::EClass => "k_lambda[u,v]/(u^2,v^2)",
        }
    }
}

/// The unordered pair {λ, 1/λ}, known through s = λ + 1/λ and split when
/// the roots of t² − s t + 1 lie in the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPair {
    pub sum: Scalar,
    pub values: Option<(Scalar, Scalar)>,
}

impl LambdaPair {
    pub fn from_sum(sum: Scalar, field: FieldSpec) -> LambdaPair {
        let coeffs = vec![Scalar::one(), -&sum, Scalar::one()];
        let (roots, _) = elim::roots_in_field(&coeffs, field);
        let values = match roots.len() {
            2 => Some((roots[0].clone(), roots[1].clone())),
            1 => Some((roots[0].clone(), roots[0].clone())),
            _ => None,
        };
        LambdaPair { sum, values }
    }

    /// Whether μ is one of the two values.
    pub fn contains(&self, mu: &Scalar) -> bool {
        match mu.inv() {
            Some(inv) => &(mu + &inv) == &self.sum,
            None => false,
        }
    }
}

impl fmt::Display for LambdaPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.values {
            Some((a, b)) => write!(f, "{{{a}, {b}}}"),
            None => write!(f, "roots of t^2 - ({}) t + 1", self.sum),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusClass {
    pub label: ClassLabel,
    pub lambda: Option<LambdaPair>,
}

impl fmt::Display for FrobeniusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lambda {
            Some(l) => write!(f, "{} lambda {}", self.label.name(), l),
            None => write!(f, "{}", self.label.name()),
        }
    }
}

fn field_of(a: &FiniteAlgebra) -> FieldSpec {
    a.consts
        .iter()
        .flatten()
        .flatten()
        .chain(a.unit.iter())
        .fold(FieldSpec::Rationals, |f, c| f.join(c.field()).unwrap_or(f))
}

pub fn classify(a: &FiniteAlgebra) -> Result<FrobeniusClass, FinDimError> {
    if a.dim() != 4 {
        return Err(FinDimError::NotFourDimensional(a.dim()));
    }
    if !is_frobenius(a).frobenius {
        return Err(FinDimError::NotFrobenius);
    }
    let inv = invariants(a);
    let label = match (inv.commutative, inv.dim_j, inv.dim_j2, inv.dim_j3) {
        (true, 0, _, _) => ClassLabel::K4,
        (true, 1, 0, _) => ClassLabel::U2xK2,
        (true, 2, 0, _) => ClassLabel::U2xU2,
        (true, 2, 1, 0) => ClassLabel::U3xK,
        (true, 3, 2, 1) => ClassLabel::U4,
        (true, 3, 1, 0) => ClassLabel::U2V2Comm,
        (false, 0, _, _) if inv.center_dim == 1 => ClassLabel::M2,
        (false, 2, 0, _) if inv.quotient_center_dim == 2 => ClassLabel::BClass,
        (false, 3, 1, 0) => match inv.squaring_rank {
            Some(0) => ClassLabel::DClass,
            Some(1) => ClassLabel::CClass,
            Some(2) => ClassLabel::EClass,
            _ => return Err(FinDimError::SignatureUnmatched(format!("{inv:?}"))),
        },
        _ => return Err(FinDimError::SignatureUnmatched(format!("{inv:?}"))),
    };
    let lambda = match label {
        ClassLabel::EClass => inv.lambda_sum.map(|s| LambdaPair::from_sum(s, field_of(a))),
        _ => None,
    };
    Ok(FrobeniusClass { label, lambda })
}
