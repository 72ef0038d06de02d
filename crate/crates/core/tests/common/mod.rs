#![allow(dead_code)]

use ncconic::freealg::{NcPoly, Word};
use ncconic::galgebra::{GradedAlgebra, Presentation};
use ncconic::linalg::{self, Vector};
use ncconic::parse::{self, PresentationFile};
use ncconic::scalar::Scalar;

pub fn file(text: &str) -> PresentationFile {
    parse::parse(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

/// A presentation in x, y, z over Q from relation strings.
pub fn xyz(rels: &[&str]) -> PresentationFile {
    over("Q", "x y z", rels)
}

pub fn over(field: &str, gens: &str, rels: &[&str]) -> PresentationFile {
    let mut text = format!("field: {field}\ngens: {gens}\n");
    for r in rels {
        text.push_str(&format!("rel: {r}\n"));
    }
    file(&text)
}

pub fn poly(f: &PresentationFile, text: &str) -> NcPoly {
    f.parse_poly(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

pub fn build(f: &PresentationFile, d: usize) -> GradedAlgebra {
    GradedAlgebra::build(f.presentation().unwrap(), d).unwrap()
}

pub fn pres(f: &PresentationFile) -> Presentation {
    f.presentation().unwrap()
}

pub fn q(n: i64) -> Scalar {
    Scalar::int(n)
}

/// All words of length d over n letters, in lexicographic index order.
pub fn words(n: usize, d: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..d {
        out = out
            .iter()
            .flat_map(|w| (0..n).map(move |i| w.concat(&Word::letter(i))))
            .collect();
    }
    out
}

fn coords_in(p: &NcPoly, basis: &[Word]) -> Vector {
    basis.iter().map(|w| p.coeff(w)).collect()
}

/// dim (k⟨x⟩/(R))_d by linear algebra in the free algebra: n^d minus the
/// rank of all products u·r·v of degree d. No rewriting involved.
pub fn brute_dim(rels: &[NcPoly], n: usize, d: usize) -> usize {
    let all = words(n, d);
    let mut rows = Vec::new();
    for r in rels {
        let e = r.degree().unwrap();
        if e > d {
            continue;
        }
        for left in 0..=d - e {
            for u in words(n, left) {
                for v in words(n, d - e - left) {
                    let up = NcPoly::monomial(u.clone(), Scalar::one());
                    let vp = NcPoly::monomial(v, Scalar::one());
                    rows.push(coords_in(&up.mul(r).mul(&vp), &all));
                }
            }
        }
    }
    all.len() - linalg::rank(&rows)
}

pub fn brute_dims(rels: &[NcPoly], n: usize, top: usize) -> Vec<usize> {
    (0..=top).map(|d| brute_dim(rels, n, d)).collect()
}

/// Whether two lists of homogeneous polynomials of degree d span the same
/// space, by coordinates over all words.
pub fn same_span(a: &[NcPoly], b: &[NcPoly], n: usize, d: usize) -> bool {
    let all = words(n, d);
    let va: Vec<Vector> = a.iter().map(|p| coords_in(p, &all)).collect();
    let vb: Vec<Vector> = b.iter().map(|p| coords_in(p, &all)).collect();
    linalg::same_span(&va, &vb)
}
