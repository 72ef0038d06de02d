//! Randomized invariants.

mod common;

use common::*;
use ncconic::findim::{self, FiniteAlgebra};
use ncconic::freealg::{NcPoly, Word};
use ncconic::galgebra::{GradedAlgebra, Presentation};
use ncconic::linalg::{self, Matrix};
use ncconic::parse;
use ncconic::quadratic::{self, QuadraticPresentation};
use ncconic::scalar::{FieldSpec, Scalar};
use proptest::prelude::*;
use std::sync::OnceLock;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

/// a + b·√d with small rational parts.
fn scalar_in(d: i64) -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=4, -9i64..=9, 1i64..=4).prop_map(move |(a, p, b, r)| {
        let root = FieldSpec::quadratic(d).unwrap().sqrt_d().unwrap();
        &Scalar::frac(a, p) + &(&Scalar::frac(b, r) * &root)
    })
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6).prop_map(Scalar::int)
}

/// Sparse polynomial in `n` letters with words of length in `lens`.
fn ncpoly(n: usize, lens: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((prop::collection::vec(0..n, lens), -4i64..=4), 0..6).prop_map(|terms| {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(Word::from_indices(&w), &Scalar::int(c));
        }
        p
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(rational(), cols), rows)
}

fn conic() -> &'static GradedAlgebra {
    static A: OnceLock<GradedAlgebra> = OnceLock::new();
    A.get_or_init(|| build(&ncconic::dataset::find_conic_row("F1").unwrap(), 5))
}

fn models() -> &'static Vec<(String, FiniteAlgebra)> {
    static M: OnceLock<Vec<(String, FiniteAlgebra)>> = OnceLock::new();
    M.get_or_init(|| {
        ncconic::dataset::table("2")
            .unwrap()
            .rows()
            .unwrap()
            .into_iter()
            .filter_map(|row| {
                let mut rels = row.rels.clone();
                rels.extend(row.elems.iter().cloned());
                let a = findim::from_presentation(&row.gens, &rels, 8).unwrap();
                (a.dim() == 4).then(|| (row.label.unwrap(), a))
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn field_axioms_in_q_sqrt3(a in scalar_in(3), b in scalar_in(3), c in scalar_in(3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn field_axioms_in_gaussian(a in scalar_in(-1), b in scalar_in(-1)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.conj().conj(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&a.try_div(&b).unwrap() * &b, a);
        }
    }

    #[test]
    fn rank_nullity(m in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = m[0].len();
        let ker = linalg::kernel(&m, cols);
        prop_assert_eq!(linalg::rank(&m) + ker.len(), cols);
        for v in &ker {
            prop_assert!(linalg::is_zero_vec(&linalg::mat_vec(&m, v)));
        }
    }

    #[test]
    fn inverse_and_determinant(m in matrix(3, 3)) {
        let det = linalg::determinant(&m);
        match linalg::inverse(&m) {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(linalg::mat_mul(&m, &inv), linalg::identity(3));
            }
            None => prop_assert!(det.is_zero()),
        }
    }

    /// (f^z)_z = f, with z the third letter.
    #[test]
    fn dehomogenize_after_homogenize(f in ncpoly(2, 0..=3)) {
        prop_assume!(!f.is_zero());
        let d = f.degree().unwrap();
        let h = f.homogenize(2).unwrap();
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.degree(), Some(d));
        prop_assert_eq!(h.dehomogenize(2), f);
    }

    /// (F_z)^z = F when every word has its z's on the right and F_z keeps the degree.
    #[test]
    fn homogenize_after_dehomogenize(f in ncpoly(2, 0..=3)) {
        prop_assume!(!f.is_zero());
        let d = f.degree().unwrap();
        let mut big = NcPoly::zero();
        for (w, c) in &f.terms {
            let mut ix: Vec<usize> = w.0.iter().map(|&b| b as usize).collect();
            ix.extend(std::iter::repeat(2).take(d - w.len()));
            big.add_term(Word::from_indices(&ix), c);
        }
        prop_assert_eq!(big.dehomogenize(2).homogenize(2).unwrap(), big);
    }

    #[test]
    fn wild_homogenization_is_top_component(f in ncpoly(2, 0..=3)) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(f.wild_homogenize().unwrap(), f.component(f.degree().unwrap()));
    }

    #[test]
    fn normal_form_idempotent_and_multiplicative(f in ncpoly(3, 0..=2), g in ncpoly(3, 0..=2)) {
        let a = conic();
        let nf = a.nf(&f).unwrap();
        prop_assert_eq!(a.nf(&nf).unwrap(), nf.clone());
        let prod = a.nf(&f.mul(&g)).unwrap();
        prop_assert_eq!(a.nf(&nf.mul(&a.nf(&g).unwrap())).unwrap(), prod.clone());
        prop_assert_eq!(a.mul(&f, &g).unwrap(), prod);
        // normal forms are combinations of basis words
        for w in nf.terms.keys() {
            prop_assert!(a.basis(w.len()).contains(w));
        }
    }

    #[test]
    fn normal_form_is_linear(f in ncpoly(3, 2..=3), g in ncpoly(3, 2..=3), c in rational()) {
        let a = conic();
        let lhs = a.nf(&f.add(&g.scale(&c))).unwrap();
        let rhs = a.nf(&f).unwrap().add(&a.nf(&g).unwrap().scale(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quadratic_biduality(rels in prop::collection::vec(ncpoly(3, 2..=2), 1..8)) {
        let rels: Vec<NcPoly> = rels.into_iter().filter(|p| !p.is_zero()).collect();
        prop_assume!(!rels.is_empty());
        let p = Presentation::new(xyz(&[]).ambient(), rels).unwrap();
        let qp = QuadraticPresentation::new(p).unwrap();
        let d = quadratic::quadratic_dual(&qp);
        // dims of W and W^perp add up to 9
        let w = linalg::row_basis(&qp.relation_polys().iter().map(|p| quadratic::word_vector(p, 3)).collect::<Vec<_>>()).len();
        prop_assert_eq!(w + d.relation_polys().len(), 9);
        let back = quadratic::quadratic_dual(&d);
        prop_assert!(same_span(&back.relation_polys(), &qp.relation_polys(), 3, 2));
    }

    #[test]
    fn classify_is_basis_invariant(ix in 0usize..12, p in matrix(4, 4)) {
        let ms = models();
        let (label, a) = &ms[ix % ms.len()];
        prop_assume!(!linalg::determinant(&p).is_zero());
        let b = a.change_basis(&p).unwrap();
        prop_assert!(b.check_laws().is_ok());
        prop_assert_eq!(findim::classify(&b).unwrap(), findim::classify(a).unwrap(), "{}", label);
        prop_assert_eq!(findim::is_frobenius(&b).frobenius, true);
    }

    #[test]
    fn change_basis_roundtrip(ix in 0usize..12, p in matrix(4, 4)) {
        let ms = models();
        let (_, a) = &ms[ix % ms.len()];
        let inv = linalg::inverse(&p);
        prop_assume!(inv.is_some());
        let back = a.change_basis(&p).unwrap().change_basis(&inv.unwrap()).unwrap();
        prop_assert_eq!(&back.consts, &a.consts);
        prop_assert_eq!(&back.unit, &a.unit);
    }

    #[test]
    fn poly_parse_print_parse(f in ncpoly(3, 0..=4)) {
        let names = ["x", "y", "z"].map(String::from);
        let text = f.render(&names);
        let back = parse::parse_poly(&text, &names, FieldSpec::Rationals).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.render(&names), text);
    }

    #[test]
    fn file_parse_print_parse(rels in prop::collection::vec(ncpoly(3, 2..=2), 0..5), elems in prop::collection::vec(ncpoly(3, 0..=2), 0..3)) {
        let mut file = xyz(&[]);
        file.rels = rels;
        file.elems = elems;
        file.label = Some("r1".into());
        let back = parse::parse(&file.to_string()).unwrap();
        prop_assert_eq!(back, file);
    }
}

#[test]
fn associativity_of_every_model() {
    for (label, a) in models() {
        assert!(a.check_laws().is_ok(), "{label}");
    }
}
