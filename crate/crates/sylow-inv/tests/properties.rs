//! Property-based checks of the algebraic core: ring axioms for the sparse
//! polynomials, order compatibility of the monomial comparator, the
//! substitution homomorphism and the action law.

use std::sync::Arc;

use proptest::prelude::*;

use sylow_inv::field::{make_field, Fel, FieldCtx};
use sylow_inv::matrix::Mat;
use sylow_inv::poly::{Monomial, MultiPoly};

fn fields() -> Vec<Arc<FieldCtx>> {
    vec![
        make_field(2, 1).unwrap(),
        make_field(3, 1).unwrap(),
        make_field(2, 2).unwrap(),
    ]
}

/// Polynomial over `fields()[fi]` with <= 4 terms, degree <= 4 per
/// variable slot, 4 variables.
fn poly_over(fi: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0u32..3, 4), 0u64..4);
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let ctx = fields()[fi].clone();
        let mut f = MultiPoly::zero(ctx.clone(), 4);
        for (exps, c) in terms {
            f.add_term(Monomial(exps), Fel((c % ctx.r()) as u32));
        }
        f
    })
}

fn unitriangular_over(fi: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(0u64..4, 6).prop_map(move |vals| {
        let ctx = fields()[fi].clone();
        let mut m = Mat::identity(ctx.clone(), 4);
        let mut it = vals.into_iter();
        for i in 0..4 {
            for j in 0..i {
                m.set(i, j, Fel((it.next().unwrap() % ctx.r()) as u32));
            }
        }
        m
    })
}

fn poly_triple() -> impl Strategy<Value = (MultiPoly, MultiPoly, MultiPoly)> {
    (0usize..3).prop_flat_map(|fi| (poly_over(fi), poly_over(fi), poly_over(fi)))
}

fn polys_and_maps() -> impl Strategy<Value = (MultiPoly, MultiPoly, Mat, Mat)> {
    (0usize..3).prop_flat_map(|fi| {
        (
            poly_over(fi),
            poly_over(fi),
            unitriangular_over(fi),
            unitriangular_over(fi),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms((f, g, h) in poly_triple()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.sub(&f), MultiPoly::zero(f.ctx().clone(), 4));
    }

    #[test]
    fn substitution_is_a_ring_homomorphism((f, g, m, _m2) in polys_and_maps()) {
        let sum = f.add(&g).act(&m).unwrap();
        prop_assert_eq!(sum, f.act(&m).unwrap().add(&g.act(&m).unwrap()));
        let prod = f.mul(&g).act(&m).unwrap();
        prop_assert_eq!(prod, f.act(&m).unwrap().mul(&g.act(&m).unwrap()));
    }

    #[test]
    fn action_is_contravariant((f, _g, m1, m2) in polys_and_maps()) {
        let lhs = f.act(&m2).unwrap().act(&m1).unwrap();
        let rhs = f.act(&m2.mul(&m1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grevlex_respects_multiplication(
        a in prop::collection::vec(0u32..4, 3),
        b in prop::collection::vec(0u32..4, 3),
        c in prop::collection::vec(0u32..4, 3)
    ) {
        let (ma, mb, mc) = (Monomial(a), Monomial(b), Monomial(c));
        if ma < mb {
            prop_assert!(ma.mul(&mc) < mb.mul(&mc));
        }
        prop_assert_eq!(ma.cmp(&mb), mb.cmp(&ma).reverse());
    }

    #[test]
    fn power_matches_repeated_multiplication((f, _g, _h) in poly_triple(), e in 0u64..6) {
        let mut expect = MultiPoly::one(f.ctx().clone(), 4);
        for _ in 0..e {
            expect = expect.mul(&f);
        }
        prop_assert_eq!(f.pow(e), expect);
    }
}
