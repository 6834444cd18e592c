use detkit_core::cotangent::{self, Presentation};
use detkit_core::groebner::{buchberger, membership_certificate, radical_membership};
use detkit_core::oracle::{brute_membership, truncated_t1_dimension, Membership, TruncationBox};
use detkit_core::ring::{combination, Monomial, MonomialOrder, Polynomial, Rational};
use proptest::prelude::*;

const NVARS: usize = 2;

fn poly(max_t: u32, max_z: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_t, 0..=max_z, 0..=max_z, -3i64..=3), 0..=max_terms).prop_map(|terms| {
        Polynomial::from_terms(
            NVARS,
            terms
                .into_iter()
                .map(|(a, b, c, k)| (Monomial::from_exponents(a, &[b, c]), Rational::from_integer(k.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(3, 2, 4), q in poly(3, 2, 4), r in poly(3, 2, 4)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn truncation_is_multiplicative(p in poly(5, 2, 4), q in poly(5, 2, 4), bound in 1u32..6) {
        let lhs = (&p * &q).truncate(bound);
        let rhs = (&p.truncate(bound) * &q.truncate(bound)).truncate(bound);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(p.mul_truncated(&q, bound), lhs);
    }

    #[test]
    fn monomial_order_is_total_and_multiplicative(a in poly(2, 2, 1), b in poly(2, 2, 1), c in poly(2, 2, 1)) {
        let order = MonomialOrder::block();
        let pick = |p: &Polynomial| p.terms().first().map(|(m, _)| m.clone()).unwrap_or_else(|| Monomial::one(NVARS));
        let (x, y, z) = (pick(&a), pick(&b), pick(&c));
        prop_assert_eq!(order.compare(&x, &y), order.compare(&y, &x).reverse());
        prop_assert_eq!(order.compare(&x, &y), order.compare(&x.mul(&z), &y.mul(&z)));
        prop_assert!(order.compare(&x.mul(&z), &x).is_ge());
    }

    #[test]
    fn combinations_are_members(c1 in poly(2, 1, 2), c2 in poly(2, 1, 2)) {
        let gens = vec![
            Polynomial::from_terms(NVARS, [
                (Monomial::from_exponents(0, &[1, 1]), Rational::from_integer(1.into())),
                (Monomial::from_exponents(2, &[0, 0]), Rational::from_integer((-1).into())),
            ]),
            Polynomial::from_terms(NVARS, [
                (Monomial::from_exponents(0, &[2, 0]), Rational::from_integer(1.into())),
                (Monomial::from_exponents(1, &[0, 1]), Rational::from_integer(1.into())),
            ]),
        ];
        let p = combination(NVARS, &[c1, c2], &gens);
        let cert = membership_certificate(&p, &gens).unwrap().expect("combination is a member");
        prop_assert_eq!(combination(NVARS, &cert, &gens), p.clone());
        let bx = TruncationBox::new(p.max_t_degree() + 3, p.max_z_degree() + 3).unwrap();
        prop_assert_eq!(brute_membership(&p, &gens, &bx).unwrap(), Membership::MemberWithinBox);
    }

    #[test]
    fn brute_non_membership_is_sound(p in poly(3, 2, 3)) {
        let gens = vec![Polynomial::from_terms(NVARS, [
            (Monomial::from_exponents(0, &[1, 1]), Rational::from_integer(1.into())),
            (Monomial::from_exponents(2, &[0, 0]), Rational::from_integer((-1).into())),
        ])];
        let bx = TruncationBox::new(4, 4).unwrap();
        let brute = brute_membership(&p, &gens, &bx).unwrap();
        let cert = membership_certificate(&p, &gens).unwrap();
        if brute == Membership::NotMember {
            prop_assert!(cert.is_none());
        }
        if let Some(c) = cert {
            if c.iter().all(|q| q.max_t_degree() + 2 < 4 && q.max_z_degree() + 2 <= 4) {
                prop_assert_eq!(brute, Membership::MemberWithinBox);
            }
        }
    }

    #[test]
    fn reduced_basis_ignores_generator_order(a in poly(2, 2, 3), b in poly(2, 2, 3)) {
        let order = MonomialOrder::block();
        let g1 = buchberger(&[a.clone(), b.clone()], &order).unwrap();
        let g2 = buchberger(&[b, a], &order).unwrap();
        prop_assert_eq!(g1.polynomials(), g2.polynomials());
    }

    #[test]
    fn powers_are_in_the_radical(p in poly(1, 2, 3), e in 1u32..4) {
        prop_assume!(!p.is_zero());
        prop_assert!(radical_membership(&p, &[p.pow(e)]).unwrap());
    }
}

fn pres(vars: &[&str], ideal: &str) -> Presentation {
    let r = detkit_core::ring::Ring::new(vars.iter().copied()).unwrap();
    Presentation::parse(&r, ideal).unwrap()
}

#[test]
fn t1_dimension_is_presentation_independent() {
    let bx = TruncationBox::new(3, 3).unwrap();
    let cases = [
        ("x*y, x*z", "x*z, x*y"),
        ("x*y, x*z", "x*y, x*z + 2*x*y"),
        ("x*y - t, z^2", "z^2 + x*y - t, x*y - t"),
    ];
    for (a, b) in cases {
        let pa = pres(&["x", "y", "z"], a);
        let pb = pres(&["x", "y", "z"], b);
        let da = cotangent::truncated_t1_dimension(&pa, &bx).unwrap();
        let db = cotangent::truncated_t1_dimension(&pb, &bx).unwrap();
        assert_eq!(da, db, "{a} vs {b}");
        let oa = truncated_t1_dimension(3, pa.generators(), None, &bx).unwrap();
        let ob = truncated_t1_dimension(3, pb.generators(), None, &bx).unwrap();
        assert_eq!((oa, ob), (da, db), "{a} vs {b}");
    }
}
