//! Randomized algebraic laws: ring axioms for sparse polynomials over both
//! coefficient fields, normal-form compatibility in quotient rings, and the
//! truncated-Laurent arithmetic laws at aligned precision.

use descent_core::laurent::LaurentRing;
use descent_core::poly::Polynomial;
use descent_core::ring::PresentedRing;
use descent_core::FieldDesc;
use proptest::prelude::*;

/// A random sparse polynomial in `nvars` variables with small exponents and
/// coefficients.
fn poly_strategy(field: FieldDesc, nvars: usize) -> impl Strategy<Value = Polynomial> {
    let term = (proptest::collection::vec(0u32..4, nvars), -6i64..=6);
    proptest::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut acc = Polynomial::zero(nvars);
        for (exps, c) in terms {
            if c == 0 {
                continue;
            }
            let mut mono = Polynomial::constant(nvars, &field, field.from_i64(c));
            for (i, e) in exps.iter().enumerate() {
                for _ in 0..*e {
                    mono = mono.mul(&field, &Polynomial::var(nvars, i, &field));
                }
            }
            acc = acc.add(&field, &mono);
        }
        acc
    })
}

/// Three polynomials over a randomly chosen coefficient field.
fn field_and_triple() -> impl Strategy<Value = (FieldDesc, Polynomial, Polynomial, Polynomial)> {
    prop_oneof![
        Just(FieldDesc::Rationals),
        Just(FieldDesc::Prime(32003)),
        Just(FieldDesc::Prime(7)),
    ]
    .prop_flat_map(|field| {
        (
            Just(field),
            poly_strategy(field, 2),
            poly_strategy(field, 2),
            poly_strategy(field, 2),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws((field, a, b, c) in field_and_triple()) {
        // commutativity and associativity
        prop_assert_eq!(a.add(&field, &b), b.add(&field, &a));
        prop_assert_eq!(a.mul(&field, &b), b.mul(&field, &a));
        prop_assert_eq!(
            a.add(&field, &b).add(&field, &c),
            a.add(&field, &b.add(&field, &c))
        );
        prop_assert_eq!(
            a.mul(&field, &b).mul(&field, &c),
            a.mul(&field, &b.mul(&field, &c))
        );
        // distributivity
        prop_assert_eq!(
            a.mul(&field, &b.add(&field, &c)),
            a.mul(&field, &b).add(&field, &a.mul(&field, &c))
        );
        // units and inverses
        let one = Polynomial::constant(2, &field, field.one());
        let zero = Polynomial::zero(2);
        prop_assert_eq!(a.mul(&field, &one), a.clone());
        prop_assert!(a.mul(&field, &zero).is_zero());
        prop_assert_eq!(a.add(&field, &zero), a.clone());
        prop_assert!(a.sub(&field, &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// In a quotient ring, the normal form is a ring homomorphism: it
    /// commutes with addition and multiplication up to normal form, and it
    /// is idempotent.
    #[test]
    fn normal_form_respects_ring_operations(
        a in poly_strategy(FieldDesc::Rationals, 1),
        b in poly_strategy(FieldDesc::Rationals, 1),
    ) {
        let base = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let field = base.field();
        let rel = base.parse("x^5 - x - 1").unwrap();
        let ring = base.with_extra_relations(&[rel]).unwrap();
        let sum_then_nf = ring.nf(&a.add(&field, &b));
        let nf_then_sum = ring.nf(&ring.nf(&a).add(&field, &ring.nf(&b)));
        prop_assert_eq!(sum_then_nf, nf_then_sum);
        let prod_then_nf = ring.nf(&a.mul(&field, &b));
        let nf_then_prod = ring.nf(&ring.nf(&a).mul(&field, &ring.nf(&b)));
        prop_assert_eq!(prod_then_nf, nf_then_prod);
        let once = ring.nf(&a);
        prop_assert_eq!(ring.nf(&once), once);
    }

    /// Truncated Laurent arithmetic: ring laws hold up to the precision the
    /// comparison itself reports, and normalization never changes a value.
    #[test]
    fn laurent_arithmetic_laws(
        a_body in poly_strategy(FieldDesc::Rationals, 1),
        b_body in poly_strategy(FieldDesc::Rationals, 1),
        a_pole in 0u32..3,
        b_pole in 0u32..3,
    ) {
        let base = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
        let f = base.parse("x").unwrap();
        let lring = LaurentRing::new(&base, &f).unwrap();
        let prec = 10u32;
        let a = lring.elem(&a_body, a_pole, prec);
        let b = lring.elem(&b_body, b_pole, prec);

        let (comm_ok, _) = lring.eq_at_precision(&lring.add(&a, &b), &lring.add(&b, &a));
        prop_assert!(comm_ok);
        let (mul_comm_ok, _) = lring.eq_at_precision(&lring.mul(&a, &b), &lring.mul(&b, &a));
        prop_assert!(mul_comm_ok);
        let (dist_ok, _) = lring.eq_at_precision(
            &lring.mul(&a, &lring.add(&b, &b)),
            &lring.add(&lring.mul(&a, &b), &lring.mul(&a, &b)),
        );
        prop_assert!(dist_ok);
        let (norm_ok, _) = lring.eq_at_precision(&lring.normalize(&a), &a);
        prop_assert!(norm_ok);
        let (sub_ok, _) = lring.eq_at_precision(&lring.sub(&a, &a), &lring.zero(prec));
        prop_assert!(sub_ok);
    }
}
