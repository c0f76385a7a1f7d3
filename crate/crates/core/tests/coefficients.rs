//! Field axioms and evaluation for exact rationals and rational functions in `q, t`.

use bratteli_core::coeff::LaurentPoly;
use bratteli_core::{ExactRational, RationalFunction};
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = ExactRational> {
    (-50i64..=50, 1i64..=30).prop_map(|(n, d)| ExactRational::frac(n, d))
}

fn arb_point() -> impl Strategy<Value = ExactRational> {
    (1i64..=9, 1i64..=9).prop_map(|(a, b)| ExactRational::frac(a, a + b))
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i32..=2, -2i32..=2), -3i64..=3), 1..=3)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(e, c)| (e, ExactRational::from_integer(c)))))
}

fn arb_nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    arb_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_ratfunc() -> impl Strategy<Value = RationalFunction> {
    (arb_poly(), arb_nonzero_poly()).prop_map(|(n, d)| RationalFunction::from_ratio(&n, &d).unwrap())
}

fn cross_equal(f: &RationalFunction, g: &RationalFunction) -> bool {
    &f.numerator() * &g.denominator() == &g.numerator() * &f.denominator()
}

proptest! {
    #[test]
    fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), ExactRational::zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        } else {
            prop_assert!(a.recip().is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratfunc_field_axioms(f in arb_ratfunc(), g in arb_ratfunc(), h in arb_ratfunc()) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        if !f.is_zero() {
            prop_assert_eq!(&f * &f.recip().unwrap(), RationalFunction::one());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in arb_ratfunc(), g in arb_ratfunc(), q in arb_point(), t in arb_point()) {
        let (Ok(fv), Ok(gv)) = (f.evaluate(&q, &t), g.evaluate(&q, &t)) else { return Ok(()) };
        if let Ok(v) = (&f * &g).evaluate(&q, &t) {
            prop_assert_eq!(v, &fv * &gv);
        }
        if let Ok(v) = (&f + &g).evaluate(&q, &t) {
            prop_assert_eq!(v, &fv + &gv);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_equality_matches_cross_multiplication(f in arb_ratfunc(), g in arb_ratfunc(), h in arb_nonzero_poly(), same in any::<bool>()) {
        let g = if same {
            RationalFunction::from_ratio(&(&f.numerator() * &h), &(&f.denominator() * &h)).unwrap()
        } else {
            g
        };
        prop_assert_eq!(f == g, cross_equal(&f, &g));
        if same {
            prop_assert!(f == g);
        }
    }
}
