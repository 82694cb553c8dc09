mod common;

use common::Fixed;
use fibcert::exactmath::{parse_decimal, BallReal, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-100_000i64..100_000, 1i64..10_000).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..1_000_000, 1i64..10_000).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn digits() -> impl Strategy<Value = u32> {
    prop_oneof![Just(10u32), Just(40), Just(100)]
}

proptest! {
    #[test]
    fn field_operations_enclose_exact_result(a in rational(), b in rational(), d in digits()) {
        let (x, y) = (BallReal::from_rational(&a, d), BallReal::from_rational(&b, d));
        prop_assert!(x.add(&y).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y).contains_rational(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(x.div(&y).unwrap().contains_rational(&(&a / &b)));
        }
    }

    #[test]
    fn sqrt_and_ln_enclose_oracle(a in positive_rational(), d in digits()) {
        let x = BallReal::from_rational(&a, d);
        let o = Fixed::from_rational(&a);
        prop_assert!(x.sqrt().unwrap().contains_rational(&o.sqrt().to_rational()));
        prop_assert!(x.ln().unwrap().contains_rational(&o.ln().to_rational()));
    }

    #[test]
    fn refinement_shrinks_and_overlaps(a in positive_rational()) {
        let lo = BallReal::from_rational(&a, 30).ln().unwrap();
        let hi = BallReal::from_rational(&a, 60).ln().unwrap();
        prop_assert!(lo.overlaps(&hi));
        prop_assert!(hi.rad() <= lo.rad());
    }

    #[test]
    fn json_round_trip_contains_original(a in positive_rational(), d in digits()) {
        let x = BallReal::from_rational(&a, d).sqrt().unwrap();
        let back = BallReal::from_json(&x.to_json()).unwrap();
        prop_assert!(back.contains_dyadic(&x.lower()) && back.contains_dyadic(&x.upper()));
    }

    #[test]
    fn certified_comparison_never_lies(a in rational(), b in rational(), d in digits()) {
        let (x, y) = (BallReal::from_rational(&a, d), BallReal::from_rational(&b, d));
        if let Some(ord) = x.certified_cmp(&y) {
            prop_assert_eq!(ord, a.cmp(&b));
        }
    }

    #[test]
    fn nearest_integer_distance_encloses(a in rational(), d in digits()) {
        let x = BallReal::from_rational(&a, d);
        if let Ok(dist) = x.nearest_int_distance() {
            let n = (&a + Rational::new(1.into(), 2.into())).floor();
            let exact = (&a - n).abs();
            prop_assert!(dist.contains_rational(&exact));
        }
    }
}

#[test]
fn decimal_parsing_matches_exact_fractions() {
    assert_eq!(parse_decimal("1.25").unwrap(), Rational::new(5.into(), 4.into()));
    assert_eq!(parse_decimal("-3e-2").unwrap(), Rational::new((-3).into(), 100.into()));
}
