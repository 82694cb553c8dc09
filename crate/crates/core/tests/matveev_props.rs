mod common;

use common::Fixed;
use fibcert::exactmath::parse_decimal;
use fibcert::matveev::*;
use fibcert::{BallReal, BigInt, Rational};
use proptest::prelude::*;

/// `RHS/n` of the final inequality in `n`, computed by the fixed-point oracle.
fn oracle_ratio(n: &BigInt) -> Fixed {
    let lp = common::phi().ln();
    let ln5 = Fixed::from_int(5).ln();
    let ln2 = common::ln2();
    let one = Fixed::from_int(1);
    let k = Fixed::from_rational(&Rational::new(14.into(), 10.into()))
        .mul(&Fixed(BigInt::from(30).pow(7) * BigInt::from(8192) << common::BITS))
        .mul(&one.add(&ln2))
        .mul(&lp)
        .mul(&lp)
        .mul(&ln5)
        .mul(&Fixed::from_int(1_610_000_000_000));
    let nf = Fixed(n << common::BITS);
    let ln_n = nf.ln();
    let a = one.add(&ln_n.div(&lp));
    let b = one.add(&ln_n);
    k.mul(&a).mul(&a).mul(&b).mul(&b).div(&nf)
}

#[test]
fn solved_n_bound_is_the_threshold_under_the_oracle() {
    let n = solve_n_bound(100).unwrap();
    let one = Fixed::from_int(1);
    assert!(oracle_ratio(&n) < one);
    assert!(oracle_ratio(&(&n - 1)) >= one);
    assert!(n <= parse_decimal("4.64e34").unwrap().to_integer());
}

#[test]
fn n_coefficient_matches_oracle() {
    let lp = common::phi().ln();
    let expect = Fixed::from_rational(&Rational::new(14.into(), 10.into()))
        .mul(&Fixed(BigInt::from(30).pow(7) * BigInt::from(8192) << common::BITS))
        .mul(&Fixed::from_int(1).add(&common::ln2()))
        .mul(&lp)
        .mul(&lp)
        .mul(&Fixed::from_int(5).ln());
    assert!(n_coefficient(80).unwrap().contains_rational(&expect.to_rational()));
}

#[test]
fn height_table_over_the_reduction_range() {
    let lp = fibcert::exactmath::ln_phi(30);
    for l in 3..=157u64 {
        let fl = fibcert::fibkit::fib(l);
        let mut flm = fl.clone();
        for m in 2..=227u64 {
            flm *= &fl;
            let h = log_height_integer(&(&flm - 1), 30).unwrap();
            let cap = lp.mul_int(&BigInt::from(m * (l - 1)));
            assert!(h.certainly_le(&cap), "l = {l}, m = {m}");
        }
    }
    let spot = height_table(157, 227, 30).unwrap();
    assert!(spot.h_flm1.certainly_le(&lp.mul_int(&BigInt::from(227 * 156))));
}

#[test]
fn declared_heights_dominate_on_a_grid() {
    for l in [3u64, 4, 5, 10, 18, 50, 100, 157] {
        for m in [2u64, 3, 27, 100, 227] {
            assert!(heights_admissible(l, m, 60).unwrap(), "l = {l}, m = {m}");
        }
    }
}

#[test]
fn lambda_values_bracket_the_known_solution() {
    // F_6 = 2^3 (2^1 - 1): |Λ2| < 1 / (2 phi^6)
    let lam2 = lambda2_value(6, 3, 3, 1, 80).unwrap().abs();
    let bound = fibcert::exactmath::phi(80).pow(6).shl(1).recip().unwrap();
    assert!(lam2.certainly_lt(&bound));
    // Λ1 = e^Γ - 1
    let g = gamma_form(6, 3, 4, 80).unwrap();
    let lam1 = lambda1_value(6, 3, 4, 80).unwrap();
    assert!(g.is_negative() && lam1.is_negative());
}

proptest! {
    #[test]
    fn m_bound_is_monotone(a in 9u64..1_000_000_000, b in 9u64..1_000_000_000) {
        let (lo, hi) = (a.min(b), a.max(b));
        let x = derive_m_bound(&BallReal::from_int(lo, 40)).unwrap();
        let y = derive_m_bound(&BallReal::from_int(hi, 40)).unwrap();
        prop_assert!(x.lower() <= y.upper());
    }

    #[test]
    fn thresholds_are_monotone_and_sound(a in 9u64..10_000_000_000, b in 9u64..10_000_000_000) {
        let (lo, hi) = (a.min(b), a.max(b));
        let (l1, k1) = lk_bounds_from_n(&BigInt::from(lo), 60).unwrap();
        let (l2, k2) = lk_bounds_from_n(&BigInt::from(hi), 60).unwrap();
        prop_assert!(l1 <= l2 && k1 <= k2);
        // the next l already violates ln l + (l - 2) ln phi < ln n
        let phi = 1.618_033_988_749_895f64;
        let next = (l2 + 1) as f64;
        prop_assert!(next.ln() + (next - 2.0) * phi.ln() >= (hi as f64).ln() - 1e-9);
    }

    #[test]
    fn size_bound_formula(k in 1u64..1000, m in 1u64..1000, l in 1u64..1000) {
        let n = n_from_size_bounds(&BigInt::from(k), &BigInt::from(m), &BigInt::from(l));
        prop_assert_eq!(n, BigInt::from(2 + (k + m) * (l - 1)));
    }
}
