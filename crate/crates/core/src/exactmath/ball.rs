//! Midpoint-radius reals.
//!
//! A [`BallReal`] stands for every real `x` with `|x - mid| <= rad`. The
//! midpoint carries the working precision; the radius is kept short and is
//! only ever rounded up, so every operation returns a ball that contains
//! the exact result for every choice of inputs inside the argument balls.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::precision::bits_for_digits;
use super::rational::parse_decimal;
use crate::error::{Error, Result};

/// Significant bits kept in radii.
pub(crate) const RAD_BITS: u64 = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct BallReal {
    mid: Dyadic,
    rad: Dyadic,
    digits: u32,
}

impl BallReal {
    /// Build a ball directly. `rad` must be nonnegative.
    pub fn new(mid: Dyadic, rad: Dyadic, digits: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        BallReal { mid, rad: rad.round_ceil(RAD_BITS), digits }
    }

    pub fn exact(mid: Dyadic, digits: u32) -> Self {
        BallReal { mid, rad: Dyadic::zero(), digits }
    }

    pub fn from_int(n: impl Into<BigInt>, digits: u32) -> Self {
        let mid = Dyadic::from_int(n);
        Self::exact(mid, digits).rounded()
    }

    /// Ball containing `x` exactly, with radius at most one unit in the last place.
    pub fn from_rational(x: &BigRational, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let den_is_pow2 = x.denom().magnitude().count_ones() == 1;
        if den_is_pow2 {
            let tz = x.denom().trailing_zeros().unwrap_or(0) as i64;
            return BallReal::exact(Dyadic::new(x.numer().clone(), -tz), digits).rounded();
        }
        // exponent giving `bits` significant bits for the quotient
        let mag = x.numer().abs().bits() as i64 - x.denom().bits() as i64;
        let exp = mag - bits as i64 - 1;
        let lo = Dyadic::floor_rational(x, exp);
        let hi = Dyadic::ceil_rational(x, exp);
        let rad = hi.sub(&lo);
        BallReal::new(lo, rad, digits)
    }

    /// Ball spanning the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic, digits: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let mid = lo.add(hi).shl(-1);
        let rad = hi.sub(lo).shl(-1);
        let ball = BallReal { mid, rad, digits };
        ball.rounded()
    }

    pub fn zero(digits: u32) -> Self {
        Self::exact(Dyadic::zero(), digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::exact(Dyadic::one(), digits)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> u64 {
        bits_for_digits(self.digits)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn with_digits(&self, digits: u32) -> Self {
        BallReal { mid: self.mid.clone(), rad: self.rad.clone(), digits }.rounded()
    }

    /// Round the midpoint to the working precision, folding the error into the radius.
    fn rounded(self) -> Self {
        let (mid, err) = self.mid.round_nearest(self.bits());
        let rad = if err.is_zero() { self.rad } else { self.rad.add(&err) };
        BallReal { mid, rad: rad.round_ceil(RAD_BITS), digits: self.digits }
    }

    fn join_digits(&self, other: &Self) -> u32 {
        self.digits.max(other.digits)
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= x && x <= &hi
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_int(&self, n: &BigInt) -> bool {
        self.contains_dyadic(&Dyadic::from_int(n.clone()))
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `Some(ordering)` if every point of `self` compares the same way against
    /// every point of `other`, `None` otherwise. Touching exact balls compare equal.
    pub fn certified_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if self.lower() > other.upper() {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.mid == other.mid {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.upper() < other.lower()
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.upper() <= other.lower()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn neg(&self) -> Self {
        BallReal { mid: self.mid.neg(), rad: self.rad.clone(), digits: self.digits }
    }

    pub fn abs(&self) -> Self {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BallReal {
            mid: self.mid.add(&other.mid),
            rad: self.rad.add(&other.rad),
            digits: self.join_digits(other),
        }
        .rounded()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        BallReal { mid, rad, digits: self.join_digits(other) }.rounded()
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        BallReal {
            mid: self.mid.mul_int(n),
            rad: self.rad.mul_int(&n.abs()),
            digits: self.digits,
        }
        .rounded()
    }

    /// Exact scaling by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        BallReal { mid: self.mid.shl(k), rad: self.rad.shl(k), digits: self.digits }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let digits = self.join_digits(other);
        let bits = bits_for_digits(digits);
        let num = self.mid.abs();
        let den = other.mid.abs();
        let q_lo = num.div_down(&den, bits);
        let q_hi = num.div_up(&den, bits);
        let truncation = q_hi.sub(&q_lo);
        let negative = self.mid.is_negative() != other.mid.is_negative();
        let mid = if negative { q_lo.neg() } else { q_lo };
        // |x/y - xm/ym| <= (rx + |xm/ym| ry) / (|ym| - ry)
        let propagated = if self.rad.is_zero() && other.rad.is_zero() {
            Dyadic::zero()
        } else {
            let numer = self.rad.add(&q_hi.mul(&other.rad)).round_ceil(RAD_BITS);
            let denom = den.sub(&other.rad).round_floor(RAD_BITS);
            numer.div_up(&denom, RAD_BITS)
        };
        Ok(BallReal { mid, rad: propagated.add(&truncation), digits }.rounded())
    }

    pub fn div_int(&self, n: &BigInt) -> Result<Self> {
        self.div(&BallReal::exact(Dyadic::from_int(n.clone()), self.digits))
    }

    pub fn recip(&self) -> Result<Self> {
        BallReal::one(self.digits).div(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = BallReal::one(self.digits);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Enclosure of the distance to the nearest integer, `||x||`.
    ///
    /// The result is the interval `[d_lo, d_hi] ⊆ [0, 1/2]` of distances over
    /// the whole ball, returned as a ball. Fails when the ball straddles a
    /// half-integer (the nearest integer is not unique across the ball).
    pub fn nearest_int_distance(&self) -> Result<Self> {
        let half = Dyadic::pow2(-1);
        if self.is_exact() {
            let n = Dyadic::from_int(self.mid.add(&half).floor());
            return Ok(BallReal::exact(self.mid.sub(&n).abs(), self.digits));
        }
        let lo = self.lower();
        let hi = self.upper();
        let n_lo = lo.add(&half).floor();
        let n_hi = hi.add(&half).floor();
        if n_lo != n_hi {
            return Err(Error::AmbiguousPrecision("ball straddles a half-integer"));
        }
        let n = Dyadic::from_int(n_lo);
        let (d_lo, d_hi) = if lo <= n && n <= hi {
            (Dyadic::zero(), n.sub(&lo).max(hi.sub(&n)))
        } else if hi < n {
            (n.sub(&hi), n.sub(&lo))
        } else {
            (lo.sub(&n), hi.sub(&n))
        };
        Ok(BallReal::from_interval(&d_lo, &d_hi.min(half), self.digits))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal fraction digits needed to show `digits` significant digits of the midpoint.
    fn display_frac_digits(&self) -> usize {
        let mag = self.mid.abs().max(self.rad.clone()).magnitude_bits();
        let lead = if mag == i64::MIN || mag > 0 {
            0
        } else {
            ((-mag) as f64 * std::f64::consts::LOG10_2).ceil() as usize
        };
        self.digits as usize + lead + 2
    }

    /// Decimal serialization whose parsed form contains this ball.
    pub fn to_json(&self) -> BallJson {
        let frac = self.display_frac_digits();
        let mid_str = self.mid.to_decimal(frac, false);
        let mid_dec = parse_decimal(&mid_str).expect("own decimal output parses");
        let shift = (self.mid.to_rational() - &mid_dec).abs();
        let rad_total = self.rad.to_rational() + shift;
        let rad_dec = ceil_decimal(&rad_total, frac);
        BallJson { mid: mid_str, rad: rad_dec, digits: self.digits }
    }

    pub fn from_json(json: &BallJson) -> Result<Self> {
        let mid = parse_decimal(&json.mid)?;
        let rad = parse_decimal(&json.rad)?;
        if rad.is_negative() {
            return Err(Error::Parse(format!("negative radius {}", json.rad)));
        }
        let base = BallReal::from_rational(&mid, json.digits);
        let extra = if rad.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::ceil_rational(&rad, rad_exp_hint(&rad) - RAD_BITS as i64)
        };
        Ok(BallReal::new(base.mid.clone(), base.rad.add(&extra), json.digits))
    }
}

fn rad_exp_hint(r: &BigRational) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64 + 1
}

fn ceil_decimal(r: &BigRational, frac_digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(frac_digits as u32);
    let n = (r * BigRational::from_integer(scale)).ceil().to_integer();
    super::dyadic::format_fixed(&n, frac_digits)
}

/// Wire form of a ball: decimal midpoint and radius plus the working digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub mid: String,
    pub rad: String,
    pub digits: u32,
}

impl Serialize for BallReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = BallJson::deserialize(d)?;
        BallReal::from_json(&json).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} +/- {:e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = self.to_json();
        write!(f, "{} +/- {:.3e}", j.mid, self.rad.to_f64())
    }
}

/// Exact ball for a nonnegative integer constant.
pub fn int_ball(n: u64, digits: u32) -> BallReal {
    BallReal::from_int(BigInt::from(n), digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn half_is_exact() {
        let b = BallReal::from_rational(&rat(1, 2), 50);
        assert!(b.is_exact());
        assert_eq!(b.mid(), &Dyadic::pow2(-1));
    }

    #[test]
    fn third_has_small_radius() {
        let b = BallReal::from_rational(&rat(1, 3), 10);
        assert!(b.contains_rational(&rat(1, 3)));
        assert!(b.rad().to_rational() <= rat(1, 10_000_000_000));
    }

    #[test]
    fn large_integer_is_exact() {
        let q: BigInt = "25431328747122828658870707509980696460342".parse().unwrap();
        let b = BallReal::from_rational(&BigRational::from_integer(q.clone()), 50);
        assert!(b.is_exact());
        assert!(b.contains_int(&q));
    }

    #[test]
    fn division_excluding_zero_only() {
        let a = BallReal::from_int(1, 30);
        let z = BallReal::from_interval(
            &Dyadic::from_int(-1),
            &Dyadic::from_int(1),
            30,
        );
        assert_eq!(a.div(&z), Err(Error::DivisionByZero));
        let third = a.div(&BallReal::from_int(3, 30)).unwrap();
        assert!(third.contains_rational(&rat(1, 3)));
    }

    #[test]
    fn nearest_int_distance_examples() {
        let d = |n: i64, den: i64| {
            BallReal::from_rational(&rat(n, den), 30).nearest_int_distance().unwrap()
        };
        assert_eq!(d(1, 2).mid(), &Dyadic::pow2(-1));
        assert!(d(3, 1).mid().is_zero());
        assert_eq!(d(11, 4).mid(), &Dyadic::pow2(-2));
        assert!(d(11, 4).is_exact());
    }

    #[test]
    fn nearest_int_distance_rejects_half_straddle() {
        let b = BallReal::from_interval(
            &Dyadic::new(BigInt::from(15), -5),
            &Dyadic::new(BigInt::from(17), -5),
            30,
        );
        assert!(matches!(b.nearest_int_distance(), Err(Error::AmbiguousPrecision(_))));
    }

    #[test]
    fn nearest_int_distance_interval_covering_integer() {
        // [2.75, 3.125] -> distances [0, 0.25]
        let b = BallReal::from_interval(
            &Dyadic::new(BigInt::from(11), -2),
            &Dyadic::new(BigInt::from(25), -3),
            30,
        );
        let d = b.nearest_int_distance().unwrap();
        assert!(d.lower().is_zero());
        assert_eq!(d.upper(), Dyadic::pow2(-2));
    }

    #[test]
    fn json_round_trip_contains_original() {
        let b = BallReal::from_rational(&rat(-22, 7), 40);
        let back = BallReal::from_json(&b.to_json()).unwrap();
        assert!(back.contains_rational(&rat(-22, 7)));
        assert!(back.lower() <= b.lower() && b.upper() <= back.upper());
    }

    #[test]
    fn pow_zero_is_exact_one() {
        let b = BallReal::from_rational(&rat(13, 8), 20).pow(0);
        assert!(b.is_exact());
        assert_eq!(b.mid(), &Dyadic::one());
    }
}
