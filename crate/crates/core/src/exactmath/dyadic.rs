//! Exact dyadic rationals `mant * 2^exp`.
//!
//! Every arithmetic operation here is exact except the explicitly rounded
//! ones (`round_*`, `div_*`, `sqrt_*`), which say which way they round.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Position of the leading bit: `2^(msb-1) <= |x| < 2^msb`. Zero maps to `i64::MIN`.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        (a, b, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, n: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * n, self.exp)
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&pow2((-self.exp) as u64))
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            ceil_div(&self.mant, &pow2((-self.exp) as u64))
        }
    }

    /// Largest multiple of `2^exp` that is `<= self`.
    pub fn floor_at(&self, exp: i64) -> Dyadic {
        if self.exp >= exp {
            return self.clone();
        }
        Dyadic::new(self.shl(-exp).floor(), exp)
    }

    /// Smallest multiple of `2^exp` that is `>= self`.
    pub fn ceil_at(&self, exp: i64) -> Dyadic {
        if self.exp >= exp {
            return self.clone();
        }
        Dyadic::new(self.shl(-exp).ceil(), exp)
    }

    fn trim_exp(&self, bits: u64) -> Option<i64> {
        let len = self.mant.bits();
        if len <= bits {
            None
        } else {
            Some(self.exp + (len - bits) as i64)
        }
    }

    /// Round toward -inf keeping at most `bits` significant bits.
    pub fn round_floor(&self, bits: u64) -> Dyadic {
        match self.trim_exp(bits) {
            Some(e) => self.floor_at(e),
            None => self.clone(),
        }
    }

    /// Round toward +inf keeping at most `bits` significant bits.
    pub fn round_ceil(&self, bits: u64) -> Dyadic {
        match self.trim_exp(bits) {
            Some(e) => self.ceil_at(e),
            None => self.clone(),
        }
    }

    /// Round to nearest keeping `bits` significant bits; returns the rounded
    /// value and an upper bound on the absolute rounding error.
    pub fn round_nearest(&self, bits: u64) -> (Dyadic, Dyadic) {
        match self.trim_exp(bits) {
            None => (self.clone(), Dyadic::zero()),
            Some(e) => {
                let half = Dyadic::pow2(e - 1);
                let r = Dyadic::new(self.add(&half).shl(-e).floor(), e);
                let err = r.sub(self).abs();
                (r, err)
            }
        }
    }

    /// Upper bound on `self / other` for nonnegative `self` and positive `other`,
    /// with roughly `bits` significant bits.
    pub fn div_up(&self, other: &Dyadic, bits: u64) -> Dyadic {
        debug_assert!(!self.is_negative() && other.is_positive());
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = bits as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &self.mant << shift as u64;
        let q = ceil_div(&num, &other.mant);
        Dyadic::new(q, self.exp - other.exp - shift)
    }

    /// Lower bound on `self / other` for nonnegative `self` and positive `other`.
    pub fn div_down(&self, other: &Dyadic, bits: u64) -> Dyadic {
        debug_assert!(!self.is_negative() && other.is_positive());
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = bits as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0);
        let num = &self.mant << shift as u64;
        let q = num.div_floor(&other.mant);
        Dyadic::new(q, self.exp - other.exp - shift)
    }

    /// Floor of the square root of a nonnegative dyadic, to about `bits` bits.
    /// Returns the root, whether it is exact, and the exponent of its last
    /// place (the true root lies in `[root, root + 2^ulp_exp)`).
    pub fn sqrt_floor(&self, bits: u64) -> (Dyadic, bool, i64) {
        debug_assert!(!self.is_negative());
        if self.is_zero() {
            return (Dyadic::zero(), true, 0);
        }
        // scale so the radicand has >= 2*bits bits and an even exponent
        let mut shift = (2 * bits as i64 + 2 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let rad = &self.mant << shift as u64;
        let root = rad.sqrt();
        let exact = &root * &root == rad;
        let e = (self.exp - shift) / 2;
        (Dyadic::new(root, e), exact, e)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Largest dyadic with denominator `2^-exp` (exp < 0) not exceeding `r`.
    pub fn floor_rational(r: &BigRational, exp: i64) -> Dyadic {
        let scaled = scale_rational(r, -exp);
        Dyadic::new(scaled.floor().to_integer(), exp)
    }

    pub fn ceil_rational(r: &BigRational, exp: i64) -> Dyadic {
        let scaled = scale_rational(r, -exp);
        Dyadic::new(scaled.ceil().to_integer(), exp)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mant.bits() as i64;
        let keep = 60;
        let (m, e) = if len > keep {
            (&self.mant >> (len - keep) as u64, self.exp + len - keep)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(f64::NAN);
        mf * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Decimal string with `frac_digits` digits after the point, rounded in
    /// the requested direction (`up = true` rounds toward +inf).
    pub fn to_decimal(&self, frac_digits: usize, up: bool) -> String {
        let r = self.to_rational();
        let scale = BigInt::from(10u32).pow(frac_digits as u32);
        let scaled = r * BigRational::from_integer(scale);
        let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
        format_fixed(&n, frac_digits)
    }
}

fn scale_rational(r: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        r * BigRational::from_integer(pow2(k as u64))
    } else {
        r / BigRational::from_integer(pow2((-k) as u64))
    }
}

/// Render `n / 10^frac_digits` as a plain decimal string.
pub(crate) fn format_fixed(n: &BigInt, frac_digits: usize) -> String {
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let s = if frac_digits == 0 {
        digits
    } else {
        let padded = format!("{:0>width$}", digits, width = frac_digits + 1);
        let (int, frac) = padded.split_at(padded.len() - frac_digits);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    };
    if neg && s.chars().any(|c| c != '0' && c != '.') {
        format!("-{s}")
    } else {
        s
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes first
        let (ma, mb) = (self.magnitude_bits(), other.magnitude_bits());
        if ma != mb {
            let o = ma.cmp(&mb);
            return if sa > 0 { o } else { o.reverse() };
        }
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(d(8, 0), d(1, 3));
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn ordering_across_signs_and_scales() {
        assert!(d(-3, 0) < d(-1, 0));
        assert!(d(1, -10) < d(1, 0));
        assert!(d(-1, 10) < d(-1, 0));
        assert!(d(3, -1) > d(1, 0));
    }

    #[test]
    fn floor_and_ceil_of_negative_values() {
        // -1.5
        let x = d(-3, -1);
        assert_eq!(x.floor(), BigInt::from(-2));
        assert_eq!(x.ceil(), BigInt::from(-1));
    }

    #[test]
    fn directed_rounding_brackets_value() {
        let x = d(0b1011_0111, -3);
        let lo = x.round_floor(4);
        let hi = x.round_ceil(4);
        assert!(lo <= x && x <= hi);
        let (n, err) = x.round_nearest(4);
        assert!(n.sub(&x).abs() <= err);
    }

    #[test]
    fn directed_division() {
        let one = Dyadic::one();
        let three = d(3, 0);
        let lo = one.div_down(&three, 40);
        let hi = one.div_up(&three, 40);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(d(1, -1).to_decimal(5, false), "0.5");
        assert_eq!(d(-1, -2).to_decimal(1, false), "-0.3");
        assert_eq!(d(-1, -2).to_decimal(1, true), "-0.2");
        assert_eq!(d(5, 0).to_decimal(3, true), "5");
    }
}
