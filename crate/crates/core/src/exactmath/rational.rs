use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Parse a plain or scientific decimal literal (`-12.5`, `1.5e-28`) exactly.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let (body, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    if neg {
        n = -n;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        Rational::from_integer(n * ten.pow(scale as u32))
    } else {
        Rational::new(n, ten.pow((-scale) as u32))
    };
    Ok(r)
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// Fixed-point decimal rendering rounded toward -inf (`up = false`) or +inf.
pub fn rational_to_decimal(r: &Rational, frac_digits: usize, up: bool) -> String {
    let scale = BigInt::from(10u32).pow(frac_digits as u32);
    let scaled = r * Rational::from_integer(scale);
    let n = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
    super::dyadic::format_fixed(&n, frac_digits)
}

/// `n / 10^k` as a rational.
pub fn decimal_ratio(n: i64, k: u32) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(10u32).pow(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_scientific() {
        assert_eq!(parse_decimal("0.5").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_decimal("-12.25").unwrap(), Rational::new((-49).into(), 4.into()));
        assert_eq!(parse_decimal("1.5e-28").unwrap(), Rational::new(15.into(), BigInt::from(10).pow(29)));
        assert_eq!(parse_decimal("4.64e34").unwrap(), Rational::from_integer(BigInt::from(464) * BigInt::from(10).pow(32)));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn renders_with_direction() {
        let third = Rational::new(1.into(), 3.into());
        assert_eq!(rational_to_decimal(&third, 3, false), "0.333");
        assert_eq!(rational_to_decimal(&third, 3, true), "0.334");
    }
}
