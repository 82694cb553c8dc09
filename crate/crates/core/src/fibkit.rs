//! Exact Fibonacci arithmetic and the exact-divisibility facts the proof uses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{ln_phi, phi, sqrt5, BallReal, Precision};

/// `F_n` by fast doubling.
pub fn fib(n: u64) -> BigInt {
    fib_pair(n).0
}

/// `(F_n, F_{n+1})` using `F_2k = F_k (2 F_{k+1} - F_k)` and
/// `F_{2k+1} = F_k^2 + F_{k+1}^2`.
pub fn fib_pair(n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for i in (0..u64::BITS - n.leading_zeros()).rev() {
        let c = &a * ((&b << 1u32) - &a);
        let d = &a * &a + &b * &b;
        if (n >> i) & 1 == 0 {
            a = c;
            b = d;
        } else {
            b = &c + &d;
            a = d;
        }
    }
    (a, b)
}

/// `F_0 ..= F_n` by the recurrence.
pub fn fib_table(n: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..=n {
        out.push(a.clone());
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    out
}

/// Ball for `(phi^n - (-phi)^-n) / sqrt 5`.
pub fn binet_ball(n: u64, digits: u32) -> Result<BallReal> {
    let phi = phi(digits);
    let big = phi.pow(n);
    let mut small = big.recip()?;
    if n % 2 == 1 {
        small = small.neg();
    }
    big.sub(&small).div(&sqrt5(digits))
}

/// Does the Binet ball at this precision contain the exact `F_n`?
pub fn binet_check(n: u64, prec: Precision) -> Result<bool> {
    let exact = fib(n);
    let mut p = prec;
    loop {
        let ball = binet_ball(n, p.digits)?;
        if ball.contains_int(&exact) {
            return Ok(true);
        }
        // a wide ball that misses is a genuine failure; only a ball too coarse
        // to resolve integers is worth refining
        if ball.rad().to_f64() < 0.25 {
            return Ok(false);
        }
        p = p.escalate()?;
    }
}

/// Certified `phi^(n-2) <= F_n <= phi^(n-1)` for `n >= 1`.
pub fn golden_bounds_check(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let digits = golden_digits(n);
    let f = BallReal::from_int(fib(n), digits);
    let phi = phi(digits);
    // phi^(n-2) with n = 1 is phi^-1
    let lower = if n >= 2 {
        phi.pow(n - 2)
    } else {
        match phi.recip() {
            Ok(v) => v,
            Err(_) => return false,
        }
    };
    let upper = phi.pow(n - 1);
    lower.certainly_le(&f) && f.certainly_le(&upper)
}

fn golden_digits(n: u64) -> u32 {
    // phi^n has about 0.209 n decimal digits
    (n as f64 * 0.21) as u32 + 60
}

/// `F_{l-d} F_{l+d} - F_l^2 = (-1)^(l+d+1) F_d^2`, checked exactly.
pub fn catalan_identity_check(l: u64, d: u64) -> Result<bool> {
    if d < 1 || d > l {
        return Err(Error::PreconditionViolated(format!("need 1 <= d <= l, got l={l}, d={d}")));
    }
    let lhs = fib(l - d) * fib(l + d) - fib(l).pow(2);
    let mut rhs = fib(d).pow(2);
    if (l + d + 1) % 2 == 1 {
        rhs = -rhs;
    }
    Ok(lhs == rhs)
}

/// `(F_l - 1) | F_{l-2} F_{l-1} F_{l+1} F_{l+2}`.
pub fn fl_minus_one_divides(l: u64) -> Result<bool> {
    if l < 3 {
        return Err(Error::PreconditionViolated(format!("need l >= 3, got {l}")));
    }
    let divisor = fib(l) - 1;
    let product = fib(l - 2) * fib(l - 1) * fib(l + 1) * fib(l + 2);
    Ok(product.is_multiple_of(&divisor))
}

/// `F_l^k || F_n`: the exact power of `F_l` dividing `F_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuation {
    pub base_index: u64,
    pub target_index: u64,
    pub k: u32,
}

/// Exponent of the largest power of `base` (>= 2) dividing `x != 0`.
pub fn valuation_of(base: &BigInt, x: &BigInt) -> u32 {
    debug_assert!(base.abs() >= BigInt::from(2) && !x.is_zero());
    let mut k = 0;
    let mut rest = x.clone();
    loop {
        let (q, r) = rest.div_rem(base);
        if !r.is_zero() {
            return k;
        }
        rest = q;
        k += 1;
    }
}

pub fn fib_valuation(l: u64, n: u64) -> Result<Valuation> {
    if l < 3 || n < 1 {
        return Err(Error::PreconditionViolated(format!("need l >= 3 and n >= 1, got l={l}, n={n}")));
    }
    let k = valuation_of(&fib(l), &fib(n));
    Ok(Valuation { base_index: l, target_index: n, k })
}

/// Which clause of the exact-divisibility lemma applied, and its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivisibilityInstance {
    pub k: u32,
    pub clause: u8,
    pub expected_exponent: u32,
    pub observed_exponent: u32,
}

impl DivisibilityInstance {
    pub fn holds(&self) -> bool {
        self.expected_exponent == self.observed_exponent
    }
}

/// Evaluate the lemma on a concrete `(l, n)`: with `F_l^k || F_n` and `k >= 2`,
///
/// 1. `l != 3 (mod 6)`: `F_l^(k-1) || n/l`
/// 2. `l == 3 (mod 6)` and `2^(k-1) | n/l`: `F_l^(k-1) || n/l`
/// 3. `l == 3 (mod 6)` and `2^(k-1) ∤ n/l`: `F_l^(k-2) || n/l`
///
/// An exponent of 0 means `F_l ∤ n/l`.
pub fn exact_divisibility_instance(l: u64, n: u64) -> Result<DivisibilityInstance> {
    let v = fib_valuation(l, n)?;
    if v.k < 2 {
        return Err(Error::PreconditionViolated(format!(
            "F_{l}^k || F_{n} with k = {} < 2",
            v.k
        )));
    }
    if n % l != 0 {
        return Err(Error::PreconditionViolated(format!("{l} does not divide {n}")));
    }
    let quotient = n / l;
    let (clause, expected) = if l % 6 != 3 {
        (1, v.k - 1)
    } else if quotient % (1u64 << (v.k - 1).min(63)) == 0 && v.k - 1 < 64 {
        (2, v.k - 1)
    } else {
        (3, v.k - 2)
    };
    let observed = valuation_of(&fib(l), &BigInt::from(quotient));
    Ok(DivisibilityInstance { k: v.k, clause, expected_exponent: expected, observed_exponent: observed })
}

pub fn exact_divisibility_check(l: u64, n: u64) -> Result<bool> {
    Ok(exact_divisibility_instance(l, n)?.holds())
}

/// Lower bound on `ln n` for any solution: `ln l + (k-2)(l-2) ln phi`.
pub fn ln_n_lower_bound(l: u64, k: u64, digits: u32) -> Result<BallReal> {
    if l < 3 || k < 2 {
        return Err(Error::PreconditionViolated(format!("need l >= 3, k >= 2, got l={l}, k={k}")));
    }
    let ln_l = BallReal::from_int(l, digits).ln()?;
    let steps = BigInt::from(k - 2) * BigInt::from(l - 2);
    Ok(ln_l.add(&ln_phi(digits).mul_int(&steps)))
}
