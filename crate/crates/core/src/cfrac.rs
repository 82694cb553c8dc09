//! Certified continued-fraction expansion of ball reals.
//!
//! A partial quotient is emitted only when every real inside the enclosing
//! interval shares it. The expansion runs on the exact rational endpoints of
//! the ball, so no rounding accumulates along the way; when the interval gets
//! too wide to decide the next quotient, the source is re-evaluated at
//! doubled precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{BallReal, Precision, Rational, RealSource};

/// Default cap on convergent denominators: `10^100`.
pub fn default_denominator_cap() -> BigInt {
    BigInt::from(10u32).pow(100)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialQuotients {
    /// `a_0; a_1, a_2, ...` with `a_i >= 1` for `i >= 1`.
    pub a: Vec<BigInt>,
    /// Number of leading quotients shared by every point of the source ball.
    pub certified_len: usize,
    /// The source was an exact rational and its expansion ended.
    pub terminated: bool,
    /// Precision at which the quotients were certified.
    pub digits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub p: BigInt,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }

    /// Certified `|x - p/q| < 1/q^2`, i.e. `|q x - p| < 1/q`.
    pub fn approximates(&self, x: &BallReal) -> bool {
        let qx = x.mul_int(&self.q);
        let err = qx.sub(&BallReal::from_int(self.p.clone(), x.digits())).abs();
        let bound = BallReal::from_rational(&Rational::new(BigInt::one(), self.q.clone()), x.digits());
        err.certainly_lt(&bound)
    }
}

/// Common continued-fraction prefix of every real in `[lo, hi]`.
///
/// Returns the certified quotients and whether the expansion terminated
/// (only possible when `lo == hi`).
pub fn expand_interval(lo: &Rational, hi: &Rational, limit: usize) -> (Vec<BigInt>, bool) {
    assert!(lo <= hi, "empty interval");
    let mut out = Vec::new();
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    while out.len() < limit {
        let a = lo.floor().to_integer();
        if hi.floor().to_integer() != a {
            return (out, false);
        }
        let a_r = Rational::from_integer(a.clone());
        out.push(a);
        let f_lo = &lo - &a_r;
        let f_hi = &hi - &a_r;
        if f_lo.is_zero() {
            // exact integer: done; otherwise the point could be the integer
            // itself or lie just above it
            return (out, f_hi.is_zero());
        }
        // x -> 1/(x - a) reverses the order
        lo = f_hi.recip();
        hi = f_lo.recip();
    }
    (out, false)
}

/// Quotients certified by a single ball evaluation.
pub fn expand_ball(x: &BallReal, limit: usize) -> PartialQuotients {
    let lo = x.lower().to_rational();
    let hi = x.upper().to_rational();
    let (a, terminated) = expand_interval(&lo, &hi, limit);
    PartialQuotients { certified_len: a.len(), a, terminated, digits: x.digits() }
}

/// At least `count` certified quotients (fewer only if the expansion terminates),
/// escalating precision as needed.
pub fn expand(source: &dyn RealSource, count: usize, prec: Precision) -> Result<PartialQuotients> {
    let mut p = prec;
    loop {
        let ball = source.eval(p.digits)?;
        let pq = expand_ball(&ball, count);
        if pq.terminated || pq.certified_len >= count {
            return Ok(pq);
        }
        p = p.escalate()?;
    }
}

/// Convergents `p_i/q_i` of the certified prefix, with `p_0/q_0 = a_0/1`.
pub fn convergents(pq: &PartialQuotients) -> Vec<Convergent> {
    convergents_of(&pq.a[..pq.certified_len])
}

pub fn convergents_of(a: &[BigInt]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(a.len());
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    // seeds: p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1
    for (index, ai) in a.iter().enumerate() {
        let p_next = ai * &p_prev + &p;
        let q_next = ai * &q_prev + &q;
        p = std::mem::replace(&mut p_prev, p_next);
        q = std::mem::replace(&mut q_prev, q_next);
        out.push(Convergent { index, p: p_prev.clone(), q: q_prev.clone() });
    }
    out
}

/// Exact value of `[a_0; a_1, ..., a_k]`, folded from the tail.
pub fn evaluate(a: &[BigInt]) -> Option<Rational> {
    let (last, rest) = a.split_last()?;
    let mut acc = Rational::from_integer(last.clone());
    for ai in rest.iter().rev() {
        acc = Rational::from_integer(ai.clone()) + acc.recip();
    }
    Some(acc)
}

/// Depth cap guarding against runaway expansions.
const MAX_QUOTIENTS: usize = 4096;

/// Certified convergents of `source`, escalating precision until one has
/// `q > threshold`. Returns that convergent together with every certified
/// convergent seen at the final precision.
pub fn convergents_until(
    source: &dyn RealSource,
    threshold: &BigInt,
    prec: Precision,
    cap: &BigInt,
) -> Result<(usize, Vec<Convergent>, u32)> {
    if threshold >= cap {
        return Err(Error::DenominatorCapExceeded { cap: cap.to_string() });
    }
    let mut p = prec;
    loop {
        let ball = source.eval(p.digits)?;
        let pq = expand_ball(&ball, MAX_QUOTIENTS);
        let convs = convergents(&pq);
        if let Some(i) = convs.iter().position(|c| &c.q > threshold) {
            return Ok((i, convs, p.digits));
        }
        if pq.terminated {
            return Err(Error::TerminatedBelowThreshold { threshold: threshold.to_string() });
        }
        p = p.escalate()?;
    }
}

/// The least-index certified convergent with `q > threshold`.
pub fn first_convergent_above(
    source: &dyn RealSource,
    threshold: &BigInt,
    prec: Precision,
) -> Result<Convergent> {
    let (i, convs, _) = convergents_until(source, threshold, prec, &default_denominator_cap())?;
    Ok(convs[i].clone())
}

/// `gcd(p, q) == 1` and `q >= 1`.
pub fn is_reduced(c: &Convergent) -> bool {
    c.q.is_positive() && c.p.gcd(&c.q).is_one()
}
