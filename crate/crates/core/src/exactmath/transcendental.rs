//! Certified square roots and natural logarithms on balls.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;

use super::ball::{BallReal, RAD_BITS};
use super::dyadic::Dyadic;
use super::precision::bits_for_digits;
use crate::error::{Error, Result};

/// Extra working bits for series evaluation.
const GUARD_DIGITS: u32 = 6;

impl BallReal {
    /// Enclosure of `sqrt(x)` for a ball lying strictly above zero.
    pub fn sqrt(&self) -> Result<BallReal> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::NonPositiveInput);
        }
        let bits = self.bits();
        let (root, exact, ulp_exp) = self.mid().sqrt_floor(bits + 2);
        // the true root lies in [root, root + ulp)
        let ulp = if exact { Dyadic::zero() } else { Dyadic::pow2(ulp_exp) };
        let mid = root.add(&ulp.shl(-1));
        let mut rad = ulp.shl(-1);
        if !self.rad().is_zero() {
            // |sqrt(x) - sqrt(m)| = |x - m| / (sqrt(x) + sqrt(m)) <= rad / (2 sqrt(lo))
            let (lo_root, _, _) = lo.round_floor(RAD_BITS).sqrt_floor(RAD_BITS);
            let denom = lo_root.shl(1);
            rad = rad.add(&self.rad().div_up(&denom, RAD_BITS));
        }
        Ok(BallReal::new(mid, rad, self.digits()).with_digits(self.digits()))
    }

    /// Enclosure of `ln(x)` for a ball lying strictly above zero.
    pub fn ln(&self) -> Result<BallReal> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::NonPositiveInput);
        }
        let at_mid = ln_dyadic(self.mid(), self.digits());
        if self.rad().is_zero() {
            return Ok(at_mid);
        }
        // mean value bound: |ln x - ln m| <= |x - m| / min(x, m) <= rad / lo
        let spread = self.rad().div_up(&lo.round_floor(RAD_BITS), RAD_BITS);
        Ok(BallReal::new(at_mid.mid().clone(), at_mid.rad().add(&spread), self.digits()))
    }
}

impl BallReal {
    /// Enclosure of `exp(x)` for a ball inside `[-1, 1]`.
    pub fn exp_small(&self) -> Result<BallReal> {
        let one = BallReal::one(self.digits());
        if !self.abs().certainly_le(&one) {
            return Err(Error::PreconditionViolated("exp_small needs |x| <= 1".into()));
        }
        let work = self.digits() + GUARD_DIGITS;
        let target = bits_for_digits(work) as f64 + 4.0;
        let x = self.with_digits(work);
        let mut term = BallReal::one(work);
        let mut sum = term.clone();
        let mut log2_fact = 0.0f64;
        let mut j = 1u64;
        // stop once 1/j! < 2^-target
        while log2_fact < target {
            term = term.mul(&x).div_int(&BigInt::from(j)).expect("nonzero divisor");
            sum = sum.add(&term);
            j += 1;
            log2_fact += (j as f64).log2();
        }
        // tail: sum_{i>=j} |x|^i / i! <= 2 / j!
        let tail = Dyadic::pow2(1 - log2_fact.floor() as i64);
        Ok(BallReal::new(sum.mid().clone(), sum.rad().add(&tail), work).with_digits(self.digits()))
    }
}

/// `2 * atanh(z) = ln((1+z)/(1-z))` for an exact `|z| <= 1/3`, with series tail bound.
fn two_atanh(z: &BallReal, z_abs_bound_log2: f64, digits: u32) -> BallReal {
    let work = digits + GUARD_DIGITS;
    let target_bits = bits_for_digits(work) as f64 + 4.0;
    // terms needed: |z|^(2N+1) < 2^-target
    let n_terms = (target_bits / (-2.0 * z_abs_bound_log2)).ceil() as u64 + 1;
    let z = z.with_digits(work);
    let z2 = z.mul(&z);
    let mut power = z.clone();
    let mut sum = z.clone();
    for i in 1..n_terms {
        power = power.mul(&z2);
        let term = power
            .div_int(&BigInt::from(2 * i + 1))
            .expect("odd integer divisor is nonzero");
        sum = sum.add(&term);
    }
    // tail: sum_{i>=N} |z|^(2i+1)/(2i+1) <= |z|^(2N+1) / ((2N+1)(1 - z^2)) <= 2 |z|^(2N+1)
    let tail_log2 = z_abs_bound_log2 * (2 * n_terms + 1) as f64;
    let tail = Dyadic::pow2(tail_log2.floor() as i64 + 2);
    let doubled = sum.shl(1);
    BallReal::new(doubled.mid().clone(), doubled.rad().add(&tail), work)
}

fn ln2_cache() -> &'static Mutex<HashMap<u32, BallReal>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BallReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `ln 2 = 2 atanh(1/3)`, cached per precision.
pub fn ln2(digits: u32) -> BallReal {
    if let Some(v) = ln2_cache().lock().expect("ln2 cache").get(&digits) {
        return v.clone();
    }
    let third = BallReal::from_int(1, digits + GUARD_DIGITS)
        .div_int(&BigInt::from(3))
        .expect("nonzero");
    let v = two_atanh(&third, -(3f64.log2()), digits);
    ln2_cache().lock().expect("ln2 cache").insert(digits, v.clone());
    v
}

/// Logarithm of a positive exact dyadic.
fn ln_dyadic(x: &Dyadic, digits: u32) -> BallReal {
    debug_assert!(x.is_positive());
    let work = digits + GUARD_DIGITS;
    // x = y * 2^j with y in [3/4, 3/2)
    let msb = x.magnitude_bits();
    let mut j = msb;
    let mut y = x.shl(-j); // in [1/2, 1)
    if y < Dyadic::new(BigInt::from(3), -2) {
        j -= 1;
        y = y.shl(1);
    }
    let one = BallReal::one(work);
    let yb = BallReal::exact(y, work);
    let num = yb.sub(&one);
    let den = yb.add(&one);
    let z = num.div(&den).expect("y + 1 > 0");
    // |z| <= 1/5 on [3/4, 3/2)
    let mut out = two_atanh(&z, -(5f64.log2()), digits);
    if j != 0 {
        out = out.add(&ln2(digits).mul_int(&BigInt::from(j)));
    }
    out.with_digits(digits)
}

fn const_cache() -> &'static Mutex<HashMap<(&'static str, u32), BallReal>> {
    static CACHE: OnceLock<Mutex<HashMap<(&'static str, u32), BallReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(name: &'static str, digits: u32, f: impl FnOnce() -> BallReal) -> BallReal {
    if let Some(v) = const_cache().lock().expect("constant cache").get(&(name, digits)) {
        return v.clone();
    }
    let v = f();
    const_cache().lock().expect("constant cache").insert((name, digits), v.clone());
    v
}

pub fn sqrt5(digits: u32) -> BallReal {
    cached("sqrt5", digits, || BallReal::from_int(5, digits).sqrt().expect("5 > 0"))
}

/// The golden ratio `(1 + sqrt 5) / 2`.
pub fn phi(digits: u32) -> BallReal {
    cached("phi", digits, || sqrt5(digits).add(&BallReal::one(digits)).shl(-1))
}

pub fn ln_phi(digits: u32) -> BallReal {
    cached("ln_phi", digits, || phi(digits).ln().expect("phi > 0"))
}

pub fn ln5(digits: u32) -> BallReal {
    cached("ln5", digits, || BallReal::from_int(5, digits).ln().expect("5 > 0"))
}

/// `ln sqrt 5 = ln(5) / 2`
pub fn ln_sqrt5(digits: u32) -> BallReal {
    ln5(digits).shl(-1)
}
