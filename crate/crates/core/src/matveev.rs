//! Matveev's lower bound for linear forms in logarithms and the analytic
//! cascade that produces the first box of bounds on `(n, l, k, m)`.
//!
//! Two linear forms over `Q(sqrt 5)` (degree `D = 2`) are used:
//!
//! ```text
//! Λ1 = phi^n (sqrt 5)^-1 F_l^-(k+m) - 1              0 < -Λ1 < 1.03 / F_l^m
//! Λ2 = sqrt 5 phi^-n F_l^k (F_l^m - 1) - 1           |Λ2| < 1 / (2 phi^n)
//! ```
//!
//! Matveev turns the first into `m < 1.61e12 (1 + ln n)` and the second into
//! `n < K (l-1)^2 m (1 + ln n)`. Combining both with `(l-2) ln phi < ln n`
//! leaves an inequality in `n` alone, solved here by certified bisection.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{ln5, ln_phi, ln_sqrt5, parse_decimal, sqrt5, BallReal, Rational};
use crate::fibkit::fib;

/// Minimum admissible height constant in Matveev's bound.
pub const MIN_HEIGHT: (i64, u32) = (16, 2); // 0.16

/// Published rounding of the `m` coefficient: `161 * 10^10`.
pub fn m_coefficient_cap() -> Rational {
    Rational::from_integer(BigInt::from(161u32) * BigInt::from(10u32).pow(10))
}

fn min_height(digits: u32) -> BallReal {
    BallReal::from_rational(&crate::exactmath::decimal_ratio(MIN_HEIGHT.0, MIN_HEIGHT.1), digits)
}

/// `Λ = β_1^r_1 ... β_t^r_t - 1` described by what Matveev's bound needs.
#[derive(Debug, Clone)]
pub struct LinearFormSpec {
    pub term_count: u32,
    pub degree: u32,
    /// `T >= max |r_j|`
    pub t_bound: BigInt,
    /// `A_j >= max(D h(β_j), |ln β_j|, 0.16)`
    pub heights: Vec<BallReal>,
}

impl LinearFormSpec {
    pub fn new(degree: u32, t_bound: BigInt, heights: Vec<BallReal>) -> Result<Self> {
        if heights.len() < 2 {
            return Err(Error::PreconditionViolated("a linear form needs at least two terms".into()));
        }
        if degree < 1 || t_bound < BigInt::one() {
            return Err(Error::PreconditionViolated(format!("degree {degree}, T {t_bound}")));
        }
        let floor = min_height(heights[0].digits());
        if let Some(j) = heights.iter().position(|a| !floor.certainly_le(a)) {
            return Err(Error::PreconditionViolated(format!("A_{} is not certified >= 0.16", j + 1)));
        }
        Ok(LinearFormSpec { term_count: heights.len() as u32, degree, t_bound, heights })
    }

    fn digits(&self) -> u32 {
        self.heights[0].digits()
    }
}

/// `t^4.5 = t^4 sqrt t`
fn pow_four_and_half(t: u32, digits: u32) -> Result<BallReal> {
    let tb = BallReal::from_int(t, digits);
    Ok(tb.pow(4).mul(&tb.sqrt()?))
}

/// Upper enclosure of `C = 1.4 * 30^(t+3) * t^4.5 * D^2 (1 + ln D)(1 + ln T) A_1 ... A_t`,
/// so that `|Λ| > exp(-C)`.
pub fn matveev_exponent(spec: &LinearFormSpec) -> Result<BallReal> {
    let digits = spec.digits();
    let t = spec.term_count;
    let d = spec.degree;
    let mut c = BallReal::from_rational(&crate::exactmath::decimal_ratio(14, 1), digits)
        .mul_int(&BigInt::from(30u32).pow(t + 3))
        .mul(&pow_four_and_half(t, digits)?)
        .mul_int(&BigInt::from(d * d));
    c = c.mul(&BallReal::one(digits).add(&BallReal::from_int(d, digits).ln()?));
    c = c.mul(&BallReal::one(digits).add(&BallReal::from_int(spec.t_bound.clone(), digits).ln()?));
    for a in &spec.heights {
        c = c.mul(a);
    }
    Ok(c)
}

/// Heights of the numbers entering Λ1 and Λ2 for a given `(l, m)`.
#[derive(Debug, Clone)]
pub struct HeightTable {
    pub l: u64,
    pub m: u64,
    pub h_phi: BallReal,
    pub h_sqrt5: BallReal,
    pub h_fl: BallReal,
    pub h_flm1: BallReal,
}

/// Logarithmic height of a root of the irreducible `a0 x^2 + b x + c` with
/// real roots: `(ln a0 + Σ ln max(|root|, 1)) / 2`.
pub fn log_height_quadratic(a0: i64, b: i64, c: i64, digits: u32) -> Result<BallReal> {
    if a0 <= 0 {
        return Err(Error::PreconditionViolated("leading coefficient must be positive".into()));
    }
    let disc = BigInt::from(b) * b - BigInt::from(4) * a0 * c;
    if !disc.is_positive() {
        return Err(Error::PreconditionViolated("roots must be real and distinct".into()));
    }
    let root_disc = BallReal::from_int(disc, digits).sqrt()?;
    let minus_b = BallReal::from_int(-b, digits);
    let two_a = BallReal::from_int(2 * a0, digits);
    let one = BallReal::one(digits);
    let mut sum = BallReal::from_int(a0, digits).ln()?;
    for root in [minus_b.add(&root_disc).div(&two_a)?, minus_b.sub(&root_disc).div(&two_a)?] {
        let r = root.abs();
        match r.certified_cmp(&one) {
            Some(std::cmp::Ordering::Greater) => sum = sum.add(&r.ln()?),
            Some(_) => {}
            None => return Err(Error::AmbiguousPrecision("conjugate too close to 1")),
        }
    }
    Ok(sum.shl(-1))
}

/// Height of a nonzero rational integer: `ln |n|`.
pub fn log_height_integer(n: &BigInt, digits: u32) -> Result<BallReal> {
    if n.is_zero() {
        return Err(Error::PreconditionViolated("height of 0".into()));
    }
    BallReal::from_int(n.abs(), digits).ln()
}

pub fn height_table(l: u64, m: u64, digits: u32) -> Result<HeightTable> {
    if l < 3 || m < 1 {
        return Err(Error::PreconditionViolated(format!("need l >= 3, m >= 1, got l={l}, m={m}")));
    }
    let fl = fib(l);
    let flm1 = fl.pow(m as u32) - 1u32;
    Ok(HeightTable {
        l,
        m,
        h_phi: log_height_quadratic(1, -1, -1, digits)?,
        h_sqrt5: log_height_quadratic(1, 0, -5, digits)?,
        h_fl: log_height_integer(&fl, digits)?,
        h_flm1: log_height_integer(&flm1, digits)?,
    })
}

/// `a >= b`, accepting the case where both enclose the same value to within
/// their radii (the declared height equals `D h` by construction).
fn dominates(a: &BallReal, b: &BallReal) -> bool {
    b.certainly_le(a) || (a.overlaps(b) && a.sub(b).abs().rad().to_f64() < 1e-30)
}

/// Λ1 with `β = (phi, sqrt 5, F_l)`, `r = (n, -1, -(k+m))` and
/// `A = (ln phi, ln 5, 2 ln F_l)`.
pub fn lambda1_spec(l: u64, t_bound: BigInt, digits: u32) -> Result<LinearFormSpec> {
    let ln_fl = log_height_integer(&fib(l), digits)?;
    LinearFormSpec::new(2, t_bound, vec![ln_phi(digits), ln5(digits), ln_fl.shl(1)])
}

/// Λ2 with `β = (sqrt 5, phi, F_l, F_l^m - 1)`, `r = (1, -n, k, 1)` and
/// `A = (ln 5, ln phi, 2(l-1) ln phi, 2(l-1) m ln phi)`.
pub fn lambda2_spec(l: u64, m: u64, t_bound: BigInt, digits: u32) -> Result<LinearFormSpec> {
    let lp = ln_phi(digits);
    let a3 = lp.mul_int(&BigInt::from(2 * (l - 1)));
    let a4 = a3.mul_int(&BigInt::from(m));
    LinearFormSpec::new(2, t_bound, vec![ln5(digits), lp, a3, a4])
}

/// Check Matveev's side conditions for the declared heights of Λ1 and Λ2 at `(l, m)`.
pub fn heights_admissible(l: u64, m: u64, digits: u32) -> Result<bool> {
    let h = height_table(l, m, digits)?;
    let d = 2i64;
    let floor = min_height(digits);
    let lp = ln_phi(digits);
    let ok = |a: &BallReal, dh: &BallReal, log_abs: &BallReal| {
        dominates(a, &dh.mul_int(&BigInt::from(d))) && dominates(a, log_abs) && floor.certainly_le(a)
    };
    let l1 = lambda1_spec(l, BigInt::one(), digits)?;
    let l2 = lambda2_spec(l, m, BigInt::one(), digits)?;
    let form1 = ok(&l1.heights[0], &h.h_phi, &lp)
        && ok(&l1.heights[1], &h.h_sqrt5, &ln_sqrt5(digits))
        && ok(&l1.heights[2], &h.h_fl, &h.h_fl);
    let form2 = ok(&l2.heights[0], &h.h_sqrt5, &ln_sqrt5(digits))
        && ok(&l2.heights[1], &h.h_phi, &lp)
        && ok(&l2.heights[2], &h.h_fl, &h.h_fl)
        && ok(&l2.heights[3], &h.h_flm1, &h.h_flm1);
    // the table invariant h(F_l^m - 1) <= m (l-1) ln phi
    let cap = lp.mul_int(&(BigInt::from(m) * BigInt::from(l - 1)));
    Ok(form1 && form2 && h.h_flm1.certainly_le(&cap))
}

/// The constants behind `m < 1.61e12 (1 + ln n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCoefficient {
    /// `C(Λ1) / (ln F_l (1 + ln T))` = `1.4 * 30^6 * 3^4.5 * 2^3 (1 + ln 2) ln phi ln 5`
    pub matveev: BallReal,
    /// Coefficient with 1.4 replaced by 1.5 (absorbs `ln 1.03 / ln F_l`).
    pub padded: BallReal,
    /// Literal `D^2 (1 + ln D)` factor of the lower bound.
    pub degree_factor_literal: BallReal,
    /// The displayed `2^3 (1 + ln 2)`: `D^2` times the 2 of `A_3 = 2 ln F_l`.
    pub degree_factor_displayed: BallReal,
    pub cap: String,
}

pub fn m_coefficient(digits: u32) -> Result<MCoefficient> {
    // with T = 1 the (1 + ln T) factor is exactly 1; A_3 = 2 ln F_3 = 2 ln 2
    let spec = lambda1_spec(3, BigInt::one(), digits)?;
    let c = matveev_exponent(&spec)?;
    let per_log = c.div(&log_height_integer(&fib(3), digits)?)?;
    let padded = per_log.mul_int(&BigInt::from(15)).div_int(&BigInt::from(14))?;
    // m ln F_l < ln 1.03 + C, so m < C/ln F_l + ln(1.03)/ln 2; padding must cover the second term
    let slack = padded.sub(&per_log);
    let ln103 = BallReal::from_rational(&crate::exactmath::decimal_ratio(103, 2), digits).ln()?;
    let extra = ln103.div(&crate::exactmath::ln2(digits))?;
    if !extra.certainly_lt(&slack) {
        return Err(Error::VerificationFailed("1.5 padding does not absorb ln(1.03)/ln 2".into()));
    }
    let cap = m_coefficient_cap();
    if !padded.certainly_le(&BallReal::from_rational(&cap, digits)) {
        return Err(Error::VerificationFailed("m coefficient exceeds 1.61e12".into()));
    }
    let one_plus_ln2 = BallReal::one(digits).add(&crate::exactmath::ln2(digits));
    Ok(MCoefficient {
        matveev: per_log,
        padded,
        degree_factor_literal: one_plus_ln2.mul_int(&BigInt::from(4)),
        degree_factor_displayed: one_plus_ln2.mul_int(&BigInt::from(8)),
        cap: cap.to_integer().to_string(),
    })
}

/// Certified upper bound `1.61e12 (1 + ln n)` on `m`.
pub fn derive_m_bound(n: &BallReal) -> Result<BallReal> {
    let digits = n.digits();
    if !BallReal::from_int(9, digits).certainly_le(n) {
        return Err(Error::PreconditionViolated("need n >= 9".into()));
    }
    let one = BallReal::one(digits);
    Ok(BallReal::from_rational(&m_coefficient_cap(), digits).mul(&one.add(&n.ln()?)))
}

/// `K = C(Λ2) / (ln phi (l-1)^2 m (1 + ln T)) = 1.4 * 30^7 * 2^13 (1 + ln 2)(ln phi)^2 ln 5`,
/// so that `n < K (l-1)^2 m (1 + ln n)`.
pub fn n_coefficient(digits: u32) -> Result<BallReal> {
    let lp = ln_phi(digits);
    let two_lp = lp.shl(1);
    // (l - 1) = 1, m = 1, T = 1 isolate the constant
    let spec = LinearFormSpec::new(2, BigInt::one(), vec![ln5(digits), lp.clone(), two_lp.clone(), two_lp])?;
    matveev_exponent(&spec)?.div(&lp)
}

/// Right side of the final inequality over `n`: `K * 1.61e12 * [1 + ln n / ln phi]^2 (1 + ln n)^2 / n`.
pub fn n_bound_ratio(n: &BigInt, digits: u32) -> Result<BallReal> {
    let k = n_coefficient(digits)?;
    n_bound_ratio_with(&k, n, digits)
}

fn n_bound_ratio_with(k: &BallReal, n: &BigInt, digits: u32) -> Result<BallReal> {
    let nb = BallReal::from_int(n.clone(), digits);
    let ln_n = nb.ln()?;
    let one = BallReal::one(digits);
    let l_term = one.add(&ln_n.div(&ln_phi(digits))?);
    let n_term = one.add(&ln_n);
    k.mul(&BallReal::from_rational(&m_coefficient_cap(), digits))
        .mul(&l_term.mul(&l_term))
        .mul(&n_term.mul(&n_term))
        .div(&nb)
}

/// The ratio is decreasing from `n` onward when
/// `2 / (ln phi + ln n) + 2 / (1 + ln n) < 1`, and the left side only shrinks as `n` grows.
fn ratio_decreasing_from(n: &BigInt, digits: u32) -> Result<bool> {
    let ln_n = BallReal::from_int(n.clone(), digits).ln()?;
    let two = BallReal::from_int(2, digits);
    let one = BallReal::one(digits);
    let s = two
        .div(&ln_phi(digits).add(&ln_n))?
        .add(&two.div(&one.add(&ln_n))?);
    Ok(s.certainly_lt(&one))
}

/// Least `N` with a certified `(right side)/n < 1` at `N`, found by doubling
/// then bisection; monotonicity from `N` onward is certified as well.
pub fn solve_n_bound(digits: u32) -> Result<BigInt> {
    let k = n_coefficient(digits)?;
    let one = BallReal::one(digits);
    let holds = |n: &BigInt| -> Result<bool> { Ok(n_bound_ratio_with(&k, n, digits)?.certainly_lt(&one)) };
    let ceiling = BigInt::from(10u32).pow(50);
    let mut hi = BigInt::from(1u32) << 10u32;
    while !holds(&hi)? {
        hi <<= 1u32;
        if hi > ceiling {
            return Err(Error::NoConvergence("1e50".into()));
        }
    }
    let mut lo = &hi >> 1u32;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        if holds(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if !ratio_decreasing_from(&hi, digits)? {
        return Err(Error::VerificationFailed("ratio not certified decreasing beyond N".into()));
    }
    Ok(hi)
}

/// Largest `l` with `ln l + (l-2) ln phi < ln n_max` and largest `k` with
/// `(k-2) ln phi < ln n_max`, both floored at the hypothesis value 3.
pub fn lk_bounds_from_n(n_max: &BigInt, digits: u32) -> Result<(u64, u64)> {
    if n_max < &BigInt::from(9) {
        return Err(Error::PreconditionViolated(format!("need n_max >= 9, got {n_max}")));
    }
    let ln_n = BallReal::from_int(n_max.clone(), digits).ln()?;
    let lp = ln_phi(digits);
    // a value is kept unless the inequality certainly fails
    let mut l = 3u64;
    loop {
        let next = l + 1;
        let lhs = BallReal::from_int(next, digits).ln()?.add(&lp.mul_int(&BigInt::from(next - 2)));
        if ln_n.certainly_le(&lhs) {
            break;
        }
        l = next;
    }
    let mut k = 3u64;
    loop {
        let next = k + 1;
        if ln_n.certainly_le(&lp.mul_int(&BigInt::from(next - 2))) {
            break;
        }
        k = next;
    }
    Ok((l, k))
}

/// `n <= 2 + (k + m)(l - 1)`
pub fn n_from_size_bounds(k_max: &BigInt, m_max: &BigInt, l_max: &BigInt) -> BigInt {
    BigInt::from(2) + (k_max + m_max) * (l_max - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    #[serde(rename = "analytic")]
    Analytic,
    #[serde(rename = "reduced-1")]
    Reduced1,
    #[serde(rename = "reduced-2")]
    Reduced2,
    #[serde(rename = "searched")]
    Searched,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Analytic => "analytic",
            Stage::Reduced1 => "reduced-1",
            Stage::Reduced2 => "reduced-2",
            Stage::Searched => "searched",
        })
    }
}

/// Upper bounds on `(n, l, k, m)` at some point of the proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundState {
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub n_max: BigInt,
    pub l_max: u64,
    pub k_max: u64,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub m_max: BigInt,
    pub stage: Stage,
}

impl BoundState {
    /// Clamp to the hypothesis floors `n >= 9, l >= 3, k >= 3, m >= 2`.
    pub fn clamped(mut self) -> Self {
        self.n_max = self.n_max.max(BigInt::from(9));
        self.l_max = self.l_max.max(3);
        self.k_max = self.k_max.max(3);
        self.m_max = self.m_max.max(BigInt::from(2));
        self
    }

    /// No coordinate grew relative to `earlier`.
    pub fn within(&self, earlier: &BoundState) -> bool {
        self.n_max <= earlier.n_max
            && self.l_max <= earlier.l_max
            && self.k_max <= earlier.k_max
            && self.m_max <= earlier.m_max
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticStage {
    pub bounds: BoundState,
    /// Real-valued `m` bound at `n_max` before flooring.
    pub m_bound: BallReal,
    pub m_coefficient: MCoefficient,
    /// `1.4 * 30^7 * 2^13 (1 + ln 2)(ln phi)^2 ln 5`
    pub n_coefficient: BallReal,
    /// The final ratio at the computed `n_max`.
    pub ratio_at_n_max: BallReal,
}

pub fn analytic_stage(digits: u32) -> Result<AnalyticStage> {
    let m_coefficient = m_coefficient(digits)?;
    let n_coefficient = n_coefficient(digits)?;
    let n_max = solve_n_bound(digits)?;
    let ratio_at_n_max = n_bound_ratio_with(&n_coefficient, &n_max, digits)?;
    let m_bound = derive_m_bound(&BallReal::from_int(n_max.clone(), digits))?;
    let m_max = m_bound.upper().floor();
    let (l_max, k_max) = lk_bounds_from_n(&n_max, digits)?;
    let bounds = BoundState { n_max, l_max, k_max, m_max, stage: Stage::Analytic }.clamped();
    Ok(AnalyticStage { bounds, m_bound, m_coefficient, n_coefficient, ratio_at_n_max })
}

/// `Γ = n ln phi - (k+m) ln F_l - ln sqrt 5`, so that `Λ1 = e^Γ - 1`.
pub fn gamma_form(n: u64, l: u64, u: u64, digits: u32) -> Result<BallReal> {
    let ln_fl = log_height_integer(&fib(l), digits)?;
    Ok(ln_phi(digits)
        .mul_int(&BigInt::from(n))
        .sub(&ln_fl.mul_int(&BigInt::from(u)))
        .sub(&ln_sqrt5(digits)))
}

/// `Λ1 = phi^n / (sqrt 5 F_l^(k+m)) - 1`, evaluated directly.
pub fn lambda1_value(n: u64, l: u64, u: u64, digits: u32) -> Result<BallReal> {
    let num = crate::exactmath::phi(digits).pow(n);
    let den = sqrt5(digits).mul(&BallReal::from_int(fib(l).pow(u as u32), digits));
    Ok(num.div(&den)?.sub(&BallReal::one(digits)))
}

/// `Λ2 = sqrt 5 phi^-n F_l^k (F_l^m - 1) - 1`, evaluated directly.
pub fn lambda2_value(n: u64, l: u64, k: u64, m: u64, digits: u32) -> Result<BallReal> {
    let fl = fib(l);
    let rhs = fl.pow(k as u32) * (fl.pow(m as u32) - 1u32);
    let phin = crate::exactmath::phi(digits).pow(n);
    Ok(sqrt5(digits).mul(&BallReal::from_int(rhs, digits)).div(&phin)?.sub(&BallReal::one(digits)))
}

/// Parse one of the published decimal constants, e.g. `"4.64e34"`.
pub fn decimal_constant(s: &str) -> Rational {
    parse_decimal(s).expect("literal decimal")
}
