//! Dujella–Pethő reduction with a certified `epsilon`.
//!
//! Let `M >= 1`, `A > 0`, `B > 1`, and let `p/q` be a convergent of the
//! irrational `gamma` with `q > 6M`. If `eps = ||mu q|| - M ||gamma q|| > 0`
//! then
//!
//! ```text
//! 0 < |u gamma - v + mu| < A B^-w
//! ```
//!
//! has no solution in positive integers with `u <= M` and
//! `w >= log(A q / eps) / log B`.
//!
//! For the Fibonacci application `gamma = ln F_l / ln phi`,
//! `mu = ln sqrt 5 / ln phi`, `A = 1.03 / ln phi`, `B = 2`, `u = k + m`,
//! `v = n` and `w = m - 1`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfrac::{convergents_until, default_denominator_cap};
use crate::error::{Error, Result};
use crate::exactmath::{decimal_ratio, ln_phi, ln_sqrt5, BallReal, Dyadic, Precision, Rational, RealSource};
use crate::fibkit::fib;

/// Significant digits kept when `epsilon`'s lower endpoint is written out.
pub const EPSILON_SIG_DIGITS: u32 = 30;

/// The ω bound is rounded up to a multiple of `1/OMEGA_DENOMINATOR`.
pub const OMEGA_DENOMINATOR: u32 = 1_000_000;

pub type SharedSource = Arc<dyn RealSource>;

#[derive(Clone)]
pub struct ReductionInstance {
    /// Label of the instance; the Fibonacci index `l` in the application.
    pub l: u64,
    pub gamma: SharedSource,
    pub mu: SharedSource,
    pub a: SharedSource,
    pub b: SharedSource,
    pub m: BigInt,
}

impl std::fmt::Debug for ReductionInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReductionInstance").field("l", &self.l).field("m", &self.m).finish_non_exhaustive()
    }
}

impl ReductionInstance {
    pub fn new(
        l: u64,
        gamma: SharedSource,
        mu: SharedSource,
        a: SharedSource,
        b: SharedSource,
        m: BigInt,
    ) -> Result<Self> {
        if m < BigInt::one() {
            return Err(Error::PreconditionViolated(format!("M must be >= 1, got {m}")));
        }
        let digits = 40;
        if !a.eval(digits)?.is_positive() {
            return Err(Error::PreconditionViolated("A must be > 0".into()));
        }
        if !BallReal::one(digits).certainly_lt(&b.eval(digits)?) {
            return Err(Error::PreconditionViolated("B must be > 1".into()));
        }
        Ok(ReductionInstance { l, gamma, mu, a, b, m })
    }

    /// `gamma_l = ln F_l / ln phi`, `mu = ln sqrt 5 / ln phi`, `A = 1.03 / ln phi`, `B = 2`.
    pub fn fibonacci(l: u64, m: BigInt) -> Result<Self> {
        if l < 3 {
            return Err(Error::PreconditionViolated(format!("need l >= 3, got {l}")));
        }
        let fl = fib(l);
        let gamma = move |d: u32| BallReal::from_int(fl.clone(), d).ln()?.div(&ln_phi(d));
        let mu = |d: u32| ln_sqrt5(d).div(&ln_phi(d));
        let a = |d: u32| BallReal::from_rational(&decimal_ratio(103, 2), d).div(&ln_phi(d));
        let b = |d: u32| Ok(BallReal::from_int(2, d));
        Self::new(l, Arc::new(gamma), Arc::new(mu), Arc::new(a), Arc::new(b), m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionOutcome {
    pub l: u64,
    pub q_index: usize,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub p: BigInt,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub q: BigInt,
    /// Decimal lower bound on `epsilon`.
    #[serde(with = "crate::pipeline::serde_decimal")]
    pub epsilon_lower: Rational,
    /// Upper bound on `log(A q / epsilon) / log B`, a multiple of `1e-6`.
    #[serde(with = "crate::pipeline::serde_decimal")]
    pub omega_bound: Rational,
    /// Precision at which `epsilon` was certified.
    pub digits: u32,
    /// Convergents with `q > 6M` passed over because `epsilon <= 0`.
    pub skipped: usize,
    pub certified: bool,
}

/// `||mu q|| - M ||gamma q||` at the given precision.
pub fn epsilon(inst: &ReductionInstance, q: &BigInt, digits: u32) -> Result<BallReal> {
    let g = inst.gamma.eval(digits)?.mul_int(q).nearest_int_distance()?;
    let m = inst.mu.eval(digits)?.mul_int(q).nearest_int_distance()?;
    Ok(m.sub(&g.mul_int(&inst.m)))
}

/// Positive `x` rounded down to about `sig` significant decimal digits.
pub fn decimal_floor(x: &Dyadic, sig: u32) -> Rational {
    debug_assert!(x.is_positive());
    let mag = x.magnitude_bits();
    let log10 = (mag as f64 * std::f64::consts::LOG10_2).ceil() as i64;
    let scale = sig as i64 - log10;
    let r = x.to_rational();
    let ten = BigInt::from(10u32);
    if scale >= 0 {
        let s = ten.pow(scale as u32);
        Rational::new((r * Rational::from_integer(s.clone())).floor().to_integer(), s)
    } else {
        let s = ten.pow((-scale) as u32);
        Rational::from_integer((r / Rational::from_integer(s.clone())).floor().to_integer() * s)
    }
}

/// Enclosure of `log(A q / eps) / log B` for an exact `eps > 0`.
pub fn omega_ball(inst: &ReductionInstance, q: &BigInt, eps: &Rational, digits: u32) -> Result<BallReal> {
    let a = inst.a.eval(digits)?;
    let ratio = a.mul_int(q).div(&BallReal::from_rational(eps, digits))?;
    ratio.ln()?.div(&inst.b.eval(digits)?.ln()?)
}

/// `ceil(x * 1e6) / 1e6` applied to the upper endpoint.
pub fn round_up_omega(omega: &BallReal) -> Rational {
    let den = BigInt::from(OMEGA_DENOMINATOR);
    let scaled = omega.upper().to_rational() * Rational::from_integer(den.clone());
    Rational::new(scaled.ceil().to_integer(), den)
}

/// First certified convergent with `q > 6M` and `epsilon > 0`.
pub fn reduce_one(inst: &ReductionInstance, prec: Precision, cap: &BigInt) -> Result<ReductionOutcome> {
    let six_m = &inst.m * 6u32;
    let mut p = prec;
    // convergents with q <= floor are already dealt with
    let mut floor = six_m.clone();
    let mut skipped = 0usize;
    loop {
        let (start, convs, cf_digits) = convergents_until(inst.gamma.as_ref(), &floor, p, cap)?;
        p = Precision { digits: p.digits.max(cf_digits), ..p };
        let mut escalate = false;
        for c in &convs[start..] {
            if &c.q > cap {
                return Err(Error::DenominatorCapExceeded { cap: cap.to_string() });
            }
            let eps = match epsilon(inst, &c.q, p.digits) {
                Ok(e) => e,
                Err(Error::AmbiguousPrecision(_)) => {
                    escalate = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            if eps.is_positive() {
                let eps_lower = decimal_floor(&eps.lower(), EPSILON_SIG_DIGITS);
                let omega = omega_ball(inst, &c.q, &eps_lower, p.digits)?;
                return Ok(ReductionOutcome {
                    l: inst.l,
                    q_index: c.index,
                    p: c.p.clone(),
                    q: c.q.clone(),
                    epsilon_lower: eps_lower,
                    omega_bound: round_up_omega(&omega),
                    digits: p.digits,
                    skipped,
                    certified: true,
                });
            }
            if !eps.upper().is_positive() {
                skipped += 1;
                floor = c.q.clone();
                continue;
            }
            escalate = true;
            break;
        }
        if escalate {
            p = p.escalate()?;
        } else if let Some(last) = convs.last() {
            // every certified convergent was used up; ask for a longer expansion
            floor = floor.max(last.q.clone());
        }
    }
}

/// Re-check an outcome against its instance: `q > 6M`, `epsilon` recomputed at
/// the recorded precision is at least `epsilon_lower > 0`, and the recorded
/// ω bound dominates `log(A q / epsilon_lower) / log B`.
pub fn check_outcome(inst: &ReductionInstance, out: &ReductionOutcome) -> Result<()> {
    let fail = |what: &str| Err(Error::VerificationFailed(format!("l = {}: {what}", out.l)));
    if !out.certified {
        return fail("outcome not certified");
    }
    if out.q <= &inst.m * 6u32 {
        return fail("q <= 6M");
    }
    if !out.epsilon_lower.is_positive() {
        return fail("epsilon_lower <= 0");
    }
    let eps = epsilon(inst, &out.q, out.digits)?;
    if !BallReal::from_rational(&out.epsilon_lower, out.digits).certainly_le(&eps) {
        return fail("recomputed epsilon is below epsilon_lower");
    }
    let omega = omega_ball(inst, &out.q, &out.epsilon_lower, out.digits)?;
    if !omega.certainly_le(&BallReal::from_rational(&out.omega_bound, out.digits)) {
        return fail("omega bound too small");
    }
    Ok(())
}

/// How per-instance ω bounds are combined into `m_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// One bound from the largest `q` and the smallest `epsilon` over all `l`.
    #[default]
    Pooled,
    /// Maximum of the individual bounds.
    PerL,
}

#[derive(Debug, Clone)]
pub struct RoundOptions {
    pub precision: Precision,
    pub cap: BigInt,
    pub jobs: usize,
    pub aggregation: Aggregation,
    /// Directory holding one re-checked JSON outcome per `(M, l)`.
    pub cache_dir: Option<PathBuf>,
}

impl Default for RoundOptions {
    fn default() -> Self {
        RoundOptions {
            precision: Precision::default(),
            cap: default_denominator_cap(),
            jobs: 0,
            aggregation: Aggregation::Pooled,
            cache_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSummary {
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub m_bound: BigInt,
    pub l_range: (u64, u64),
    pub table: Vec<ReductionOutcome>,
    pub max_q_l: u64,
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub max_q: BigInt,
    pub min_epsilon_l: u64,
    #[serde(with = "crate::pipeline::serde_decimal")]
    pub min_epsilon: Rational,
    /// `log(A max q / min epsilon) / log B`, rounded up.
    #[serde(with = "crate::pipeline::serde_decimal")]
    pub pooled_omega: Rational,
    #[serde(with = "crate::pipeline::serde_decimal")]
    pub per_l_max_omega: Rational,
    pub aggregation: Aggregation,
    /// `1 + floor(ω)` for the chosen aggregation.
    #[serde(with = "crate::pipeline::serde_bigint")]
    pub m_max: BigInt,
}

impl RoundSummary {
    pub fn omega(&self) -> &Rational {
        match self.aggregation {
            Aggregation::Pooled => &self.pooled_omega,
            Aggregation::PerL => &self.per_l_max_omega,
        }
    }
}

/// `1 + floor(omega)`, since `omega` bounds `m - 1`.
pub fn m_max_from_omega(omega: &Rational) -> BigInt {
    omega.floor().to_integer() + 1
}

fn cache_path(dir: &Path, m: &BigInt, l: u64) -> PathBuf {
    dir.join(format!("reduce-M{m}-l{l}.json"))
}

fn load_cached(dir: &Path, inst: &ReductionInstance) -> Option<ReductionOutcome> {
    let text = fs::read_to_string(cache_path(dir, &inst.m, inst.l)).ok()?;
    let out: ReductionOutcome = serde_json::from_str(&text).ok()?;
    (out.l == inst.l && check_outcome(inst, &out).is_ok()).then_some(out)
}

fn store_cached(dir: &Path, out: &ReductionOutcome, m: &BigInt) -> Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = cache_path(dir, m, out.l).with_extension("tmp");
    fs::write(&tmp, serde_json::to_string_pretty(out)?)?;
    fs::rename(tmp, cache_path(dir, m, out.l))?;
    Ok(())
}

/// Solve one instance, going through the cache when one is configured.
pub fn reduce_cached(inst: &ReductionInstance, opts: &RoundOptions) -> Result<ReductionOutcome> {
    if let Some(dir) = &opts.cache_dir {
        if let Some(out) = load_cached(dir, inst) {
            return Ok(out);
        }
    }
    let out = reduce_one(inst, opts.precision, &opts.cap)?;
    if let Some(dir) = &opts.cache_dir {
        store_cached(dir, &out, &inst.m)?;
    }
    Ok(out)
}

/// Run the Fibonacci instances for every `l` in `l_lo..=l_hi` and combine them.
/// `progress` is called once per finished `l`, in completion order.
pub fn reduce_round(
    m: &BigInt,
    l_lo: u64,
    l_hi: u64,
    opts: &RoundOptions,
    progress: Option<&(dyn Fn(&ReductionOutcome) + Sync)>,
) -> Result<RoundSummary> {
    if l_lo < 3 || l_lo > l_hi {
        return Err(Error::PreconditionViolated(format!("bad l range [{l_lo}, {l_hi}]")));
    }
    let instances = (l_lo..=l_hi)
        .map(|l| ReductionInstance::fibonacci(l, m.clone()))
        .collect::<Result<Vec<_>>>()?;
    let run = || -> Result<Vec<ReductionOutcome>> {
        instances
            .par_iter()
            .map(|inst| {
                let out = reduce_cached(inst, opts)?;
                if let Some(cb) = progress {
                    cb(&out);
                }
                Ok(out)
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::PreconditionViolated(e.to_string()))?;
    let table = pool.install(run)?;
    summarize(&instances[0], m, (l_lo, l_hi), table, opts)
}

fn summarize(
    sample: &ReductionInstance,
    m: &BigInt,
    l_range: (u64, u64),
    table: Vec<ReductionOutcome>,
    opts: &RoundOptions,
) -> Result<RoundSummary> {
    // ties go to the smallest l so the summary does not depend on scheduling
    let max_q = table.iter().fold(&table[0], |best, o| if o.q > best.q { o } else { best });
    let min_eps = table
        .iter()
        .fold(&table[0], |best, o| if o.epsilon_lower < best.epsilon_lower { o } else { best });
    let per_l_max_omega = table.iter().map(|o| o.omega_bound.clone()).max().unwrap_or_else(Rational::zero);
    // A and B are the same for every l, so any instance evaluates the pooled bound
    let digits = table.iter().map(|o| o.digits).max().unwrap_or(opts.precision.digits);
    let pooled = omega_ball(sample, &max_q.q, &min_eps.epsilon_lower, digits)?;
    let pooled_omega = round_up_omega(&pooled);
    let chosen = match opts.aggregation {
        Aggregation::Pooled => &pooled_omega,
        Aggregation::PerL => &per_l_max_omega,
    };
    Ok(RoundSummary {
        m_bound: m.clone(),
        l_range,
        max_q_l: max_q.l,
        max_q: max_q.q.clone(),
        min_epsilon_l: min_eps.l,
        min_epsilon: min_eps.epsilon_lower.clone(),
        m_max: m_max_from_omega(chosen),
        pooled_omega,
        per_l_max_omega,
        aggregation: opts.aggregation,
        table,
    })
}

/// `log_10` of a positive rational, as a float for display.
pub fn approx_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Real index `n*` with `phi^n* / sqrt 5 = F_l^k (F_l^m - 1)`, the main term of a solution.
pub fn main_term_index(l: u64, k: u64, m: u64, digits: u32) -> Result<BallReal> {
    let fl = fib(l);
    let rhs = fl.pow(k as u32) * (fl.pow(m as u32) - 1u32);
    let s5 = crate::exactmath::sqrt5(digits);
    BallReal::from_int(rhs, digits).mul(&s5).ln()?.div(&ln_phi(digits))
}

/// `0 < -Γ < e^-Γ - 1` and `-Γ < 2.06 / F_l^m` for
/// `Γ = n ln phi - (k+m) ln F_l - ln sqrt 5`, `n` given as a ball.
pub fn gamma_chain_check(n: &BallReal, l: u64, k: u64, m: u64) -> Result<bool> {
    let digits = n.digits();
    let fl = fib(l);
    let u = BigInt::from(k + m);
    let gamma = n
        .mul(&ln_phi(digits))
        .sub(&BallReal::from_int(fl.clone(), digits).ln()?.mul_int(&u))
        .sub(&ln_sqrt5(digits));
    let minus = gamma.neg();
    let exp_minus = minus.exp_small()?.sub(&BallReal::one(digits));
    let cap = BallReal::from_rational(&decimal_ratio(206, 2), digits)
        .div(&BallReal::from_int(fl.pow(m as u32), digits))?;
    Ok(minus.is_positive() && minus.certainly_lt(&exp_minus) && minus.certainly_lt(&cap))
}
