//! Independent oracles for the integration tests. Nothing here calls into the
//! crate's numeric code; each routine uses a different algorithm from the one
//! under test.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use fibcert::exactmath::ExactSource;
use fibcert::reduction::ReductionInstance;
use fibcert::{BallReal, Rational};
use std::sync::Arc;

/// Fixed-point reals `x = raw / 2^BITS`, truncating at every step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub BigInt);

pub const BITS: u32 = 1200;

impl Fixed {
    pub fn from_rational(r: &BigRational) -> Self {
        Fixed((r.numer() << BITS) / r.denom())
    }

    pub fn from_int(n: i64) -> Self {
        Fixed(BigInt::from(n) << BITS)
    }

    pub fn add(&self, o: &Self) -> Self {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn div(&self, o: &Self) -> Self {
        Fixed((&self.0 << BITS) / &o.0)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.0.is_negative());
        Fixed((&self.0 << BITS).sqrt())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// `ln x` by halving the argument into `[1, 2)`, taking twenty square
    /// roots, then summing the Mercator series for `ln(1 + t)`.
    pub fn ln(&self) -> Self {
        assert!(self.0.is_positive());
        let one = BigInt::one() << BITS;
        let mut x = self.0.clone();
        let mut shift: i64 = 0;
        while x >= (&one << 1u32) {
            x >>= 1u32;
            shift += 1;
        }
        while x < one {
            x <<= 1u32;
            shift -= 1;
        }
        let roots = 20;
        let mut y = Fixed(x);
        for _ in 0..roots {
            y = y.sqrt();
        }
        let t = y.sub(&Fixed(one.clone()));
        let mut sum = Fixed(BigInt::zero());
        let mut power = t.clone();
        let mut k = 1i64;
        while !power.0.is_zero() {
            let term = Fixed(&power.0 / k);
            sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
            power = power.mul(&t);
            k += 1;
        }
        let ln_y = Fixed(sum.0 << roots);
        ln_y.add(&Fixed(ln2().0 * shift))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.0.clone(), BigInt::one() << BITS)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_rational().to_f64().unwrap()
    }
}

/// `ln 2` by the same square-root method, applied to 2 directly.
pub fn ln2() -> Fixed {
    static CACHE: std::sync::OnceLock<Fixed> = std::sync::OnceLock::new();
    CACHE
        .get_or_init(|| {
            let one = BigInt::one() << BITS;
            let roots = 20;
            let mut y = Fixed(&one << 1u32);
            for _ in 0..roots {
                y = y.sqrt();
            }
            let t = y.sub(&Fixed(one));
            let mut sum = Fixed(BigInt::zero());
            let mut power = t.clone();
            let mut k = 1i64;
            while !power.0.is_zero() {
                let term = Fixed(&power.0 / k);
                sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
                power = power.mul(&t);
                k += 1;
            }
            Fixed(sum.0 << roots)
        })
        .clone()
}

pub fn phi() -> Fixed {
    Fixed::from_int(5).sqrt().add(&Fixed::from_int(1)).div(&Fixed::from_int(2))
}

/// `F_0 ..= F_n` by plain addition.
pub fn naive_fib(n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(), BigInt::one()];
    while v.len() <= n {
        let next = &v[v.len() - 1] + &v[v.len() - 2];
        v.push(next);
    }
    v.truncate(n + 1);
    v
}

/// Naive quadruple loop over `(n, l, k, m)`.
pub fn naive_search(n: (u64, u64), l: (u64, u64), k: (u64, u64), m: (u64, u64)) -> Vec<(u64, u64, u64, u64)> {
    let top = n.1.max(l.1) as usize;
    let f = naive_fib(top.max(2));
    let mut out = Vec::new();
    for nn in n.0..=n.1 {
        for ll in l.0..=l.1 {
            for kk in k.0..=k.1 {
                for mm in m.0..=m.1 {
                    let fl = &f[ll as usize];
                    let mut rhs = BigInt::one();
                    for _ in 0..kk {
                        rhs *= fl;
                    }
                    let mut flm = BigInt::one();
                    for _ in 0..mm {
                        flm *= fl;
                    }
                    rhs *= flm - 1;
                    if f[nn as usize] == rhs {
                        out.push((nn, ll, kk, mm));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Distance from the fixed-point value to the nearest integer.
pub fn nearest_distance(x: &Fixed) -> Fixed {
    let one = BigInt::one() << BITS;
    let half = &one >> 1u32;
    let n = (&x.0 + &half) >> BITS;
    Fixed((&x.0 - (n << BITS)).abs())
}

/// Random operation chains run side by side in ball arithmetic and in the
/// fixed-point oracle. Returns `(chains, violations)`.
pub fn containment_chains(count: usize, seed: u64) -> (usize, Vec<String>) {
    use fibcert::BallReal;
    use rand::{Rng, SeedableRng};

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let rand_rational = |rng: &mut rand::rngs::StdRng| {
        let num: i64 = rng.gen_range(1..=2000);
        let den: i64 = rng.gen_range(1..=97);
        BigRational::new(num.into(), den.into())
    };
    for chain in 0..count {
        let digits = [15u32, 30, 60, 120][rng.gen_range(0..4)];
        let start = rand_rational(&mut rng);
        let mut ball = BallReal::from_rational(&start, digits);
        let mut oracle = Fixed::from_rational(&start);
        let mut trace = format!("{start}");
        for _ in 0..rng.gen_range(3..=10) {
            let r = rand_rational(&mut rng);
            let op = rng.gen_range(0..6);
            let positive = oracle.0 > (BigInt::one() << (BITS - 8));
            match op {
                0 => {
                    ball = ball.add(&BallReal::from_rational(&r, digits));
                    oracle = oracle.add(&Fixed::from_rational(&r));
                    trace += &format!(" + {r}");
                }
                1 => {
                    ball = ball.sub(&BallReal::from_rational(&r, digits));
                    oracle = oracle.sub(&Fixed::from_rational(&r));
                    trace += &format!(" - {r}");
                }
                2 => {
                    ball = ball.mul(&BallReal::from_rational(&r, digits));
                    oracle = oracle.mul(&Fixed::from_rational(&r));
                    trace += &format!(" * {r}");
                }
                3 => {
                    ball = ball.div(&BallReal::from_rational(&r, digits)).expect("nonzero divisor");
                    oracle = oracle.div(&Fixed::from_rational(&r));
                    trace += &format!(" / {r}");
                }
                4 if positive => match ball.sqrt() {
                    Ok(b) => {
                        ball = b;
                        oracle = oracle.sqrt();
                        trace += " sqrt";
                    }
                    Err(_) => continue,
                },
                5 if positive => match ball.ln() {
                    Ok(b) => {
                        ball = b;
                        oracle = oracle.ln();
                        trace += " ln";
                    }
                    Err(_) => continue,
                },
                _ => {
                    ball = ball.mul(&ball);
                    oracle = oracle.mul(&oracle);
                    trace += " sq";
                }
            }
            if !ball.contains_rational(&oracle.to_rational()) {
                violations.push(format!("chain {chain} at {digits} digits: {trace}"));
                break;
            }
        }
    }
    (count, violations)
}

/// A synthetic instance with `gamma = sqrt(g)` and rational `mu`, `A`, `B`.
pub struct Synthetic {
    pub g: u32,
    pub mu: Rational,
    pub a: Rational,
    pub b: u32,
    pub m: u64,
}

impl Synthetic {
    pub fn instance(&self) -> ReductionInstance {
        let g = self.g;
        ReductionInstance::new(
            0,
            Arc::new(move |d: u32| BallReal::from_int(g, d).sqrt()),
            Arc::new(ExactSource(self.mu.clone())),
            Arc::new(ExactSource(self.a.clone())),
            Arc::new(ExactSource(Rational::from_integer(self.b.into()))),
            BigInt::from(self.m),
        )
        .unwrap()
    }

    /// Exhaustive check that `0 < |u gamma - v + mu| < A B^-w` has no solution with
    /// `1 <= u <= M` and integer `w` from the bound up to `bound + extra`.
    pub fn brute_force(&self, omega: &Rational, extra: u64) -> Result<(), String> {
        let gamma = Fixed::from_int(self.g as i64).sqrt();
        let mu = Fixed::from_rational(&self.mu);
        let w0 = omega.ceil().to_integer();
        let w0: u64 = w0.try_into().unwrap();
        for u in 1..=self.m {
            let x = gamma.mul(&Fixed::from_int(u as i64)).add(&mu);
            // the nearest integer v gives the smallest value of |u gamma - v + mu|
            let d = nearest_distance(&x);
            if !d.is_positive() {
                continue;
            }
            for w in w0..=w0 + extra {
                let rhs = Fixed::from_rational(&(&self.a / Rational::from_integer(BigInt::from(self.b).pow(w as u32))));
                if d < rhs {
                    return Err(format!("u = {u}, w = {w}: distance {} below A B^-w", d.to_f64()));
                }
            }
        }
        Ok(())
    }
}

/// Reduces `count` random synthetic instances with `M <= 50` and brute-forces
/// each one 40 steps past its bound. Returns how many instances were checked.
pub fn synthetic_brute_force(count: usize, seed: u64) -> Result<usize, String> {
    use fibcert::cfrac::default_denominator_cap;
    use fibcert::exactmath::Precision;
    use fibcert::reduction::{check_outcome, reduce_one};
    use rand::{Rng, SeedableRng};

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let g: u32 = rng.gen_range(2..500);
        if (g as f64).sqrt().fract() == 0.0 {
            continue;
        }
        let s = Synthetic {
            g,
            mu: Rational::new(rng.gen_range(1..200).into(), rng.gen_range(2..60).into()),
            a: Rational::new(rng.gen_range(1..50).into(), rng.gen_range(1..10).into()),
            b: [2, 3, 10][rng.gen_range(0..3)],
            m: rng.gen_range(1..=50),
        };
        let out = match reduce_one(&s.instance(), Precision::default(), &default_denominator_cap()) {
            Ok(o) => o,
            // a rational mu can make every usable epsilon vanish; such instances prove nothing
            Err(fibcert::Error::DenominatorCapExceeded { .. }) => continue,
            Err(e) => return Err(format!("g = {g}: {e}")),
        };
        check_outcome(&s.instance(), &out).map_err(|e| format!("g = {g}: {e}"))?;
        s.brute_force(&out.omega_bound, 40).map_err(|e| format!("g = {g}, mu = {}: {e}", s.mu))?;
        done += 1;
    }
    Ok(done)
}
