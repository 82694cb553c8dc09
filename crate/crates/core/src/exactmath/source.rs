use super::ball::BallReal;
use super::dyadic::Dyadic;
use super::precision::Precision;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A real quantity that can be re-evaluated at any requested precision.
pub trait RealSource: Send + Sync {
    fn eval(&self, digits: u32) -> Result<BallReal>;
}

impl<F> RealSource for F
where
    F: Fn(u32) -> Result<BallReal> + Send + Sync,
{
    fn eval(&self, digits: u32) -> Result<BallReal> {
        self(digits)
    }
}

/// An exactly known rational; every precision returns the same value.
#[derive(Debug, Clone)]
pub struct ExactSource(pub Rational);

impl RealSource for ExactSource {
    fn eval(&self, digits: u32) -> Result<BallReal> {
        Ok(BallReal::from_rational(&self.0, digits))
    }
}

/// Evaluate `source`, doubling the digits until the radius is at most `target`
/// (or, with no target, once at the requested precision).
pub fn refine(
    source: &dyn RealSource,
    prec: Precision,
    target: Option<&Dyadic>,
) -> Result<BallReal> {
    let mut p = prec;
    loop {
        let ball = source.eval(p.digits)?;
        match target {
            None => return Ok(ball),
            Some(t) if ball.rad() <= t => return Ok(ball),
            Some(_) => {
                p = p.escalate().map_err(|_| Error::PrecisionExhausted { digits: p.digits })?;
            }
        }
    }
}
