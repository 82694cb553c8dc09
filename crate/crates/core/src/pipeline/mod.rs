//! Orchestration of the whole proof and its JSON certificate.
//!
//! [`run_proof`] threads a [`BoundState`](crate::matveev::BoundState) through
//! the analytic stage, two reduction rounds and the final searches;
//! [`verify_report`] re-checks a finished report from its recorded data.

mod reference;
mod report;
mod run;
mod verify;

pub use reference::reference_matches;
pub use report::*;
pub use run::{next_thresholds, reduction_m, run_proof, run_proof_with, search_boxes, Progress, ProgressEvent};
pub use verify::{verify_report, verify_report_file};

/// Big integers as decimal strings.
pub mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Terminating-decimal rationals as exact decimal strings.
pub mod serde_decimal {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactmath::{parse_decimal, rational_to_decimal, Rational};

    /// Number of fractional digits in the exact decimal expansion, if it terminates.
    pub fn frac_digits(r: &Rational) -> Option<usize> {
        let mut d = r.denom().clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let (mut a, mut b) = (0usize, 0usize);
        while (&d % &two).is_zero() {
            d /= &two;
            a += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            b += 1;
        }
        d.is_one().then_some(a.max(b))
    }

    pub fn to_string(r: &Rational) -> Option<String> {
        frac_digits(r).map(|f| rational_to_decimal(r, f, false))
    }

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        match to_string(v) {
            Some(text) => s.serialize_str(&text),
            None => Err(serde::ser::Error::custom("rational has no terminating decimal expansion")),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_decimal(&s).map_err(serde::de::Error::custom)
    }
}
