use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 200;
pub const DEFAULT_MAX_DIGITS: u32 = 1600;

/// Working precision in decimal digits plus the ceiling escalation may reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
    pub max_digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: DEFAULT_DIGITS, max_digits: DEFAULT_MAX_DIGITS }
    }
}

impl Precision {
    pub fn new(digits: u32, max_digits: u32) -> Result<Self> {
        if digits == 0 || max_digits == 0 || digits > max_digits {
            return Err(Error::InvalidPrecision(format!(
                "digits={digits} max_digits={max_digits}"
            )));
        }
        Ok(Precision { digits, max_digits })
    }

    /// Fixed precision with no room to escalate.
    pub fn fixed(digits: u32) -> Self {
        Precision { digits, max_digits: digits }
    }

    pub fn bits(&self) -> u64 {
        bits_for_digits(self.digits)
    }

    /// Double the digits, capped at `max_digits`.
    pub fn escalate(&self) -> Result<Self> {
        if self.digits >= self.max_digits {
            return Err(Error::PrecisionExhausted { digits: self.digits });
        }
        Ok(Precision {
            digits: (self.digits.saturating_mul(2)).min(self.max_digits),
            max_digits: self.max_digits,
        })
    }
}

/// Binary precision carrying at least `digits` decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u64 {
    (digits as u64 * 3322).div_ceil(1000) + 8
}
