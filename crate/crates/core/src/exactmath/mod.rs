//! Exact integers and rationals plus certified midpoint-radius reals.

mod ball;
mod dyadic;
mod precision;
mod rational;
mod source;
mod transcendental;

pub use ball::{int_ball, BallJson, BallReal};
pub use dyadic::Dyadic;
pub use num_bigint::BigInt;
pub use precision::{bits_for_digits, Precision, DEFAULT_DIGITS, DEFAULT_MAX_DIGITS};
pub use rational::{decimal_ratio, parse_bigint, parse_decimal, rational_to_decimal, Rational};
pub use source::{refine, ExactSource, RealSource};
pub use transcendental::{ln2, ln5, ln_phi, ln_sqrt5, phi, sqrt5};
