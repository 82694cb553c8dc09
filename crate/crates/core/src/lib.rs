//! # fibcert
//!
//! Certified replay of the complete resolution of the exponential Diophantine
//! equation
//!
//! ```text
//! F_n = F_l^k (F_l^m - 1),   n, l, m >= 1,  k >= 3
//! ```
//!
//! whose only solution is `(n, l, k, m) = (6, 3, 3, 1)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactmath`]: big integers, rationals and midpoint-radius balls with
//!   certified `sqrt` and `ln`.
//! - [`fibkit`]: exact Fibonacci numbers, Binet and golden-ratio checks,
//!   Catalan's identity, exact divisibility of Fibonacci numbers.
//! - [`cfrac`]: certified continued-fraction expansion and convergents.
//! - [`matveev`]: the Matveev lower bound and the analytic bound cascade.
//! - [`reduction`]: the Dujella–Pethő reduction with certified `epsilon`.
//! - [`search`]: exhaustive exact searches over the final box.
//! - [`pipeline`]: orchestration, JSON certificate, and certificate re-checking.
//!
//! Each capability has a runnable program under `examples/`; the `fibcert`
//! binary exposes the same operations on the command line.

pub mod cfrac;
pub mod error;
pub mod exactmath;
pub mod fibkit;
pub mod matveev;
pub mod pipeline;
pub mod reduction;
pub mod search;

pub use error::{Error, Result};
pub use exactmath::{BallReal, BigInt, Precision, Rational};
