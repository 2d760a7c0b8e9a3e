//! Exact rationals and outward-rounded interval arithmetic.

mod interval;
mod ivec;
pub mod rational;

pub use interval::Interval;
pub use ivec::IntervalVector;
pub use rational::{format_rational, parse_rational, rational_from_decimal, Rational};
