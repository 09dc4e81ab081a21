//! Exact rationals, interval enclosures, precision-indexed reals and three-valued truth.

mod approx;
mod interval;
pub mod rational;
mod truth;

pub use approx::{sign_at, ApproxReal, Precision};
pub use interval::Interval;
pub use rational::{format_rational, parse_rational, Rational};
pub use truth::{Truth, TruthStream};
