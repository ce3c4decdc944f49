//! Outer bounds and linear achievability for the symmetric rate of index
//! coding instances.
//!
//! The crate is organised around the pipeline an analysis follows:
//!
//! - [`instance`] and [`fixtures`]: the instance model, its text/JSON forms
//!   and the built-in instances.
//! - [`graph`]: alignment and conflict graphs, alignment sets, the minimum
//!   internal conflict distance and overlapping-cycle detection.
//! - [`lp`]: entropy-profile rows and the exact rational LP that maximizes
//!   the symmetric rate under Shannon-type and decoding constraints.
//! - [`nonshannon`]: Zhang-Yeung and Ingleton rows, tuple enumeration and
//!   weighted-sum certificates.
//! - [`gf`]: matrices over a prime field.
//! - [`scheme`]: linear precoding schemes, their verification and builders.
//! - [`oracle`]: exhaustive linear-code search on tiny instances.
//! - [`generate`]: random instances without overlapping cycles.

pub mod fixtures;
pub mod generate;
pub mod gf;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod nonshannon;
pub mod oracle;
pub mod scheme;
mod set;

pub use instance::{Destination, Instance, InstanceError};
pub use set::MessageSet;

/// Exact rational scalar used on every certified path.
pub type Rational = num_rational::Ratio<i128>;

/// Shorthand for building a [`Rational`] from a numerator and denominator.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Parses `num/den` or an integer.
pub fn parse_rational(text: &str) -> Option<Rational> {
    text.trim().parse().ok()
}
