//! Exact arithmetic: rationals, Laurent polynomials, and differential forms in
//! the logarithmic basis `θ_k = dt_k / t_k`.
//!
//! The coefficient field is ℚ. Every monomial construction the engine handles is
//! defined over ℚ, which keeps every linear solve decidable.

mod form;
mod laurent;
mod unit;

pub use form::{DlogForm, MAX_DEGREE};
pub use laurent::LaurentPoly;
pub use unit::UnitMonomial;

use num_bigint::BigInt;

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Exponent vector of a Laurent monomial; also its multidegree.
pub type Exponent = Vec<i64>;

/// Shorthand for a small rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
