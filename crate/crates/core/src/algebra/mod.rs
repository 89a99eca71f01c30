//! Exact arithmetic substrate: rationals, sparse polynomials, rational
//! functions and small matrices of rational functions.

mod gcd;
mod matrix;
mod poly;
mod ratfun;

pub use gcd::{gcd, poly_content_in};
pub use matrix::Matrix;
pub use poly::{Monomial, PolyDisplay, SparsePoly};
pub use ratfun::{ratfun_equal, ratfun_normalize, RatFun};

pub(crate) use poly::write_term;

/// Arbitrary-precision rational number, always stored in lowest terms
/// with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
