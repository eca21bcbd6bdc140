//! Exact arithmetic foundation.

pub mod bernoulli;
pub mod field;
pub mod gauss;
pub mod integer;
pub mod poly;
pub mod polyfactor;
pub mod ratfunc;
pub mod sign;

pub use bernoulli::bernoulli;
pub use field::{Field, FqField, RationalField};
pub use gauss::{GaussRat, GaussianRationals};
pub use integer::{factorize, legendre, Factorization, Integer, Rational};
pub use poly::{Degree, Poly, PolyRing};
pub use polyfactor::{poly_factor, PolyFactorization};
pub use ratfunc::{RatFunc, RatFuncField};
pub use sign::Sign;

/// Generator of `F_q^×`: the smallest element of full order.
pub fn generator(q: u64) -> crate::error::Result<u64> {
    Ok(FqField::new(q)?.generator())
}
