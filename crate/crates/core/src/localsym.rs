//! Local symbols on `Q`: the real symbol, the 2-adic symbol, tame symbols at
//! odd primes and their quadratic parts, and the norm-residue symbol at every
//! place.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::integer::{
    factorize, inv_mod, int_mod, is_prime_u64, mul_mod, pow_mod, require_odd_prime, unit_residue,
    valuation, Rational,
};
use crate::arith::Sign;
use crate::error::{Error, Result};

/// A place of `Q`. Orders as `Real < 2 < 3 < 5 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceQ {
    Real,
    Prime(u64),
}

impl PlaceQ {
    pub fn prime(p: u64) -> Result<PlaceQ> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(PlaceQ::Prime(p))
    }

    /// Order of the group of roots of unity of the completion.
    pub fn mu_order(self) -> u64 {
        match self {
            PlaceQ::Real | PlaceQ::Prime(2) => 2,
            PlaceQ::Prime(p) => p - 1,
        }
    }
}

impl fmt::Display for PlaceQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceQ::Real => write!(f, "inf"),
            PlaceQ::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// An element of `mu(Q_v)`: a sign at the real place and at 2, a unit of
/// `F_p` at odd `p` (identified with `mu(Q_p)` by reduction mod `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MuValue {
    Sign(Sign),
    Unit { p: u64, value: u64 },
}

impl MuValue {
    pub fn one_at(place: PlaceQ) -> MuValue {
        match place {
            PlaceQ::Real | PlaceQ::Prime(2) => MuValue::Sign(Sign::Plus),
            PlaceQ::Prime(p) => MuValue::Unit { p, value: 1 },
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self, MuValue::Sign(Sign::Plus) | MuValue::Unit { value: 1, .. })
    }

    pub fn mul(self, other: MuValue) -> MuValue {
        match (self, other) {
            (MuValue::Sign(a), MuValue::Sign(b)) => MuValue::Sign(a * b),
            (MuValue::Unit { p, value: a }, MuValue::Unit { p: p2, value: b }) if p == p2 => {
                MuValue::Unit { p, value: mul_mod(a, b, p) }
            }
            _ => panic!("mu values from different places"),
        }
    }

    pub fn pow(self, e: i64) -> MuValue {
        match self {
            MuValue::Sign(s) => MuValue::Sign(s.pow(e)),
            MuValue::Unit { p, value } => {
                let base = if e < 0 { inv_mod(value, p).unwrap() } else { value };
                MuValue::Unit { p, value: pow_mod(base, e.unsigned_abs(), p) }
            }
        }
    }

    pub fn inv(self) -> MuValue {
        self.pow(-1)
    }

    /// Image under `zeta -> zeta^(m_v / 2)` in `mu(Q) = {1, -1}`.
    pub fn to_global_sign(self) -> Sign {
        match self {
            MuValue::Sign(s) => s,
            MuValue::Unit { p, value } => {
                if pow_mod(value, (p - 1) / 2, p) == 1 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            }
        }
    }
}

impl fmt::Display for MuValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuValue::Sign(s) => write!(f, "{s}"),
            MuValue::Unit { value, .. } => write!(f, "{value}"),
        }
    }
}

fn nonzero(x: &Rational, y: &Rational) -> Result<()> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroInput("symbol arguments"));
    }
    Ok(())
}

/// The real symbol: `-1` iff both arguments are negative.
pub fn s_infinity(x: &Rational, y: &Rational) -> Result<Sign> {
    nonzero(x, y)?;
    Ok(if x.is_negative() && y.is_negative() { Sign::Minus } else { Sign::Plus })
}

// (2-adic valuation, unit part mod 8)
fn two_adic(x: &Rational) -> (i64, u64) {
    let a = valuation(x, 2);
    let two_a = num_traits::pow(crate::arith::Integer::from(2), a.unsigned_abs() as usize);
    let (n, d) = if a >= 0 {
        (x.numer() / &two_a, x.denom().clone())
    } else {
        (x.numer().clone(), x.denom() / &two_a)
    };
    // d odd, so d^-1 = d mod 8
    (a, int_mod(&n, 8) * int_mod(&d, 8) % 8)
}

fn eps(u: u64) -> i64 {
    ((u % 8 == 3) || (u % 8 == 7)) as i64
}

fn omega(u: u64) -> i64 {
    ((u % 8 == 3) || (u % 8 == 5)) as i64
}

/// The 2-adic symbol, extended bilinearly from its values on units and on 2.
///
/// Writing `x = 2^a u`, `y = 2^b w` with `u, w` odd:
///
/// | pair     | value                         |
/// |----------|-------------------------------|
/// | (u, w)   | `(-1)^(eps(u) eps(w))`         |
/// | (u, 2)   | `(-1)^omega(u)`                |
/// | (2, 2)   | `+1` (equals `(-1, 2)`)        |
///
/// with `eps(u) = (u-1)/2` and `omega(u) = (u^2-1)/8` mod 2, so
/// `s_2(x, y) = (-1)^(eps(u) eps(w) + a omega(w) + b omega(u))`.
pub fn s_2(x: &Rational, y: &Rational) -> Result<Sign> {
    nonzero(x, y)?;
    let (a, u) = two_adic(x);
    let (b, w) = two_adic(y);
    Ok(Sign::from_parity(eps(u) * eps(w) + a * omega(w) + b * omega(u)))
}

/// Tame symbol at an odd prime: the image in `F_p^×` of
/// `(-1)^(v(x) v(y)) x^v(y) y^(-v(x))`.
pub fn tame(x: &Rational, y: &Rational, p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    nonzero(x, y)?;
    let (a, b) = (valuation(x, p), valuation(y, p));
    Ok(tame_from_parts(a, unit_residue(x, p), b, unit_residue(y, p), p))
}

pub(crate) fn tame_from_parts(a: i64, ux: u64, b: i64, uy: u64, p: u64) -> u64 {
    let xb = pow_mod(if b < 0 { inv_mod(ux, p).unwrap() } else { ux }, b.unsigned_abs(), p);
    let ya = pow_mod(if a > 0 { inv_mod(uy, p).unwrap() } else { uy }, a.unsigned_abs(), p);
    let v = mul_mod(xb, ya, p);
    if (a * b).rem_euclid(2) == 1 {
        (p - v) % p
    } else {
        v
    }
}

/// `tame(x, y, p)^((p-1)/2)` as a sign.
pub fn h_p(x: &Rational, y: &Rational, p: u64) -> Result<Sign> {
    let t = tame(x, y, p)?;
    Ok(if pow_mod(t, (p - 1) / 2, p) == 1 { Sign::Plus } else { Sign::Minus })
}

/// The quadratic Hilbert symbol at a place of `Q`.
pub fn hilbert(x: &Rational, y: &Rational, place: PlaceQ) -> Result<Sign> {
    match place {
        PlaceQ::Real => s_infinity(x, y),
        PlaceQ::Prime(2) => s_2(x, y),
        PlaceQ::Prime(p) => h_p(x, y, p),
    }
}

/// The norm-residue symbol with values in `mu(Q_v)`.
pub fn norm_residue(x: &Rational, y: &Rational, place: PlaceQ) -> Result<MuValue> {
    Ok(match place {
        PlaceQ::Real => MuValue::Sign(s_infinity(x, y)?),
        PlaceQ::Prime(2) => MuValue::Sign(s_2(x, y)?),
        PlaceQ::Prime(p) => MuValue::Unit { p, value: tame(x, y, p)? },
    })
}

/// Whether `x R^2 + y S^2 = 1` has a point over the completion at `place`.
pub fn conic_local(x: &Rational, y: &Rational, place: PlaceQ) -> Result<bool> {
    Ok(hilbert(x, y, place)?.is_plus())
}

/// Places where a symbol of `x, y` can be nontrivial: the real place, 2, and
/// the odd primes dividing a numerator or denominator.
pub fn support_places(x: &Rational, y: &Rational) -> Result<Vec<PlaceQ>> {
    nonzero(x, y)?;
    let mut primes: Vec<u64> = factorize(x)?.1.primes().collect();
    primes.extend(factorize(y)?.1.primes());
    primes.retain(|&p| p != 2);
    primes.sort_unstable();
    primes.dedup();
    let mut out = vec![PlaceQ::Real, PlaceQ::Prime(2)];
    out.extend(primes.into_iter().map(PlaceQ::Prime));
    Ok(out)
}

/// Coefficient of `T^n` under `K(R)/2K(R) -> F_2[T]`: 1 iff every entry is negative.
pub fn milnor_sign_class(xs: &[Rational]) -> Result<u8> {
    if xs.iter().any(|x| x.is_zero()) {
        return Err(Error::ZeroInput("milnor_sign_class"));
    }
    Ok(xs.iter().all(|x| x.is_negative()) as u8)
}
