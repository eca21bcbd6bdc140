//! Reading command-line values into the field each command works over.

use std::fmt;

use ksymbol::arith::integer::{int_mod, Rational};
use ksymbol::arith::{Field, GaussRat, GaussianRationals, RationalField};
use ksymbol::charpforms::{FormField, MultiRatFunc};
use ksymbol::funcfield::{FqPoly, FqRatFunc, FunctionField, PlaceFq};
use ksymbol::localsym::PlaceQ;
use ksymbol::regnum::{cx_field, CxRatFunc};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::expr::{eval, parse, EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Syntax { input: String, error: ParseError },
    Invalid(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Syntax { input, error } => write!(f, "syntax error in '{input}': {error}"),
            InputError::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl From<ksymbol::Error> for InputError {
    fn from(e: ksymbol::Error) -> Self {
        InputError::Invalid(e.to_string())
    }
}

fn evaluate<F: Field>(
    src: &str,
    field: &F,
    lit: &dyn Fn(&BigInt) -> Result<F::Elem, EvalError>,
    var: &dyn Fn(char) -> Option<F::Elem>,
) -> Result<F::Elem, InputError> {
    let e = parse(src).map_err(|error| InputError::Syntax { input: src.to_string(), error })?;
    eval(&e, field, lit, var).map_err(|err| InputError::Invalid(format!("in '{src}': {err}")))
}

pub fn rational(src: &str) -> Result<Rational, InputError> {
    evaluate(src, &RationalField, &|n| Ok(Rational::from_integer(n.clone())), &|_| None)
}

pub fn nonzero_rational(src: &str) -> Result<Rational, InputError> {
    let r = rational(src)?;
    if r == Rational::from_integer(0.into()) {
        return Err(InputError::Invalid(format!("'{src}' must be nonzero")));
    }
    Ok(r)
}

pub fn unsigned(src: &str, what: &str) -> Result<u64, InputError> {
    src.trim().parse().map_err(|_| InputError::Invalid(format!("{what} must be a nonnegative integer, got '{src}'")))
}

pub fn signed(src: &str, what: &str) -> Result<i64, InputError> {
    crate::expr::normalize(src)
        .trim()
        .parse()
        .map_err(|_| InputError::Invalid(format!("{what} must be an integer, got '{src}'")))
}

fn is_infinity(src: &str) -> bool {
    matches!(src.trim(), "\u{221e}" | "inf" | "infinity" | "oo" | "real")
}

/// Canonical spelling of a place argument for echoing.
pub fn normalize_place(src: &str) -> String {
    if is_infinity(src) {
        "inf".to_string()
    } else {
        crate::expr::normalize(src.trim())
    }
}

pub fn place_q(src: &str) -> Result<PlaceQ, InputError> {
    if is_infinity(src) {
        return Ok(PlaceQ::Real);
    }
    Ok(PlaceQ::prime(unsigned(src, "place")?)?)
}

/// Element of `F_q(T)`. For `q = p^k`, `k > 1`, the variable `a` is the
/// class of the polynomial-basis generator of `F_q`.
pub fn fq_func(k: &FunctionField, src: &str) -> Result<FqRatFunc, InputError> {
    let rf = k.rf();
    let fq = k.fq();
    let p = fq.p();
    let lit = |n: &BigInt| Ok(rf.constant(int_mod(n, p)));
    let var = |v: char| match v {
        'T' => Some(rf.var_elem()),
        'a' if fq.degree() > 1 => Some(rf.constant(fq.from_coords(&[0, 1]))),
        _ => None,
    };
    evaluate(src, rf, &lit, &var)
}

pub fn nonzero_fq_func(k: &FunctionField, src: &str) -> Result<FqRatFunc, InputError> {
    let f = fq_func(k, src)?;
    if k.rf().is_zero(&f) {
        return Err(InputError::Invalid(format!("'{src}' must be nonzero")));
    }
    Ok(f)
}

pub fn fq_poly(k: &FunctionField, src: &str) -> Result<FqPoly, InputError> {
    let f = fq_func(k, src)?;
    if !k.rf().is_poly(&f) {
        return Err(InputError::Invalid(format!("'{src}' is not a polynomial in T")));
    }
    Ok(f.num().clone())
}

pub fn place_fq(k: &FunctionField, src: &str) -> Result<PlaceFq, InputError> {
    if is_infinity(src) {
        return Ok(PlaceFq::Infinity);
    }
    Ok(k.place(fq_poly(k, src)?)?)
}

pub fn gauss(src: &str) -> Result<GaussRat, InputError> {
    let f = GaussianRationals;
    let i = GaussRat::new(Rational::from_integer(0.into()), Rational::one());
    evaluate(src, &f, &|n| Ok(GaussRat::real(Rational::from_integer(n.clone()))), &|v| (v == 'i').then(|| i.clone()))
}

/// Element of `Q(i)(z)`.
pub fn cx_func(src: &str) -> Result<CxRatFunc, InputError> {
    let k = cx_field();
    let i = GaussRat::new(Rational::from_integer(0.into()), Rational::one());
    let lit = |n: &BigInt| Ok(k.constant(GaussRat::real(Rational::from_integer(n.clone()))));
    let var = |v: char| match v {
        'z' => Some(k.var_elem()),
        'i' => Some(k.constant(i.clone())),
        _ => None,
    };
    evaluate(src, &k, &lit, &var)
}

pub fn nonzero_cx_func(src: &str) -> Result<CxRatFunc, InputError> {
    let f = cx_func(src)?;
    if cx_field().is_zero(&f) {
        return Err(InputError::Invalid(format!("'{src}' must be nonzero")));
    }
    Ok(f)
}

/// Element of `F_p(s, t)`.
pub fn form_func(k: &FormField, src: &str) -> Result<MultiRatFunc, InputError> {
    let f = k.field();
    let p = k.p();
    let lit = |n: &BigInt| Ok(f.from_i64(int_mod(n, p).to_i64().unwrap()));
    let var = |v: char| match v {
        's' => Some(k.s()),
        't' => Some(k.t()),
        _ => None,
    };
    evaluate(src, f, &lit, &var)
}

pub fn nonzero_form_func(k: &FormField, src: &str) -> Result<MultiRatFunc, InputError> {
    let f = form_func(k, src)?;
    if k.field().is_zero(&f) {
        return Err(InputError::Invalid(format!("'{src}' must be nonzero")));
    }
    Ok(f)
}

/// Splits `"left:right"` at the last colon.
pub fn key_value<'a>(src: &'a str, what: &str) -> Result<(&'a str, &'a str), InputError> {
    src.rsplit_once(':')
        .ok_or_else(|| InputError::Invalid(format!("{what} must look like 'key:value', got '{src}'")))
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(src: &str) -> Result<Vec<Vec<Rational>>, InputError> {
    src.split(';').map(|row| row.split(',').map(rational).collect()).collect()
}
