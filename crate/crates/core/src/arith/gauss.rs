//! The Gaussian rationals `Q(i)`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Field;
use super::integer::Rational;

/// `re + im * i` with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::zero() }
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GaussianRationals;

impl Field for GaussianRationals {
    type Elem = GaussRat;

    fn zero(&self) -> GaussRat {
        GaussRat::default()
    }
    fn one(&self) -> GaussRat {
        GaussRat::real(Rational::one())
    }
    fn is_zero(&self, a: &GaussRat) -> bool {
        a.re.is_zero() && a.im.is_zero()
    }
    fn add(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        GaussRat::new(&a.re + &b.re, &a.im + &b.im)
    }
    fn neg(&self, a: &GaussRat) -> GaussRat {
        GaussRat::new(-&a.re, -&a.im)
    }
    fn mul(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        GaussRat::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
    }
    fn inv(&self, a: &GaussRat) -> Option<GaussRat> {
        let n = a.norm();
        (!n.is_zero()).then(|| GaussRat::new(&a.re / &n, -&a.im / &n))
    }
    fn from_i64(&self, n: i64) -> GaussRat {
        GaussRat::real(Rational::from_integer(n.into()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &GaussRat) -> String {
        match (a.re.is_zero(), a.im.is_zero()) {
            (_, true) => a.re.to_string(),
            (true, false) if a.im.is_one() => "i".to_string(),
            (true, false) => format!("{}*i", a.im),
            (false, false) => {
                let sign = if a.im.is_negative() { "-" } else { "+" };
                let im = a.im.abs();
                if im.is_one() {
                    format!("{}{}i", a.re, sign)
                } else {
                    format!("{}{}{}*i", a.re, sign, im)
                }
            }
        }
    }
}
