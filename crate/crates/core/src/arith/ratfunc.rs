//! Rational functions `F(X)` over a field context; again a field, so the
//! construction nests (`F_p(s)(t)` is used for two-variable forms).

use super::field::Field;
use super::poly::{Poly, PolyRing};

/// A fraction in lowest terms with monic denominator; zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<E> {
    num: Poly<E>,
    den: Poly<E>,
}

impl<E> RatFunc<E> {
    pub fn num(&self) -> &Poly<E> {
        &self.num
    }
    pub fn den(&self) -> &Poly<E> {
        &self.den
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatFuncField<F: Field> {
    ring: PolyRing<F>,
    var: &'static str,
}

impl<F: Field> RatFuncField<F> {
    pub fn new(base: F, var: &'static str) -> Self {
        RatFuncField { ring: PolyRing::new(base), var }
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn base(&self) -> &F {
        self.ring.field()
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    /// Canonical fraction; `None` when the denominator is zero.
    pub fn frac(&self, num: Poly<F::Elem>, den: Poly<F::Elem>) -> Option<RatFunc<F::Elem>> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(self.zero());
        }
        let r = &self.ring;
        let g = r.gcd(&num, &den);
        let num = r.div_exact(&num, &g).unwrap();
        let den = r.div_exact(&den, &g).unwrap();
        let (lc, den) = r.monic(&den).unwrap();
        let inv = r.field().inv(&lc).unwrap();
        Some(RatFunc { num: r.scale(&num, &inv), den })
    }

    pub fn from_poly(&self, p: Poly<F::Elem>) -> RatFunc<F::Elem> {
        RatFunc { num: p, den: self.ring.one() }
    }

    pub fn constant(&self, c: F::Elem) -> RatFunc<F::Elem> {
        self.from_poly(self.ring.constant(c))
    }

    pub fn var_elem(&self) -> RatFunc<F::Elem> {
        self.from_poly(self.ring.x())
    }

    pub fn is_poly(&self, a: &RatFunc<F::Elem>) -> bool {
        self.ring.is_one(&a.den)
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self, a: &RatFunc<F::Elem>) -> Option<F::Elem> {
        (self.is_poly(a) && self.ring.is_constant(&a.num)).then(|| self.ring.coeff(&a.num, 0))
    }

    /// Ratio of leading coefficients of numerator and denominator.
    pub fn leading_coeff(&self, a: &RatFunc<F::Elem>) -> Option<F::Elem> {
        let lc = a.num.lc()?;
        Some(self.base().div(lc, a.den.lc().unwrap()))
    }

    /// Apply a map of coefficients (must be a ring homomorphism into `G`).
    pub fn map_coeffs<G: Field>(
        &self,
        a: &RatFunc<F::Elem>,
        target: &RatFuncField<G>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> Option<RatFunc<G::Elem>> {
        let tr = target.ring();
        let num = tr.from_coeffs(a.num.coeffs().iter().map(&f).collect());
        let den = tr.from_coeffs(a.den.coeffs().iter().map(&f).collect());
        target.frac(num, den)
    }
}

impl<F: Field> Field for RatFuncField<F> {
    type Elem = RatFunc<F::Elem>;

    fn zero(&self) -> Self::Elem {
        RatFunc { num: self.ring.zero(), den: self.ring.one() }
    }
    fn one(&self) -> Self::Elem {
        RatFunc { num: self.ring.one(), den: self.ring.one() }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.den == b.den {
            return self.frac(r.add(&a.num, &b.num), a.den.clone()).unwrap();
        }
        let g = r.gcd(&a.den, &b.den);
        let ad = r.div_exact(&a.den, &g).unwrap();
        let bd = r.div_exact(&b.den, &g).unwrap();
        let num = r.add(&r.mul(&a.num, &bd), &r.mul(&b.num, &ad));
        self.frac(num, r.mul(&ad, &b.den)).unwrap()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        RatFunc { num: self.ring.neg(&a.num), den: a.den.clone() }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let r = &self.ring;
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let g1 = r.gcd(&a.num, &b.den);
        let g2 = r.gcd(&b.num, &a.den);
        let num = r.mul(&r.div_exact(&a.num, &g1).unwrap(), &r.div_exact(&b.num, &g2).unwrap());
        let den = r.mul(&r.div_exact(&a.den, &g2).unwrap(), &r.div_exact(&b.den, &g1).unwrap());
        self.frac(num, den).unwrap()
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.frac(a.den.clone(), a.num.clone())
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.base().from_i64(n))
    }

    fn characteristic(&self) -> u64 {
        self.base().characteristic()
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        let n = self.ring.fmt_poly(&a.num, self.var);
        if self.ring.is_one(&a.den) {
            return n;
        }
        let d = self.ring.fmt_poly(&a.den, self.var);
        let wrap = |s: String, p: &Poly<F::Elem>| {
            if p.coeffs().iter().filter(|c| !self.base().is_zero(c)).count() > 1 || s.contains(['+', '-', '/', '*']) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &a.num), wrap(d, &a.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::FqField;

    #[test]
    fn canonical_form() {
        let k = RatFuncField::new(FqField::new(5).unwrap(), "T");
        let r = k.ring();
        // (T^2 + 1) / (2T) = (3T^2 + 3) / T
        let f = k.frac(r.from_coeffs(vec![1, 0, 1]), r.from_coeffs(vec![0, 2])).unwrap();
        assert_eq!(f.num(), &r.from_coeffs(vec![3, 0, 3]));
        assert_eq!(f.den(), &r.from_coeffs(vec![0, 1]));
        assert_eq!(k.leading_coeff(&f), Some(3));
        let g = k.frac(r.from_coeffs(vec![4, 0, 1]), r.from_coeffs(vec![1, 1])).unwrap();
        assert_eq!(g, k.from_poly(r.from_coeffs(vec![4, 1])));
        assert!(k.frac(r.one(), r.zero()).is_none());
    }

    #[test]
    fn field_laws() {
        let k = RatFuncField::new(FqField::new(3).unwrap(), "T");
        let r = k.ring();
        let a = k.frac(r.from_coeffs(vec![1, 2, 1]), r.from_coeffs(vec![0, 1, 1])).unwrap();
        let b = k.frac(r.from_coeffs(vec![2, 1]), r.from_coeffs(vec![1, 0, 1])).unwrap();
        assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
        assert_eq!(k.sub(&k.add(&a, &b), &b), a);
        assert_eq!(k.div(&k.mul(&a, &b), &b), a);
    }
}
