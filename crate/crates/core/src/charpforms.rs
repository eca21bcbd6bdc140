//! Differential forms on `F_p(s, t)`: exterior derivative, logarithmic
//! forms, the Cartier operator and the fixed-point test for `nu(n)`.

use std::collections::BTreeMap;

use crate::arith::{Field, FqField, Poly, RatFunc, RatFuncField};
use crate::error::{Error, Result};

/// Element of `F_p(s)`.
pub type SFunc = RatFunc<u64>;
/// Element of `F_p(s)(t) = F_p(s, t)`.
pub type MultiRatFunc = RatFunc<SFunc>;

/// `ds` and `dt` coefficients of a 1-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form1 {
    pub ds: MultiRatFunc,
    pub dt: MultiRatFunc,
}

/// Coefficient of `ds ^ dt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form2 {
    pub h: MultiRatFunc,
}

/// Polynomial in `s, t` with coefficients in `F_p`, keyed by exponents `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    pub terms: BTreeMap<(u32, u32), u64>,
}

impl BiPoly {
    pub fn one() -> Self {
        BiPoly { terms: [((0, 0), 1)].into() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: (u32, u32), c: u64, p: u64) {
        let e = self.terms.entry(key).or_insert(0);
        *e = (*e + c) % p;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, other: &BiPoly, p: u64) -> BiPoly {
        let mut out = BiPoly::default();
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &other.terms {
                out.add_term((i + k, j + l), a * b % p, p);
            }
        }
        out
    }

    pub fn pow(&self, e: u64, p: u64) -> BiPoly {
        (0..e).fold(BiPoly::one(), |acc, _| acc.mul(self, p))
    }
}

/// `F_p(s, t)` and its forms.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    p: u64,
    outer: RatFuncField<RatFuncField<FqField>>,
}

impl FormField {
    pub fn new(p: u64) -> Result<Self> {
        let fp = FqField::prime(p)?;
        Ok(FormField { p, outer: RatFuncField::new(RatFuncField::new(fp, "s"), "t") })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> &RatFuncField<RatFuncField<FqField>> {
        &self.outer
    }

    fn inner(&self) -> &RatFuncField<FqField> {
        self.outer.base()
    }

    pub fn s(&self) -> MultiRatFunc {
        self.outer.constant(self.inner().var_elem())
    }

    pub fn t(&self) -> MultiRatFunc {
        self.outer.var_elem()
    }

    pub fn constant(&self, c: i64) -> MultiRatFunc {
        self.outer.from_i64(c)
    }

    pub fn fmt(&self, f: &MultiRatFunc) -> String {
        self.outer.fmt_elem(f)
    }

    pub fn zero1(&self) -> Form1 {
        Form1 { ds: self.outer.zero(), dt: self.outer.zero() }
    }

    pub fn zero2(&self) -> Form2 {
        Form2 { h: self.outer.zero() }
    }

    fn d_inner(&self, a: &SFunc) -> SFunc {
        let (k, r) = (self.inner(), self.inner().ring());
        let n = r.sub(&r.mul(&r.derivative(a.num()), a.den()), &r.mul(a.num(), &r.derivative(a.den())));
        k.frac(n, r.mul(a.den(), a.den())).unwrap()
    }

    fn quotient_rule(
        &self,
        f: &MultiRatFunc,
        d: impl Fn(&Poly<SFunc>) -> Poly<SFunc>,
    ) -> MultiRatFunc {
        let r = self.outer.ring();
        let n = r.sub(&r.mul(&d(f.num()), f.den()), &r.mul(f.num(), &d(f.den())));
        self.outer.frac(n, r.mul(f.den(), f.den())).unwrap()
    }

    pub fn partial_s(&self, f: &MultiRatFunc) -> MultiRatFunc {
        let r = self.outer.ring();
        self.quotient_rule(f, |a| r.from_coeffs(a.coeffs().iter().map(|c| self.d_inner(c)).collect()))
    }

    pub fn partial_t(&self, f: &MultiRatFunc) -> MultiRatFunc {
        let r = self.outer.ring();
        self.quotient_rule(f, |a| r.derivative(a))
    }

    pub fn d0(&self, f: &MultiRatFunc) -> Form1 {
        Form1 { ds: self.partial_s(f), dt: self.partial_t(f) }
    }

    pub fn d1(&self, w: &Form1) -> Form2 {
        Form2 { h: self.outer.sub(&self.partial_s(&w.dt), &self.partial_t(&w.ds)) }
    }

    pub fn scale1(&self, c: &MultiRatFunc, w: &Form1) -> Form1 {
        Form1 { ds: self.outer.mul(c, &w.ds), dt: self.outer.mul(c, &w.dt) }
    }

    pub fn add1(&self, a: &Form1, b: &Form1) -> Form1 {
        Form1 { ds: self.outer.add(&a.ds, &b.ds), dt: self.outer.add(&a.dt, &b.dt) }
    }

    pub fn wedge(&self, a: &Form1, b: &Form1) -> Form2 {
        let k = &self.outer;
        Form2 { h: k.sub(&k.mul(&a.ds, &b.dt), &k.mul(&a.dt, &b.ds)) }
    }

    /// `df / f`.
    pub fn dlog1(&self, f: &MultiRatFunc) -> Result<Form1> {
        let inv = self.outer.inv(f).ok_or(Error::ZeroInput("dlog"))?;
        Ok(self.scale1(&inv, &self.d0(f)))
    }

    /// `df/f ^ dg/g`.
    pub fn dlog2(&self, f: &MultiRatFunc, g: &MultiRatFunc) -> Result<Form2> {
        Ok(self.wedge(&self.dlog1(f)?, &self.dlog1(g)?))
    }

    /// Numerator and denominator as polynomials in `s, t`.
    pub fn to_bipoly(&self, f: &MultiRatFunc) -> (BiPoly, BiPoly) {
        let ir = self.inner().ring();
        let mut l = ir.one();
        for c in f.num().coeffs().iter().chain(f.den().coeffs()) {
            let g = ir.gcd(&l, c.den());
            l = ir.mul(&l, &ir.div_exact(c.den(), &g).unwrap());
        }
        let convert = |a: &Poly<SFunc>| {
            let mut out = BiPoly::default();
            for (j, c) in a.coeffs().iter().enumerate() {
                let scaled = ir.div_exact(&ir.mul(c.num(), &l), c.den()).unwrap();
                for (i, &v) in scaled.coeffs().iter().enumerate() {
                    out.add_term((i as u32, j as u32), v, self.p);
                }
            }
            out
        };
        (convert(f.num()), convert(f.den()))
    }

    pub fn from_bipoly(&self, b: &BiPoly) -> MultiRatFunc {
        let ir = self.inner().ring();
        let jmax = b.terms.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let mut cols: Vec<Vec<u64>> = vec![Vec::new(); jmax + 1];
        for (&(i, j), &c) in &b.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, 0);
            }
            col[i as usize] = c;
        }
        let coeffs = cols.into_iter().map(|c| self.inner().from_poly(ir.from_coeffs(c))).collect();
        self.outer.from_poly(self.outer.ring().from_coeffs(coeffs))
    }

    /// Monomial rule for `ds ^ dt` (shift `(1, 1)`), `ds` (shift `(1, 0)`)
    /// or `dt` (shift `(0, 1)`): `s^i t^j` survives iff `p | i + a` and
    /// `p | j + b`, and then maps to `s^((i+a)/p - a) t^((j+b)/p - b)`.
    fn cartier_poly(&self, f: &BiPoly, shift: (u32, u32)) -> BiPoly {
        let p = self.p as u32;
        let mut out = BiPoly::default();
        for (&(i, j), &c) in &f.terms {
            let (x, y) = (i + shift.0, j + shift.1);
            if x % p == 0 && y % p == 0 {
                out.add_term((x / p - shift.0, y / p - shift.1), c, self.p);
            }
        }
        out
    }

    /// `C(h ds^dt) = D^-1 C(N D^(p-1) ds^dt)` for `h = N/D`.
    pub fn cartier2(&self, w: &Form2) -> Form2 {
        let (n, d) = self.to_bipoly(&w.h);
        let cleared = n.mul(&d.pow(self.p - 1, self.p), self.p);
        let c = self.cartier_poly(&cleared, (1, 1));
        Form2 { h: self.outer.div(&self.from_bipoly(&c), &self.from_bipoly(&d)) }
    }

    pub fn is_closed(&self, w: &Form1) -> bool {
        self.outer.is_zero(&self.d1(w).h)
    }

    /// Cartier operator on closed 1-forms, after clearing a common
    /// denominator to a `p`-th power.
    pub fn cartier1(&self, w: &Form1) -> Result<Form1> {
        if !self.is_closed(w) {
            return Err(Error::NotClosed);
        }
        let p = self.p;
        let (nf, df) = self.to_bipoly(&w.ds);
        let (ng, dg) = self.to_bipoly(&w.dt);
        let d = df.mul(&dg, p);
        let dp1 = d.pow(p - 1, p);
        let cs = self.cartier_poly(&nf.mul(&dg, p).mul(&dp1, p), (1, 0));
        let ct = self.cartier_poly(&ng.mul(&df, p).mul(&dp1, p), (0, 1));
        let d = self.from_bipoly(&d);
        Ok(Form1 {
            ds: self.outer.div(&self.from_bipoly(&cs), &d),
            dt: self.outer.div(&self.from_bipoly(&ct), &d),
        })
    }

    /// Exactness of a 2-form, as the vanishing of its Cartier image.
    pub fn in_b2(&self, w: &Form2) -> bool {
        self.outer.is_zero(&self.cartier2(w).h)
    }

    pub fn in_b1(&self, w: &Form1) -> Result<bool> {
        let c = self.cartier1(w)?;
        Ok(self.outer.is_zero(&c.ds) && self.outer.is_zero(&c.dt))
    }

    /// `x^p = x`, i.e. `x` lies in `F_p`.
    pub fn nu_member0(&self, x: &MultiRatFunc) -> bool {
        self.outer.as_constant(x).is_some_and(|c| self.inner().as_constant(&c).is_some())
    }

    /// Fixed points of the Cartier operator.
    pub fn nu_member1(&self, w: &Form1) -> Result<bool> {
        Ok(self.cartier1(w)? == *w)
    }

    pub fn nu_member2(&self, w: &Form2) -> bool {
        self.cartier2(w) == *w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::polynomial_2form_is_exact;
    use rand::{Rng, SeedableRng};

    fn poly(k: &FormField, terms: &[((u32, u32), u64)]) -> MultiRatFunc {
        let mut b = BiPoly::default();
        for &(e, c) in terms {
            b.add_term(e, c % k.p(), k.p());
        }
        k.from_bipoly(&b)
    }

    fn random_bipoly(k: &FormField, rng: &mut impl Rng, deg: u32) -> BiPoly {
        let mut b = BiPoly::default();
        for _ in 0..rng.gen_range(1..5) {
            let i = rng.gen_range(0..=deg);
            let j = rng.gen_range(0..=deg - i);
            b.add_term((i, j), rng.gen_range(0..k.p()), k.p());
        }
        b
    }

    fn random_func(k: &FormField, rng: &mut impl Rng) -> MultiRatFunc {
        loop {
            let n = random_bipoly(k, rng, 3);
            let d = random_bipoly(k, rng, 2);
            if !n.is_zero() && !d.is_zero() {
                return k.field().div(&k.from_bipoly(&n), &k.from_bipoly(&d));
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let k = FormField::new(5).unwrap();
        let s2 = poly(&k, &[((2, 0), 1)]);
        assert_eq!(k.d0(&s2), Form1 { ds: poly(&k, &[((1, 0), 2)]), dt: k.field().zero() });
        let k2 = FormField::new(2).unwrap();
        assert_eq!(k2.d0(&poly(&k2, &[((2, 0), 1)])), k2.zero1());
        let st3 = poly(&k, &[((1, 3), 1)]);
        assert_eq!(k.d1(&k.d0(&st3)), k.zero2());
    }

    #[test]
    fn dlog_examples() {
        let k = FormField::new(5).unwrap();
        let f = k.field();
        let w = k.dlog2(&k.s(), &k.t()).unwrap();
        assert_eq!(w.h, f.inv(&f.mul(&k.s(), &k.t())).unwrap());
        let g = f.add(&k.s(), &f.mul(&k.t(), &k.t()));
        assert_eq!(k.dlog2(&g, &f.neg(&g)).unwrap(), k.zero2());
        assert_eq!(k.dlog2(&g, &f.sub(&f.one(), &g)).unwrap(), k.zero2());
        assert!(k.dlog1(&f.zero()).is_err());
    }

    #[test]
    fn cartier2_examples() {
        let k = FormField::new(3).unwrap();
        let c = k.cartier2(&Form2 { h: poly(&k, &[((2, 2), 1)]) });
        assert_eq!(c.h, k.field().one());
        let st = Form2 { h: poly(&k, &[((1, 1), 1)]) };
        assert_eq!(k.cartier2(&st), k.zero2());
        let anti = Form1 { ds: k.field().zero(), dt: poly(&k, &[((2, 1), 2)]) };
        assert_eq!(k.d1(&anti), st);
        let inv = Form2 { h: k.field().inv(&poly(&k, &[((1, 1), 1)])).unwrap() };
        assert_eq!(k.cartier2(&inv), inv);
    }

    #[test]
    fn cartier1_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for p in [2u64, 3, 5, 7] {
            let k = FormField::new(p).unwrap();
            let w = Form1 { ds: poly(&k, &[((p as u32 - 1, 0), 1)]), dt: k.field().zero() };
            assert_eq!(k.cartier1(&w).unwrap(), Form1 { ds: k.field().one(), dt: k.field().zero() });
            for _ in 0..20 {
                let f = k.from_bipoly(&random_bipoly(&k, &mut rng, 6));
                assert!(k.in_b1(&k.d0(&f)).unwrap());
            }
            let fk = k.field();
            for f in [k.s(), fk.mul(&k.s(), &k.t()), fk.add(&k.s(), &k.t())] {
                let w = k.dlog1(&f).unwrap();
                assert_eq!(k.cartier1(&w).unwrap(), w);
            }
            let not_closed = Form1 { ds: k.t(), dt: k.field().zero() };
            assert!(matches!(k.cartier1(&not_closed), Err(Error::NotClosed)));
        }
    }

    #[test]
    fn membership_examples() {
        let k = FormField::new(3).unwrap();
        assert!(!k.in_b2(&Form2 { h: poly(&k, &[((2, 2), 1)]) }));
        assert!(k.in_b2(&k.zero2()));
        assert!(k.nu_member2(&k.dlog2(&k.s(), &k.t()).unwrap()));
        assert!(!k.nu_member2(&Form2 { h: k.s() }));
        assert!(k.nu_member0(&k.constant(2)));
        assert!(!k.nu_member0(&k.s()));
    }

    #[test]
    fn exterior_derivative_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for p in [2u64, 3, 5, 7, 11, 13] {
            let k = FormField::new(p).unwrap();
            let f = k.field();
            for _ in 0..170 {
                let x = random_func(&k, &mut rng);
                let y = random_func(&k, &mut rng);
                assert_eq!(k.d1(&k.d0(&x)), k.zero2());
                let lhs = k.d0(&f.mul(&x, &y));
                let rhs = k.add1(&k.scale1(&x, &k.d0(&y)), &k.scale1(&y, &k.d0(&x)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dlog2_is_a_symbol() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for p in [2u64, 3, 5, 7] {
            let k = FormField::new(p).unwrap();
            let f = k.field();
            for _ in 0..60 {
                let (x, y, z) = (random_func(&k, &mut rng), random_func(&k, &mut rng), random_func(&k, &mut rng));
                let add = |a: Form2, b: Form2| Form2 { h: f.add(&a.h, &b.h) };
                assert_eq!(k.dlog2(&f.mul(&x, &z), &y).unwrap(), add(k.dlog2(&x, &y).unwrap(), k.dlog2(&z, &y).unwrap()));
                assert_eq!(add(k.dlog2(&x, &y).unwrap(), k.dlog2(&y, &x).unwrap()), k.zero2());
                assert_eq!(k.dlog2(&x, &f.neg(&x)).unwrap(), k.zero2());
                assert_eq!(k.dlog2(&x, &x).unwrap(), k.dlog2(&x, &f.from_i64(-1)).unwrap());
                let one_minus = f.sub(&f.one(), &x);
                if !f.is_zero(&one_minus) {
                    assert_eq!(k.dlog2(&x, &one_minus).unwrap(), k.zero2());
                }
                assert!(k.nu_member2(&k.dlog2(&x, &y).unwrap()));
            }
        }
    }

    #[test]
    fn cartier_is_semilinear_and_inverts_gamma() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for p in [2u64, 3, 5] {
            let k = FormField::new(p).unwrap();
            let f = k.field();
            for _ in 0..40 {
                let u = random_func(&k, &mut rng);
                let w = Form2 { h: random_func(&k, &mut rng) };
                let up = f.pow(&u, p as u128);
                let lhs = k.cartier2(&Form2 { h: f.mul(&up, &w.h) });
                assert_eq!(lhs.h, f.mul(&u, &k.cartier2(&w).h));
                let (y1, y2) = (random_func(&k, &mut rng), random_func(&k, &mut rng));
                let dl = k.dlog2(&y1, &y2).unwrap();
                let gamma = Form2 { h: f.mul(&up, &dl.h) };
                assert_eq!(k.cartier2(&gamma).h, f.mul(&u, &dl.h));
            }
        }
    }

    #[test]
    fn exactness_matches_antiderivative_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 3, 5, 7] {
            let k = FormField::new(p).unwrap();
            for _ in 0..60 {
                let h = random_bipoly(&k, &mut rng, 6);
                let form = Form2 { h: k.from_bipoly(&h) };
                assert_eq!(k.in_b2(&form), polynomial_2form_is_exact(p, &h.terms, 6), "p={p} {h:?}");
            }
        }
    }
}
