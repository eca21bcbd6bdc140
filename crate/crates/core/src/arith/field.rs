//! Field contexts. Elements are plain values; every operation goes through
//! the field object, which carries the modulus and other runtime data.

use std::fmt;

use num_traits::{One, Zero};

use super::integer::{inv_mod, is_prime_u64, mul_mod, prime_power, Rational};
use super::poly::PolyRing;
use crate::error::{Error, Result};

pub trait Field: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + Eq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Zero for characteristic zero.
    fn characteristic(&self) -> u64;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Panics on division by zero; callers check first.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power; negative exponents invert (the base must be nonzero).
    fn powi(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let r = self.pow(a, e.unsigned_abs() as u128);
        if e < 0 {
            self.inv(&r).expect("negative power of zero")
        } else {
            r
        }
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_integer(n.into())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn fmt_elem(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// Largest field size accepted by [`FqField::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

/// The finite field `F_q`, `q = p^k`, in the polynomial basis over `F_p`.
///
/// An element is encoded as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
/// where `c_i` are its coordinates; this encoding is also the basis ordering
/// used to pick canonical moduli and generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, low to high, length `k + 1` (just `[0, 1]` when `k = 1`).
    modulus: Vec<u64>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl FqField {
    pub fn prime(p: u64) -> Result<FqField> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if p > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(p));
        }
        Ok(FqField { p, k: 1, q: p, modulus: vec![0, 1] })
    }

    /// `F_q` with the smallest irreducible modulus in the encoding order.
    pub fn new(q: u64) -> Result<FqField> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(q));
        }
        let base = FqField::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let ring = PolyRing::new(base.clone());
        let modulus = (0..p.pow(k))
            .map(|low| {
                let mut c = base.decode_digits(low, k);
                c.push(1);
                ring.from_coeffs(c)
            })
            .find(|f| ring.is_irreducible(f))
            .expect("irreducible polynomials exist in every degree");
        Ok(FqField { p, k, q, modulus: modulus.coeffs().to_vec() })
    }

    /// Build from an explicit monic modulus over `F_p`; irreducibility is verified.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<FqField> {
        let base = FqField::prime(p)?;
        let ring = PolyRing::new(base);
        let f = ring.from_coeffs(modulus.iter().map(|c| c % p).collect());
        let k = ring.deg(&f).unwrap_or(0) as u32;
        if k == 0 || f.coeffs()[k as usize] != 1 || !ring.is_irreducible(&f) {
            return Err(Error::Reducible(format!("{:?}", modulus)));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE).ok_or(Error::FieldTooLarge(u64::MAX))?;
        if k == 1 {
            return FqField::prime(p);
        }
        Ok(FqField { p, k, q, modulus: f.coeffs().to_vec() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u64 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.q
    }

    fn decode_digits(&self, mut a: u64, k: u32) -> Vec<u64> {
        (0..k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    /// Coordinates of an element in the polynomial basis.
    pub fn coords(&self, a: u64) -> Vec<u64> {
        self.decode_digits(a, self.k)
    }

    pub fn from_coords(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u64) -> u64 {
        assert!(a != 0 && a < self.q);
        let n = self.q - 1;
        let mut ord = n;
        for (l, _) in super::integer::factor_natural(&n.into()).unwrap_or_default() {
            while ord % l == 0 && self.is_one(&self.pow(&a, (ord / l) as u128)) {
                ord /= l;
            }
        }
        ord
    }

    /// Smallest element (in the encoding order) of multiplicative order `q - 1`.
    pub fn generator(&self) -> u64 {
        let n = self.q - 1;
        let ls: Vec<u64> = super::integer::factor_natural(&n.into())
            .unwrap_or_default()
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        self.units()
            .find(|&g| ls.iter().all(|&l| !self.is_one(&self.pow(&g, (n / l) as u128))))
            .expect("the unit group is cyclic")
    }

    /// Quadratic character: 1 for nonzero squares, -1 for non-squares, 0 at zero.
    pub fn quadratic_character(&self, a: u64) -> i8 {
        assert!(self.p != 2, "quadratic character needs odd q");
        if a == 0 {
            return 0;
        }
        if self.is_one(&self.pow(&a, ((self.q - 1) / 2) as u128)) {
            1
        } else {
            -1
        }
    }
}

impl Field for FqField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (*a, *b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: &u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut a = *a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.k == 1 {
            return mul_mod(*a, *b, self.p);
        }
        let k = self.k as usize;
        let (x, y) = (self.coords(*a), self.coords(*b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + c * (self.p - m)) % self.p;
            }
        }
        self.from_coords(&prod[..k])
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        if self.k == 1 {
            return inv_mod(*a, self.p);
        }
        Some(self.pow(a, (self.q - 2) as u128))
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn fmt_elem(&self, a: &u64) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        // k > 1: a polynomial in the class `a` of the basis generator.
        let terms: Vec<String> = self
            .coords(*a)
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else if terms.len() == 1 {
            terms[0].clone()
        } else {
            format!("({})", terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_by_exhaustion(f: &FqField, a: u64) -> u64 {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = f.mul(&x, &a);
            n += 1;
        }
        n
    }

    #[test]
    fn generator_examples() {
        let f7 = FqField::new(7).unwrap();
        assert_eq!(f7.generator(), 3);
        assert_eq!(order_by_exhaustion(&f7, 3), 6);
        assert_eq!(FqField::new(2).unwrap().generator(), 1);
        let f9 = FqField::new(9).unwrap();
        let g = f9.generator();
        assert_eq!(order_by_exhaustion(&f9, g), 8);
        let powers: std::collections::BTreeSet<u64> =
            (0..8).map(|e| f9.pow(&g, e)).collect();
        assert_eq!(powers.len(), 8);
        assert_eq!(FqField::new(12), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(FqField::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FqField::new(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FqField::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert!(FqField::with_modulus(3, &[0, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_small_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 25, 27] {
            let f = FqField::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1, "q={q} a={a}");
                }
                for b in f.elements() {
                    assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                    let c = (a * 7 + b * 3) % q;
                    let lhs = f.mul(&a, &f.add(&b, &c));
                    let rhs = f.add(&f.mul(&a, &b), &f.mul(&a, &c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn generators_have_full_order() {
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 121, 128, 1 << 20] {
            let f = FqField::new(q).unwrap();
            let g = f.generator();
            assert_eq!(f.order(g), q - 1, "q={q}");
            for (l, _) in super::super::integer::factor_natural(&(q - 1).into()).unwrap() {
                assert_ne!(f.pow(&g, ((q - 1) / l) as u128), 1);
            }
            // smallest: no smaller unit has full order
            for a in 1..g {
                assert_ne!(f.order(a), q - 1);
            }
        }
    }
}
