//! Factorization of polynomials over finite fields: squarefree
//! decomposition, distinct-degree and equal-degree splitting.

use super::field::{Field, FqField};
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

type FqPoly = Poly<u64>;

/// Leading coefficient and monic irreducible factors with exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    pub unit: u64,
    pub factors: Vec<(FqPoly, u32)>,
}

impl PolyRing<FqField> {
    /// `X^(q^i) mod f`, iterating the `q`-power map `i` times from `h`.
    fn frobenius_iter(&self, h: &FqPoly, i: u32, f: &FqPoly) -> FqPoly {
        let q = self.field().size() as u128;
        (0..i).fold(self.rem(h, f), |acc, _| self.pow_mod(&acc, q, f))
    }

    pub fn is_irreducible(&self, f: &FqPoly) -> bool {
        let Some(n) = self.deg(f) else { return false };
        if n == 0 {
            return false;
        }
        let x = self.x();
        let mut h = self.rem(&x, f);
        for _ in 1..=n / 2 {
            h = self.frobenius_iter(&h, 1, f);
            if !self.is_one(&self.gcd(&self.sub(&h, &x), f)) {
                return false;
            }
        }
        true
    }

    /// `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self, f: &FqPoly) -> FqPoly {
        let fld = self.field();
        let p = fld.p() as usize;
        let e = (fld.size() / fld.p()) as u128;
        let v = f
            .coeffs()
            .iter()
            .step_by(p)
            .map(|c| fld.pow(c, e))
            .collect();
        self.from_coeffs(v)
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with
    /// `f = prod g^e`, the `g` squarefree and pairwise coprime.
    fn squarefree(&self, f: &FqPoly) -> Vec<(FqPoly, u32)> {
        let mut out = Vec::new();
        if self.deg(f).unwrap_or(0) == 0 {
            return out;
        }
        let fprime = self.derivative(f);
        let mut c = self.gcd(f, &fprime);
        let mut w = self.div_exact(f, &c).unwrap();
        let mut i = 1;
        while !self.is_one(&w) {
            let y = self.gcd(&w, &c);
            let fac = self.div_exact(&w, &y).unwrap();
            if !self.is_one(&fac) {
                out.push((fac, i));
            }
            w = y;
            c = self.div_exact(&c, &w).unwrap();
            i += 1;
        }
        if !self.is_one(&c) {
            let p = self.field().p() as u32;
            for (g, e) in self.squarefree(&self.pth_root(&c)) {
                out.push((g, e * p));
            }
        }
        out
    }

    fn distinct_degree(&self, f: &FqPoly) -> Vec<(FqPoly, u32)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x = self.x();
        let mut h = self.rem(&x, &f);
        let mut i = 1;
        while self.deg(&f).unwrap_or(0) >= 2 * i {
            h = self.frobenius_iter(&h, 1, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if !self.is_one(&g) {
                f = self.div_exact(&f, &g).unwrap();
                h = self.rem(&h, &f);
                out.push((g, i as u32));
            }
            i += 1;
        }
        if let Some(d) = self.deg(&f).filter(|&d| d > 0) {
            out.push((f, d as u32));
        }
        out
    }

    // Candidate splitting polynomials, enumerated deterministically.
    fn candidate(&self, n: u64, below: usize) -> FqPoly {
        let q = self.field().size();
        let mut digits = Vec::new();
        let mut m = n;
        while m > 0 && digits.len() < below {
            digits.push(m % q);
            m /= q;
        }
        self.from_coeffs(digits)
    }

    fn equal_degree(&self, g: &FqPoly, d: u32, out: &mut Vec<FqPoly>) {
        let n = self.deg(g).unwrap();
        if n as u32 == d {
            out.push(g.clone());
            return;
        }
        let fld = self.field();
        let q = fld.size();
        for counter in q.. {
            let a = self.candidate(counter, n);
            if self.is_constant(&a) {
                continue;
            }
            let b = if fld.p() == 2 {
                // absolute trace to F_2: a + a^2 + ... + a^(2^(k d - 1))
                let steps = fld.degree() * d;
                let mut t = self.rem(&a, g);
                let mut acc = t.clone();
                for _ in 1..steps {
                    t = self.mul_mod(&t, &t, g);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
                let mut t = self.rem(&a, g);
                let mut norm = t.clone();
                for _ in 1..d {
                    t = self.pow_mod(&t, q as u128, g);
                    norm = self.mul_mod(&norm, &t, g);
                }
                let half = self.pow_mod(&norm, ((q - 1) / 2) as u128, g);
                self.sub(&half, &self.one())
            };
            let h = self.gcd(&b, g);
            let dh = self.deg(&h).unwrap_or(0);
            if dh > 0 && dh < n {
                self.equal_degree(&h, d, out);
                self.equal_degree(&self.div_exact(g, &h).unwrap(), d, out);
                return;
            }
        }
    }

    /// Complete factorization into monic irreducibles.
    pub fn factor(&self, f: &FqPoly) -> Result<PolyFactorization> {
        let (unit, monic) = self.monic(f).ok_or(Error::ZeroInput("poly_factor"))?;
        let mut factors = Vec::new();
        for (g, e) in self.squarefree(&monic) {
            for (h, d) in self.distinct_degree(&g) {
                let mut pieces = Vec::new();
                self.equal_degree(&h, d, &mut pieces);
                factors.extend(pieces.into_iter().map(|p| (p, e)));
            }
        }
        factors.sort_by(|(a, _), (b, _)| {
            (a.coeffs().len(), a.coeffs().iter().rev().collect::<Vec<_>>())
                .cmp(&(b.coeffs().len(), b.coeffs().iter().rev().collect::<Vec<_>>()))
        });
        Ok(PolyFactorization { unit, factors })
    }

    /// Monic irreducible factors of `f` (no multiplicities).
    pub fn irreducible_factors(&self, f: &FqPoly) -> Result<Vec<FqPoly>> {
        Ok(self.factor(f)?.factors.into_iter().map(|(g, _)| g).collect())
    }
}

/// Factor `f` over `F_q`.
pub fn poly_factor(ring: &PolyRing<FqField>, f: &FqPoly) -> Result<PolyFactorization> {
    ring.factor(f)
}
