//! `K_2` of the rational function field `F_q(T)`: places, tame symbols,
//! the decomposition into residue-field units, Weil reciprocity, a lift,
//! and the vanishing of `K_2(F_q)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Field, FqField, Poly, PolyRing, RatFunc, RatFuncField};
use crate::error::{Error, Result};
use crate::symexpr::SymbolExpr;

pub type FqPoly = Poly<u64>;
pub type FqRatFunc = RatFunc<u64>;
pub type FfSymbolExpr = SymbolExpr<FqRatFunc>;

/// A place of `F_q(T)`: a monic irreducible polynomial or the place at
/// infinity with uniformizer `1/T`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceFq {
    Finite(FqPoly),
    Infinity,
}

impl PlaceFq {
    /// Degree of the residue field over `F_q`.
    pub fn degree(&self) -> usize {
        match self {
            PlaceFq::Finite(p) => p.coeffs().len() - 1,
            PlaceFq::Infinity => 1,
        }
    }
}

/// Finitely supported map from finite places to residue units, each stored
/// as its representative of degree below the place's degree. Units equal to
/// 1 are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct K2FFClass {
    entries: BTreeMap<FqPoly, FqPoly>,
}

impl K2FFClass {
    pub fn entries(&self) -> &BTreeMap<FqPoly, FqPoly> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, place: &FqPoly) -> Option<&FqPoly> {
        self.entries.get(place)
    }
}

/// Result of checking the product formula for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilRecord {
    /// `(place, tame symbol, its norm to F_q)`.
    pub factors: Vec<(PlaceFq, FqPoly, u64)>,
    pub product: u64,
}

impl WeilRecord {
    pub fn holds(&self) -> bool {
        self.product == 1
    }
}

/// Witness that `{zeta, zeta}` vanishes in `K_2(F_q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// `zeta x^2 + zeta y^2 = 1` with `x, y` nonzero.
    Pair(u64, u64),
    /// Characteristic 2: `{zeta, zeta} = {zeta, -zeta} = 0` because `-1 = 1`.
    Char2,
}

/// The chain of identities showing `{zeta^m, zeta^n} = 0` in `K_2(F_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub q: u64,
    pub zeta: u64,
    pub m: i64,
    pub n: i64,
    pub witness: Option<Witness>,
    pub steps: Vec<String>,
}

/// Image of a symbol expression under the leading-coefficient retraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retraction {
    /// `(c(f), c(g), multiplicity)` per term.
    pub constants: Vec<(u64, u64, i64)>,
    pub traces: Vec<ReductionTrace>,
}

/// `F_q(T)` with helpers for places and symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionField {
    rf: RatFuncField<FqField>,
}

impl FunctionField {
    pub fn new(q: u64) -> Result<Self> {
        Ok(FunctionField { rf: RatFuncField::new(FqField::new(q)?, "T") })
    }

    pub fn from_field(field: FqField) -> Self {
        FunctionField { rf: RatFuncField::new(field, "T") }
    }

    pub fn rf(&self) -> &RatFuncField<FqField> {
        &self.rf
    }

    pub fn ring(&self) -> &PolyRing<FqField> {
        self.rf.ring()
    }

    pub fn fq(&self) -> &FqField {
        self.rf.base()
    }

    pub fn q(&self) -> u64 {
        self.fq().size()
    }

    /// Polynomial from coefficients low to high.
    pub fn poly(&self, coeffs: &[u64]) -> FqPoly {
        self.ring().from_coeffs(coeffs.to_vec())
    }

    pub fn from_poly(&self, p: FqPoly) -> FqRatFunc {
        self.rf.from_poly(p)
    }

    pub fn constant(&self, c: u64) -> FqRatFunc {
        self.rf.constant(c)
    }

    pub fn frac(&self, num: FqPoly, den: FqPoly) -> Result<FqRatFunc> {
        self.rf.frac(num, den).ok_or(Error::ZeroInput("denominator"))
    }

    pub fn fmt(&self, f: &FqRatFunc) -> String {
        self.rf.fmt_elem(f)
    }

    pub fn fmt_poly(&self, p: &FqPoly) -> String {
        self.ring().fmt_poly(p, "T")
    }

    pub fn fmt_place(&self, place: &PlaceFq) -> String {
        match place {
            PlaceFq::Finite(p) => self.fmt_poly(p),
            PlaceFq::Infinity => "inf".to_string(),
        }
    }

    /// A finite place; the polynomial must be monic irreducible.
    pub fn place(&self, p: FqPoly) -> Result<PlaceFq> {
        if !self.ring().is_monic(&p) || !self.ring().is_irreducible(&p) {
            return Err(Error::Reducible(self.fmt_poly(&p)));
        }
        Ok(PlaceFq::Finite(p))
    }

    fn check_place(&self, place: &PlaceFq) -> Result<()> {
        match place {
            PlaceFq::Finite(p) => self.place(p.clone()).map(|_| ()),
            PlaceFq::Infinity => Ok(()),
        }
    }

    /// `f(1/U)` written as a rational function of `U` (again called `T`).
    pub fn at_infinity_chart(&self, f: &FqRatFunc) -> FqRatFunc {
        let r = self.ring();
        let (n, d) = (r.deg(f.num()).unwrap(), r.deg(f.den()).unwrap());
        let (mut num, mut den) = (r.reverse(f.num()), r.reverse(f.den()));
        let u = r.x();
        if d > n {
            num = r.mul(&num, &r.pow(&u, (d - n) as u64));
        } else {
            den = r.mul(&den, &r.pow(&u, (n - d) as u64));
        }
        self.rf.frac(num, den).unwrap()
    }

    /// Order of vanishing at a place.
    pub fn valuation(&self, f: &FqRatFunc, place: &PlaceFq) -> Result<i64> {
        if self.rf.is_zero(f) {
            return Err(Error::ZeroInput("valuation"));
        }
        let r = self.ring();
        Ok(match place {
            PlaceFq::Finite(p) => {
                r.split_off(f.num(), p).0 as i64 - r.split_off(f.den(), p).0 as i64
            }
            PlaceFq::Infinity => r.deg(f.den()).unwrap() as i64 - r.deg(f.num()).unwrap() as i64,
        })
    }

    /// Valuation and the residue of `f / pi^v` at a finite place.
    fn unit_part(&self, f: &FqRatFunc, pi: &FqPoly) -> (i64, FqPoly) {
        let r = self.ring();
        let (a, nu) = r.split_off(f.num(), pi);
        let (b, du) = r.split_off(f.den(), pi);
        let du_inv = r.inv_mod(&du, pi).expect("cofactor is prime to the place");
        (a as i64 - b as i64, r.mul_mod(&nu, &du_inv, pi))
    }

    fn residue_pow(&self, x: &FqPoly, e: i64, pi: &FqPoly) -> FqPoly {
        let r = self.ring();
        let base = if e < 0 { r.inv_mod(x, pi).expect("unit") } else { x.clone() };
        r.pow_mod(&base, e.unsigned_abs() as u128, pi)
    }

    /// Tame symbol `(-1)^(v(f)v(g)) f^v(g) g^-v(f)` reduced at the place.
    /// At infinity the value is a constant polynomial.
    pub fn tame(&self, f: &FqRatFunc, g: &FqRatFunc, place: &PlaceFq) -> Result<FqPoly> {
        if self.rf.is_zero(f) || self.rf.is_zero(g) {
            return Err(Error::ZeroInput("tame symbol"));
        }
        self.check_place(place)?;
        match place {
            PlaceFq::Finite(pi) => Ok(self.tame_finite(f, g, pi)),
            PlaceFq::Infinity => {
                let u = self.ring().x();
                Ok(self.tame_finite(&self.at_infinity_chart(f), &self.at_infinity_chart(g), &u))
            }
        }
    }

    fn tame_finite(&self, f: &FqRatFunc, g: &FqRatFunc, pi: &FqPoly) -> FqPoly {
        let r = self.ring();
        let (a, uf) = self.unit_part(f, pi);
        let (b, ug) = self.unit_part(g, pi);
        let mut v = r.mul_mod(&self.residue_pow(&uf, b, pi), &self.residue_pow(&ug, -a, pi), pi);
        if (a * b) % 2 != 0 {
            v = r.neg(&v);
        }
        v
    }

    /// `Norm_{F_{q^d}/F_q}(x) = x^((q^d - 1)/(q - 1))` for `x` in `F_q[T]/pi`.
    pub fn norm(&self, x: &FqPoly, place: &PlaceFq) -> u64 {
        match place {
            PlaceFq::Infinity => self.ring().coeff(x, 0),
            PlaceFq::Finite(pi) => {
                let q = self.q() as u128;
                let d = place.degree() as u32;
                let e = (q.pow(d) - 1) / (q - 1);
                let n = self.ring().pow_mod(x, e, pi);
                debug_assert!(self.ring().deg(&n) == Some(0));
                self.ring().coeff(&n, 0)
            }
        }
    }

    /// Ratio of the leading coefficients of numerator and denominator.
    pub fn leading_coeff(&self, f: &FqRatFunc) -> Result<u64> {
        self.rf.leading_coeff(f).ok_or(Error::ZeroInput("leading coefficient"))
    }

    /// Finite places dividing some numerator or denominator.
    pub fn support(&self, fs: &[&FqRatFunc]) -> Result<Vec<FqPoly>> {
        let r = self.ring();
        let mut out = Vec::new();
        for f in fs {
            if self.rf.is_zero(f) {
                return Err(Error::ZeroInput("symbol entries"));
            }
            for p in [f.num(), f.den()] {
                if r.deg(p).unwrap() > 0 {
                    out.extend(r.irreducible_factors(p)?);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn mul_class(&self, c: &mut K2FFClass, pi: &FqPoly, x: &FqPoly) {
        let r = self.ring();
        let cur = c.entries.get(pi).cloned().unwrap_or_else(|| r.one());
        let next = r.mul_mod(&cur, x, pi);
        if r.is_one(&next) {
            c.entries.remove(pi);
        } else {
            c.entries.insert(pi.clone(), next);
        }
    }

    /// A class from explicit `(place, residue)` pairs; residues are reduced.
    pub fn class(&self, entries: impl IntoIterator<Item = (FqPoly, FqPoly)>) -> Result<K2FFClass> {
        let mut c = K2FFClass::default();
        for (pi, x) in entries {
            self.place(pi.clone())?;
            let x = self.ring().rem(&x, &pi);
            if x.is_zero() {
                return Err(Error::Invalid(format!("zero residue at {}", self.fmt_poly(&pi))));
            }
            self.mul_class(&mut c, &pi, &x);
        }
        Ok(c)
    }

    pub fn class_add(&self, a: &K2FFClass, b: &K2FFClass) -> K2FFClass {
        let mut out = a.clone();
        for (pi, x) in &b.entries {
            self.mul_class(&mut out, pi, x);
        }
        out
    }

    pub fn class_neg(&self, a: &K2FFClass) -> K2FFClass {
        let r = self.ring();
        K2FFClass {
            entries: a.entries.iter().map(|(pi, x)| (pi.clone(), r.inv_mod(x, pi).unwrap())).collect(),
        }
    }

    /// Tame symbols at every finite place; the `K_2(F_q)` summand is zero.
    pub fn decompose(&self, e: &FfSymbolExpr) -> Result<K2FFClass> {
        let all: Vec<&FqRatFunc> = e.terms().iter().flat_map(|t| [&t.x, &t.y]).collect();
        let places = self.support(&all)?;
        let mut out = K2FFClass::default();
        for pi in &places {
            let place = PlaceFq::Finite(pi.clone());
            for t in e.terms() {
                let s = self.tame(&t.x, &t.y, &place)?;
                let s = self.residue_pow(&s, t.multiplicity, pi);
                self.mul_class(&mut out, pi, &s);
            }
        }
        Ok(out)
    }

    /// Norms of tame symbols over all places of the support and infinity.
    pub fn weil_check(&self, f: &FqRatFunc, g: &FqRatFunc) -> Result<WeilRecord> {
        let mut places: Vec<PlaceFq> = self.support(&[f, g])?.into_iter().map(PlaceFq::Finite).collect();
        places.push(PlaceFq::Infinity);
        let mut factors = Vec::new();
        let mut product = 1;
        for place in places {
            let s = self.tame(f, g, &place)?;
            let n = self.norm(&s, &place);
            product = self.fq().mul(&product, &n);
            factors.push((place, s, n));
        }
        Ok(WeilRecord { factors, product })
    }

    /// A preimage under [`Self::decompose`], by descent on place degree: at a
    /// place `pi` of maximal degree with value `a`, the symbol `{a, pi}` with
    /// `deg a < deg pi` contributes `a` at `pi` and only touches places of
    /// smaller degree elsewhere.
    pub fn lift(&self, target: &K2FFClass) -> Result<FfSymbolExpr> {
        let mut rest = target.clone();
        let mut expr = FfSymbolExpr::new();
        let key = |p: &FqPoly| (p.coeffs().len(), p.clone());
        while let Some(pi) = rest.entries.keys().max_by_key(|p| key(p)).cloned() {
            let top = key(&pi);
            let a = rest.entries[&pi].clone();
            let term = FfSymbolExpr::symbol(self.from_poly(a), self.from_poly(pi.clone()));
            let image = self.decompose(&term)?;
            rest = self.class_add(&rest, &self.class_neg(&image));
            debug_assert!(rest.entries.keys().all(|p| key(p) < top));
            expr = expr.add(&term);
        }
        Ok(expr)
    }

    /// Leading coefficients of every entry, each symbol then reduced to zero
    /// in `K_2(F_q)`.
    pub fn retraction(&self, e: &FfSymbolExpr) -> Result<Retraction> {
        let fq = self.fq();
        let zeta = fq.generator();
        let mut constants = Vec::new();
        let mut traces = Vec::new();
        for t in e.terms() {
            let (a, b) = (self.leading_coeff(&t.x)?, self.leading_coeff(&t.y)?);
            constants.push((a, b, t.multiplicity));
            let m = discrete_log(fq, zeta, a);
            let n = discrete_log(fq, zeta, b);
            traces.push(k2_fq_reduce(m as i64 * t.multiplicity, n as i64, fq.size())?);
        }
        Ok(Retraction { constants, traces })
    }
}

impl fmt::Display for PlaceFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceFq::Finite(p) => write!(f, "{:?}", p.coeffs()),
            PlaceFq::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent `m` with `zeta^m = a`, by enumeration.
pub fn discrete_log(fq: &FqField, zeta: u64, a: u64) -> u64 {
    let mut x = 1;
    for m in 0..fq.size() - 1 {
        if x == a {
            return m;
        }
        x = fq.mul(&x, &zeta);
    }
    panic!("{a} is not a power of {zeta}");
}

fn check_generator(fq: &FqField, zeta: u64) -> Result<()> {
    if zeta == 0 || zeta >= fq.size() || fq.order(zeta) != fq.size() - 1 {
        return Err(Error::Invalid(format!("{zeta} does not generate F_{}^x", fq.size())));
    }
    Ok(())
}

/// First `(x, y)` in the encoding order with `zeta x^2 + zeta y^2 = 1`.
pub fn steinberg_witness(q: u64, zeta: u64) -> Result<Witness> {
    let fq = FqField::new(q)?;
    check_generator(&fq, zeta)?;
    if fq.p() == 2 {
        return Ok(Witness::Char2);
    }
    let one = fq.one();
    // squares of y indexed by value, to make the search linear
    let mut root_of = vec![0u64; q as usize];
    for y in (1..q).rev() {
        root_of[fq.mul(&y, &y) as usize] = y;
    }
    let zinv = fq.inv(&zeta).unwrap();
    for x in fq.units() {
        let rest = fq.sub(&one, &fq.mul(&zeta, &fq.mul(&x, &x)));
        let y2 = fq.mul(&rest, &zinv);
        let y = root_of[y2 as usize];
        if y != 0 {
            debug_assert_eq!(fq.add(&fq.mul(&zeta, &fq.mul(&x, &x)), &fq.mul(&zeta, &fq.mul(&y, &y))), one);
            return Ok(Witness::Pair(x, y));
        }
    }
    Err(Error::PropertyViolated(format!("no witness in F_{q}")))
}

/// Sizes of `{zeta x^2}` and `{1 - zeta y^2}` over all of `F_q`; their sum
/// exceeds `q`, so the sets meet.
pub fn counting_bound(q: u64, zeta: u64) -> Result<(usize, usize)> {
    let fq = FqField::new(q)?;
    check_generator(&fq, zeta)?;
    let mut left = vec![false; q as usize];
    let mut right = vec![false; q as usize];
    for x in fq.elements() {
        let z = fq.mul(&zeta, &fq.mul(&x, &x));
        left[z as usize] = true;
        right[fq.sub(&fq.one(), &z) as usize] = true;
    }
    Ok((left.iter().filter(|&&b| b).count(), right.iter().filter(|&&b| b).count()))
}

/// Proof that `{zeta^m, zeta^n} = 0` in `K_2(F_q)` for the canonical generator.
pub fn k2_fq_reduce(m: i64, n: i64, q: u64) -> Result<ReductionTrace> {
    let fq = FqField::new(q)?;
    let zeta = fq.generator();
    let order = (q - 1) as i64;
    let mut steps = Vec::new();
    if m.rem_euclid(order) == 0 || n.rem_euclid(order) == 0 {
        steps.push(format!("zeta^{m} or zeta^{n} equals 1 in F_{q}, so the symbol is 0"));
        return Ok(ReductionTrace { q, zeta, m, n, witness: None, steps });
    }
    let witness = steinberg_witness(q, zeta)?;
    match witness {
        Witness::Char2 => {
            steps.push(format!("-1 = 1 in F_{q}, so {{{zeta},{zeta}}} = {{{zeta},-{zeta}}} = 0"));
        }
        Witness::Pair(x, y) => {
            steps.push(format!("2{{{zeta},{zeta}}} = 2{{{zeta},-1}} = {{{zeta},1}} = 0"));
            steps.push(format!(
                "2{{zeta^{m},zeta^{n}}} = 2*({m})*({n}){{{zeta},{zeta}}} = 0"
            ));
            steps.push(format!("witness: {zeta}*{x}^2 + {zeta}*{y}^2 = 1 in F_{q}"));
            steps.push(format!(
                "0 = {{{zeta}*{x}^2, {zeta}*{y}^2}} = {{{zeta},{zeta}}} + 2(...) = {{{zeta},{zeta}}}"
            ));
        }
    }
    steps.push(format!("{{zeta^{m},zeta^{n}}} = ({m})*({n}){{{zeta},{zeta}}} = 0"));
    Ok(ReductionTrace { q, zeta, m, n, witness: Some(witness), steps })
}
