//! Seeded invariant suites for every module, run concurrently.

use std::thread;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::integer::{primes_below, rat, rat_int, Rational};
use crate::arith::{Field, FqField, GaussRat, PolyRing, Sign};
use crate::charpforms::{BiPoly, Form2, FormField};
use crate::funcfield::{counting_bound, steinberg_witness, FunctionField, Witness};
use crate::k2q::{lambda_tate, lift, moore_lift, moore_map, moore_sum, quadratic_reciprocity, K2QClass, QSymbolExpr};
use crate::localsym::{hilbert, support_places};
use crate::oracles::polynomial_2form_is_exact;
use crate::quadforms::{conic_point_search, conic_solvable_q, pfister_hasse_identity};
use crate::regnum::{bloch_wigner, cx_field, loop_integral, residue_check, Cx, CxRatFunc, Loop};
use crate::zeta::{birch_tate_q, tate_identity, w2_of_q, CurveFq};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport { name: self.name, checks: self.checks, failures: self.failures }
    }
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let n = rng.gen_range(1..=bound) * if rng.gen() { 1 } else { -1 };
    rat(n, rng.gen_range(1..=bound))
}

fn arith_suite() -> SuiteReport {
    let mut s = Suite::new("arith");
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for q in [2u64, 3, 4, 5, 7, 8, 9, 25, 27] {
        let ring = PolyRing::new(FqField::new(q).unwrap());
        for _ in 0..30 {
            let d = rng.gen_range(1..8);
            let c: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..q)).collect();
            let f = ring.from_coeffs(c);
            if f.is_zero() {
                continue;
            }
            let fac = ring.factor(&f).unwrap();
            let mut prod = ring.constant(fac.unit);
            for (g, e) in &fac.factors {
                prod = ring.mul(&prod, &ring.pow(g, *e as u64));
                s.check(ring.is_irreducible(g), || format!("reducible factor over F_{q}"));
            }
            s.check(prod == f, || format!("factorization over F_{q} does not multiply back"));
        }
    }
    s.finish()
}

fn localsym_suite() -> SuiteReport {
    let mut s = Suite::new("localsym");
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..500 {
        let (x, y) = (random_rational(&mut rng, 1_000_000), random_rational(&mut rng, 1_000_000));
        let prod: Sign = support_places(&x, &y).unwrap().into_iter().map(|v| hilbert(&x, &y, v).unwrap()).product();
        s.check(prod.is_plus(), || format!("product formula fails for ({x}, {y})"));
        if !x.is_one() {
            let y = Rational::one() - &x;
            let ok = support_places(&x, &y).unwrap().into_iter().all(|v| hilbert(&x, &y, v).unwrap().is_plus());
            s.check(ok, || format!("Steinberg relation fails at {x}"));
        }
    }
    s.finish()
}

fn k2q_suite() -> SuiteReport {
    let mut s = Suite::new("k2q");
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let primes = primes_below(1000);
    for _ in 0..200 {
        let mut c = K2QClass::new(if rng.gen() { Sign::Plus } else { Sign::Minus }, []).unwrap();
        for _ in 0..rng.gen_range(0..4) {
            let p = primes[rng.gen_range(1..primes.len())];
            c = c.add(&K2QClass::new(Sign::Plus, [(p, rng.gen_range(1..p))]).unwrap());
        }
        let back = lambda_tate(&lift(&c).unwrap()).unwrap();
        s.check(back == c, || format!("lift round trip fails for {c}"));
    }
    for _ in 0..100 {
        let e = QSymbolExpr::from_terms(
            (0..2).map(|_| (random_rational(&mut rng, 1000), random_rational(&mut rng, 1000), rng.gen_range(-2..=2))),
        );
        let m = moore_map(&e).unwrap();
        s.check(moore_sum(&m).is_plus(), || "moore_sum of an image is -1".into());
        s.check(moore_lift(&m).map(|c| c.image == m).unwrap_or(false), || "moore_lift round trip fails".into());
    }
    for (p, q) in [(3, 5), (3, 7), (11, 19), (97, 101)] {
        s.check(quadratic_reciprocity(p, q).unwrap().consistent, || format!("quadratic reciprocity ({p}, {q})"));
    }
    s.finish()
}

fn funcfield_suite() -> SuiteReport {
    let mut s = Suite::new("funcfield");
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for q in [2u64, 3, 4, 5, 7, 9] {
        let k = FunctionField::new(q).unwrap();
        let random_func = |rng: &mut ChaCha8Rng| loop {
            let n: Vec<u64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..q)).collect();
            let d: Vec<u64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(0..q)).collect();
            if let Ok(f) = k.frac(k.poly(&n), k.poly(&d)) {
                if !k.rf().is_zero(&f) {
                    return f;
                }
            }
        };
        for _ in 0..50 {
            let (f, g) = (random_func(&mut rng), random_func(&mut rng));
            s.check(k.weil_check(&f, &g).unwrap().holds(), || format!("Weil reciprocity over F_{q}"));
            let c = k.decompose(&crate::funcfield::FfSymbolExpr::symbol(f, g)).unwrap();
            s.check(k.decompose(&k.lift(&c).unwrap()).unwrap() == c, || format!("lift round trip over F_{q}"));
        }
    }
    for q in (3..=121u64).filter(|&q| crate::arith::integer::prime_power(q).is_some_and(|(p, _)| p != 2)) {
        let zeta = FqField::new(q).unwrap().generator();
        let (a, b) = counting_bound(q, zeta).unwrap();
        s.check(a + b > q as usize, || format!("counting bound fails for q = {q}"));
        s.check(matches!(steinberg_witness(q, zeta), Ok(Witness::Pair(..))), || format!("no witness for q = {q}"));
    }
    s.finish()
}

fn quadforms_suite() -> SuiteReport {
    let mut s = Suite::new("quadforms");
    for x in -12i64..=12 {
        for y in -12i64..=12 {
            if x == 0 || y == 0 {
                continue;
            }
            let (xr, yr) = (rat_int(x), rat_int(y));
            for v in support_places(&xr, &yr).unwrap() {
                s.check(pfister_hasse_identity(&xr, &yr, v).unwrap().holds(), || format!("Pfister identity ({x}, {y}) at {v}"));
            }
            let c = conic_solvable_q(&xr, &yr).unwrap();
            let found = conic_point_search(&xr, &yr, if c.solvable { 10_000 } else { 40 }).is_some();
            s.check(found == c.solvable, || format!("conic ({x}, {y}) disagrees with point search"));
        }
    }
    s.finish()
}

fn charpforms_suite() -> SuiteReport {
    let mut s = Suite::new("charpforms");
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for p in [2u64, 3, 5] {
        let k = FormField::new(p).unwrap();
        let f = k.field();
        let random_poly = |rng: &mut ChaCha8Rng, deg: u32| {
            let mut b = BiPoly::default();
            for _ in 0..rng.gen_range(1..5) {
                let i = rng.gen_range(0..=deg);
                let j = rng.gen_range(0..=deg - i);
                *b.terms.entry((i, j)).or_insert(0) = rng.gen_range(1..p);
            }
            b
        };
        for _ in 0..20 {
            let (a, b) = (k.from_bipoly(&random_poly(&mut rng, 3)), k.from_bipoly(&random_poly(&mut rng, 3)));
            if f.is_zero(&a) || f.is_zero(&b) {
                continue;
            }
            let w = k.dlog2(&a, &b).unwrap();
            s.check(k.nu_member2(&w), || format!("dlog2 image not fixed by Cartier, p = {p}"));
            let u = k.from_bipoly(&random_poly(&mut rng, 2));
            let gamma = Form2 { h: f.mul(&f.pow(&u, p as u128), &w.h) };
            s.check(k.cartier2(&gamma).h == f.mul(&u, &w.h), || format!("C(gamma) != id, p = {p}"));
            let h = random_poly(&mut rng, 6);
            let exact = polynomial_2form_is_exact(p, &h.terms, 6);
            s.check(k.in_b2(&Form2 { h: k.from_bipoly(&h) }) == exact, || format!("in_B2 disagrees with antiderivative search, p = {p}"));
        }
    }
    s.finish()
}

fn zeta_suite() -> SuiteReport {
    let mut s = Suite::new("zeta");
    for q in [2u64, 3, 4, 5, 7, 9] {
        let t = tate_identity(&CurveFq::projective_line(q).unwrap()).unwrap();
        s.check(t.holds() && t.lhs.is_one(), || format!("genus 0 identity fails for q = {q}"));
    }
    for p in [5u64, 7] {
        for a in 0..p {
            for b in 0..p {
                if let Ok(c) = CurveFq::elliptic(p, a, b) {
                    s.check(tate_identity(&c).is_ok_and(|t| t.holds()), || format!("tate identity fails for ({a}, {b}) over F_{p}"));
                }
            }
        }
    }
    s.check(w2_of_q(200).w2 == 24, || "w_2(Q) != 24".into());
    s.check(birch_tate_q().is_ok_and(|b| b.holds()), || "Birch-Tate product != 2".into());
    s.finish()
}

fn regnum_suite() -> SuiteReport {
    let mut s = Suite::new("regnum");
    let k = cx_field();
    let z = k.var_elem();
    let two_z = k.mul(&k.from_i64(2), &z);
    let v = loop_integral(&z, &two_z, &Loop::circle(Cx::zero(), 0.1)).unwrap().value;
    s.check((v + 2f64.ln()).abs() < 1e-9, || format!("loop integral of (z, 2z) is {v}"));
    let catalan = crate::oracles::catalan_series(2_000_000);
    let d = bloch_wigner(Cx::new(0.0, 1.0)).unwrap().value;
    s.check((d - catalan).abs() < 1e-9, || format!("D(i) = {d}"));
    for x in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let d = bloch_wigner(Cx::new(x, 0.0)).unwrap().value;
        s.check(d.abs() < 1e-15, || format!("D({x}) = {d}"));
    }
    let g = |re: i64, im: i64| GaussRat::new(rat_int(re), rat_int(im));
    let lin = |a: &GaussRat| -> CxRatFunc { k.sub(&z, &k.constant(a.clone())) };
    let f = k.mul(&lin(&g(0, 0)), &k.inv(&lin(&g(1, 1))).unwrap());
    let h = k.mul(&k.mul(&k.from_i64(3), &lin(&g(0, 0))), &lin(&g(-2, 1)));
    for a in [g(0, 0), g(1, 1), g(-2, 1)] {
        let r = residue_check(&f, &h, &a).unwrap();
        s.check(r.agrees(), || format!("residue check at {a:?}: {} vs {}", r.integral.value, r.expected));
    }
    s.finish()
}

/// Every suite, each on its own thread; results in a fixed order.
pub fn run_all() -> Vec<SuiteReport> {
    let suites: [fn() -> SuiteReport; 8] = [
        arith_suite,
        localsym_suite,
        k2q_suite,
        funcfield_suite,
        quadforms_suite,
        charpforms_suite,
        zeta_suite,
        regnum_suite,
    ];
    thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|f| scope.spawn(f)).collect();
        handles
            .into_iter()
            .zip(suites.iter())
            .map(|(h, _)| {
                h.join().unwrap_or_else(|_| SuiteReport { name: "panicked", checks: 0, failures: vec!["suite panicked".into()] })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for r in super::run_all() {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checks > 0);
        }
    }
}
