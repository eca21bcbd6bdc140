//! Integers and rationals: primality, factorization, valuations and the
//! Legendre symbol.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::sign::Sign;
use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// Trial division handles everything below this bound directly.
const TRIAL_BOUND: u64 = 1 << 20;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &Integer) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => false,
    }
}

/// Decompose `q = p^k`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).map_or(true, |v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// All primes `< n`.
pub fn primes_below(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard rho; `n` odd composite.
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Factor a positive integer into `(prime, exponent)` pairs, primes increasing.
pub fn factor_natural(n: &Integer) -> Result<Vec<(u64, i64)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput("factorization"));
    }
    let mut n = n.abs();
    let mut primes: Vec<u64> = Vec::new();
    let mut d = 2u64;
    while d < TRIAL_BOUND {
        if let Some(small) = n.to_u64() {
            if small < d.saturating_mul(d) {
                break;
            }
        }
        let big_d = BigInt::from(d);
        loop {
            let (quot, rem) = n.div_rem(&big_d);
            if !rem.is_zero() {
                break;
            }
            primes.push(d);
            n = quot;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        match n.to_u64() {
            Some(rest) => factor_u64_into(rest, &mut primes),
            None => return Err(Error::FactorizationTooHard(n.to_string())),
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, i64)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Prime factorization of a nonzero rational; exponents may be negative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, i64)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map_or(0, |i| self.factors[i].1)
    }

    /// Multiply the factorization back out.
    pub fn value(&self) -> Rational {
        let mut num = Integer::one();
        let mut den = Integer::one();
        for &(p, e) in &self.factors {
            let pe = num_traits::pow(Integer::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        Rational::new(num, den)
    }
}

pub fn factorize(x: &Rational) -> Result<(Sign, Factorization)> {
    if x.is_zero() {
        return Err(Error::ZeroInput("factorize"));
    }
    let sign = if x.is_negative() { Sign::Minus } else { Sign::Plus };
    let mut factors = factor_natural(x.numer())?;
    factors.extend(factor_natural(x.denom())?.into_iter().map(|(p, e)| (p, -e)));
    factors.sort_unstable_by_key(|&(p, _)| p);
    Ok((sign, Factorization { factors }))
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> i64 {
    fn v_int(n: &Integer, p: &Integer) -> i64 {
        let mut n = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }
    debug_assert!(!x.is_zero());
    let bp = Integer::from(p);
    v_int(x.numer(), &bp) - v_int(x.denom(), &bp)
}

/// Residue class of an integer modulo `m`, in `[0, m)`.
pub fn int_mod(n: &Integer, m: u64) -> u64 {
    let r = n.mod_floor(&Integer::from(m));
    r.to_u64().expect("residue fits")
}

/// Image in `F_p` of a rational with nonnegative valuation at `p`.
pub fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let d = int_mod(x.denom(), p);
    let inv = inv_mod(d, p)?;
    Some(mul_mod(int_mod(x.numer(), p), inv, p))
}

/// Reduction mod `p` of the unit part `x * p^(-v_p(x))`.
pub fn unit_residue(x: &Rational, p: u64) -> u64 {
    let v = valuation(x, p);
    let pv = num_traits::pow(Integer::from(p), v.unsigned_abs() as usize);
    let unit = if v >= 0 {
        Rational::new(x.numer() / &pv, x.denom().clone())
    } else {
        Rational::new(x.numer().clone(), x.denom() / &pv)
    };
    rational_mod(&unit, p).expect("unit part is a p-adic unit")
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(p.to_string()));
    }
    Ok(())
}

/// Legendre symbol via Euler's criterion.
pub fn legendre(a: &Integer, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    let r = int_mod(a, p);
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

pub(crate) fn require_odd_prime(p: u64) -> Result<()> {
    check_odd_prime(p)
}

/// Squarefree integer representative of the square class of a nonzero rational.
pub fn squarefree_part(x: &Rational) -> Result<Integer> {
    let (sign, fact) = factorize(x)?;
    let mut out = Integer::from(sign.to_i64());
    for &(p, e) in fact.factors() {
        if e.rem_euclid(2) == 1 {
            out *= p;
        }
    }
    Ok(out)
}

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn factorize_examples() {
        let (s, f) = factorize(&rat_int(12)).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!(f.factors(), &[(2, 2), (3, 1)]);
        let (s, f) = factorize(&rat(-9, 10)).unwrap();
        assert_eq!(s, Sign::Minus);
        assert_eq!(f.factors(), &[(2, -1), (3, 2), (5, -1)]);
        assert!(trial_division_prime(999_983));
        let (_, f) = factorize(&rat_int(999_983)).unwrap();
        assert_eq!(f.factors(), &[(999_983, 1)]);
        assert_eq!(factorize(&rat_int(0)), Err(Error::ZeroInput("factorize")));
    }

    #[test]
    fn factorize_large_inputs() {
        let n = Integer::from(1_000_003u64) * Integer::from(999_983u64);
        let f = factor_natural(&n).unwrap();
        assert_eq!(f, vec![(999_983, 1), (1_000_003, 1)]);
        let big = num_traits::pow(Integer::from(2), 600) * 3;
        let f = factor_natural(&big).unwrap();
        assert_eq!(f, vec![(2, 600), (3, 1)]);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_division_prime(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&int(2), 5).unwrap(), -1);
        assert_eq!(legendre(&int(4), 5).unwrap(), 1);
        assert_eq!(legendre(&int(5), 5).unwrap(), 0);
        assert!(legendre(&int(3), 2).is_err());
        assert!(legendre(&int(3), 9).is_err());
    }

    #[test]
    fn legendre_matches_exhaustion() {
        for p in primes_below(100).into_iter().filter(|&p| p > 2) {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in -60i64..60 {
                let r = a.rem_euclid(p as i64) as u64;
                let expected = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(&int(a), p).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn residues_and_valuations() {
        assert_eq!(valuation(&rat(50, 3), 5), 2);
        assert_eq!(valuation(&rat(7, 25), 5), -2);
        assert_eq!(unit_residue(&rat(10, 1), 5), 2);
        assert_eq!(unit_residue(&rat(-1, 5), 5), 4);
        assert_eq!(squarefree_part(&rat(-18, 5)).unwrap(), int(-10));
    }

    proptest::proptest! {
        #[test]
        fn factorize_round_trips(n in 1i64..1_000_000_000, d in 1i64..1_000_000_000, neg: bool) {
            let x = if neg { rat(-n, d) } else { rat(n, d) };
            let (s, f) = factorize(&x).unwrap();
            let back = f.value() * rat_int(s.to_i64());
            proptest::prop_assert_eq!(back, x);
            for w in f.factors().windows(2) {
                proptest::prop_assert!(w[0].0 < w[1].0);
            }
            for &(p, e) in f.factors() {
                proptest::prop_assert!(is_prime_u64(p) && e != 0);
            }
        }

        #[test]
        fn legendre_is_multiplicative(a in 1i64..10_000, b in 1i64..10_000, pi in 1usize..25) {
            let p = primes_below(100)[pi];
            proptest::prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
            let lhs = legendre(&int(a), p).unwrap() * legendre(&int(b), p).unwrap();
            proptest::prop_assert_eq!(lhs, legendre(&int(a * b), p).unwrap());
        }
    }
}
