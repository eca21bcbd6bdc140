//! Quadratic forms over `Q` and quaternion algebras: diagonalization,
//! invariants, equivalence, and local-global decisions for conics.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::integer::{factorize, isqrt, squarefree_part, Integer, Rational};
use crate::arith::Sign;
use crate::error::{Error, Result};
use crate::localsym::{hilbert, support_places, PlaceQ};

pub type Matrix = Vec<Vec<Rational>>;

/// A diagonal form `<a_1, ..., a_n>` with nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagForm {
    entries: Vec<Rational>,
}

impl DiagForm {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.iter().any(|a| a.is_zero()) {
            return Err(Error::ZeroInput("diagonal form entry"));
        }
        Ok(DiagForm { entries })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }
}

/// Diagonal form together with the basis realizing it: `U^T G U = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub form: DiagForm,
    pub basis: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    /// Squarefree integer representing the discriminant's square class.
    pub disc: Integer,
    pub signature: (usize, usize),
    /// `prod_{i<j} (a_i, a_j)_v` on `Real`, `2` and the odd primes dividing
    /// an entry; `+1` elsewhere.
    pub hasse: BTreeMap<PlaceQ, Sign>,
}

impl FormInvariants {
    pub fn hasse_at(&self, place: PlaceQ) -> Sign {
        self.hasse.get(&place).copied().unwrap_or(Sign::Plus)
    }

    pub fn hasse_product(&self) -> Sign {
        self.hasse.values().copied().product()
    }
}

fn check_square(g: &Matrix) -> Result<usize> {
    let n = g.len();
    if g.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid("Gram matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if g[i][j] != g[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    Ok(n)
}

struct Congruence {
    g: Matrix,
    u: Matrix,
}

impl Congruence {
    fn swap(&mut self, i: usize, j: usize) {
        self.g.swap(i, j);
        for row in self.g.iter_mut().chain(self.u.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// `e_j <- e_j + c e_k`
    fn add(&mut self, j: usize, k: usize, c: &Rational) {
        let n = self.g.len();
        for row in self.g.iter_mut().chain(self.u.iter_mut()) {
            let v = &row[k] * c;
            row[j] += v;
        }
        for col in 0..n {
            let v = &self.g[k][col] * c;
            self.g[j][col] += v;
        }
    }

    /// `e_j <- c e_j`
    fn scale(&mut self, j: usize, c: &Rational) {
        for row in self.g.iter_mut().chain(self.u.iter_mut()) {
            row[j] *= c;
        }
        for v in self.g[j].iter_mut() {
            *v *= c;
        }
    }
}

/// Symmetric elimination. A zero pivot is replaced by a later nonzero
/// diagonal entry, or else by the pair `e_k + e_j, e_k - e_j` for an
/// off-diagonal `g_kj != 0`.
pub fn diagonalize(g: &Matrix) -> Result<Diagonalization> {
    let n = check_square(g)?;
    let mut c = Congruence {
        g: g.clone(),
        u: (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect(),
    };
    for k in 0..n {
        if c.g[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !c.g[j][j].is_zero()) {
                c.swap(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !c.g[k][j].is_zero()) {
                c.add(k, j, &Rational::one());
                c.scale(j, &Rational::from_integer((-2).into()));
                c.add(j, k, &Rational::one());
            } else {
                return Err(Error::Singular);
            }
        }
        for j in k + 1..n {
            if !c.g[k][j].is_zero() {
                let f = -(&c.g[k][j] / &c.g[k][k]);
                c.add(j, k, &f);
            }
        }
    }
    let entries = (0..n).map(|i| c.g[i][i].clone()).collect();
    Ok(Diagonalization { form: DiagForm::new(entries)?, basis: c.u })
}

/// `U^T G U`.
pub fn congruent(g: &Matrix, u: &Matrix) -> Matrix {
    let n = g.len();
    let gu: Matrix = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &g[i][k] * &u[k][j]).sum()).collect())
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &u[k][i] * &gu[k][j]).sum()).collect())
        .collect()
}

fn places_of(entries: &[Rational]) -> Result<Vec<PlaceQ>> {
    let mut set: BTreeSet<PlaceQ> = [PlaceQ::Real, PlaceQ::Prime(2)].into();
    for a in entries {
        set.extend(factorize(a)?.1.primes().map(PlaceQ::Prime));
    }
    Ok(set.into_iter().collect())
}

pub fn invariants(f: &DiagForm) -> Result<FormInvariants> {
    let a = f.entries();
    let disc = squarefree_part(&a.iter().fold(Rational::one(), |acc, x| acc * x))?;
    let positives = a.iter().filter(|x| x.is_positive()).count();
    let mut hasse = BTreeMap::new();
    for v in places_of(a)? {
        let mut s = Sign::Plus;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                s *= hilbert(&a[i], &a[j], v)?;
            }
        }
        hasse.insert(v, s);
    }
    Ok(FormInvariants { rank: a.len(), disc, signature: (positives, a.len() - positives), hasse })
}

/// Hasse-Minkowski: rank, discriminant, signature and every Hasse invariant.
pub fn equivalent_over_q(f1: &DiagForm, f2: &DiagForm) -> Result<bool> {
    let (i1, i2) = (invariants(f1)?, invariants(f2)?);
    let places: BTreeSet<PlaceQ> = i1.hasse.keys().chain(i2.hasse.keys()).copied().collect();
    Ok(i1.rank == i2.rank
        && i1.disc == i2.disc
        && i1.signature == i2.signature
        && places.into_iter().all(|v| i1.hasse_at(v) == i2.hasse_at(v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicCertificate {
    /// Hilbert symbol at every place of the support set.
    pub places: Vec<(PlaceQ, Sign)>,
    pub obstructions: Vec<PlaceQ>,
    pub solvable: bool,
    /// A rational point `(R, S)` on `x R^2 + y S^2 = 1`, when a short search finds one.
    pub point: Option<(Rational, Rational)>,
}

/// Height bound for the point attached to a conic certificate.
pub const CERTIFICATE_SEARCH_HEIGHT: u64 = 100;

/// Local-global decision for `x R^2 + y S^2 = 1`.
pub fn conic_solvable_q(x: &Rational, y: &Rational) -> Result<ConicCertificate> {
    let places = support_places(x, y)?
        .into_iter()
        .map(|v| Ok((v, hilbert(x, y, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let obstructions: Vec<PlaceQ> = places.iter().filter(|p| !p.1.is_plus()).map(|p| p.0).collect();
    if obstructions.len() == 1 {
        return Err(Error::PropertyViolated(format!("a single local obstruction at {}", obstructions[0])));
    }
    let solvable = obstructions.is_empty();
    let point = if solvable { conic_point_search(x, y, CERTIFICATE_SEARCH_HEIGHT) } else { None };
    Ok(ConicCertificate { places, obstructions, solvable, point })
}

// x = n/d  ->  (n d, d): x (d a)^2 = (n d) a^2
fn integral_scale(x: &Rational) -> Option<(i128, i128)> {
    let d = x.denom().to_i128()?;
    Some((x.numer().to_i128()?.checked_mul(d)?, d))
}

/// Enumerates primitive integer triples `(a, b, c)`, `c > 0`, with
/// `x' a^2 + y' b^2 = c^2` for the integral rescalings `x', y'` of `x, y`,
/// in order of `max(|a|, |b|, c) <= height`. Returns `(R, S)` on the
/// original conic.
pub fn conic_point_search(x: &Rational, y: &Rational, height: u64) -> Option<(Rational, Rational)> {
    let (xi, dx) = integral_scale(x)?;
    let (yi, dy) = integral_scale(y)?;
    if xi == 0 || yi == 0 {
        return None;
    }
    let sqrt_of = |v: i128| -> Option<i128> {
        if v < 0 || v > u64::MAX as i128 {
            return None;
        }
        let r = isqrt(v as u64) as i128;
        (r * r == v).then_some(r)
    };
    // Solve coef * t^2 = c^2 - other * s^2 for t.
    let solve = |coef: i128, other: i128, s: i128, c: i128| -> Option<i128> {
        let rest = c.checked_mul(c)?.checked_sub(other.checked_mul(s)?.checked_mul(s)?)?;
        if rest % coef != 0 {
            return None;
        }
        sqrt_of(rest / coef)
    };
    let point = |a: i128, b: i128, c: i128| {
        let r = Rational::new(Integer::from(a * dx), Integer::from(c));
        let s = Rational::new(Integer::from(b * dy), Integer::from(c));
        (r, s)
    };
    let h = height as i128;
    for m in 1..=h {
        // pairs (s, c) with max(s, c) = m
        let pairs = (0..=m).map(move |s| (s, m)).chain((1..m).map(move |c| (m, c)));
        for (s, c) in pairs {
            if let Some(a) = solve(xi, yi, s, c).filter(|&a| a <= m) {
                return Some(point(a, s, c));
            }
            if let Some(b) = solve(yi, xi, s, c).filter(|&b| b <= m) {
                return Some(point(s, b, c));
            }
        }
    }
    None
}

/// Whether the quaternion algebra `(a, b)` splits over `Q_v`.
pub fn quaternion_splits_at(a: &Rational, b: &Rational, place: PlaceQ) -> Result<bool> {
    Ok(hilbert(a, b, place)?.is_plus())
}

/// Whether `(a, b)` is a matrix algebra over `Q`: split at every place of
/// the support set.
pub fn quaternion_splits(a: &Rational, b: &Rational) -> Result<bool> {
    for v in support_places(a, b)? {
        if !quaternion_splits_at(a, b, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of `hasse_v(<1, -x, -y, xy>) (-1, -1)_v = (x, y)_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PfisterCheck {
    pub hasse: Sign,
    pub correction: Sign,
    pub hilbert: Sign,
}

impl PfisterCheck {
    pub fn holds(&self) -> bool {
        self.hasse * self.correction == self.hilbert
    }
}

pub fn pfister_hasse_identity(x: &Rational, y: &Rational, place: PlaceQ) -> Result<PfisterCheck> {
    let form = DiagForm::new(vec![Rational::one(), -x.clone(), -y.clone(), x * y])?;
    let inv = invariants(&form)?;
    let m1 = -Rational::one();
    Ok(PfisterCheck {
        hasse: inv.hasse_at(place),
        correction: hilbert(&m1, &m1, place)?,
        hilbert: hilbert(x, y, place)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::integer::{rat, rat_int};
    use crate::oracles::conic_solvable_mod_prime_power;
    use rand::{Rng, SeedableRng};

    fn r(n: i64) -> Rational {
        rat_int(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|row| row.iter().map(|&v| r(v)).collect()).collect()
    }

    fn diag(v: &[i64]) -> DiagForm {
        DiagForm::new(v.iter().map(|&a| r(a)).collect()).unwrap()
    }

    fn is_diag_of(d: &Diagonalization, g: &Matrix) -> bool {
        let c = congruent(g, &d.basis);
        let n = g.len();
        (0..n).all(|i| (0..n).all(|j| c[i][j] == if i == j { d.form.entries()[i].clone() } else { r(0) }))
    }

    #[test]
    fn diagonalize_examples() {
        assert_eq!(diagonalize(&m(&[&[1, 0], &[0, 1]])).unwrap().form, diag(&[1, 1]));
        let h = m(&[&[0, 1], &[1, 0]]);
        let d = diagonalize(&h).unwrap();
        assert_eq!(d.form, diag(&[2, -2]));
        assert!(is_diag_of(&d, &h));
        assert!(equivalent_over_q(&d.form, &diag(&[1, -1])).unwrap());
        assert_eq!(diagonalize(&m(&[&[1, 1], &[1, 2]])).unwrap().form, diag(&[1, 1]));
        assert!(matches!(diagonalize(&m(&[&[1, 1], &[1, 1]])), Err(Error::Singular)));
        assert!(matches!(diagonalize(&m(&[&[1, 2], &[1, 1]])), Err(Error::NotSymmetric)));
    }

    #[test]
    fn invariant_examples() {
        let i = invariants(&diag(&[1, -1])).unwrap();
        assert_eq!(i.disc, Integer::from(-1));
        assert!(i.hasse.values().all(|s| s.is_plus()));
        let i = invariants(&diag(&[-1, -1])).unwrap();
        assert_eq!(i.hasse_at(PlaceQ::Real), Sign::Minus);
        assert_eq!(i.signature, (0, 2));
        let i = invariants(&diag(&[7])).unwrap();
        assert!(i.hasse.values().all(|s| s.is_plus()));
        assert!(DiagForm::new(vec![r(0)]).is_err());
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent_over_q(&diag(&[1, -1]), &diag(&[2, -2])).unwrap());
        assert!(!equivalent_over_q(&diag(&[1, 1]), &diag(&[1, -1])).unwrap());
        let f = DiagForm::new(vec![r(3), rat(-5, 7), r(11)]).unwrap();
        let g = DiagForm::new(vec![r(12), rat(-5 * 9, 7), rat(11, 4)]).unwrap();
        assert!(equivalent_over_q(&f, &g).unwrap());
        // same rank, disc, signature; Hasse differs at 3
        assert!(!equivalent_over_q(&diag(&[1, 1]), &diag(&[3, 3])).unwrap());
    }

    #[test]
    fn conic_examples() {
        let c = conic_solvable_q(&r(2), &r(3)).unwrap();
        assert!(!c.solvable);
        assert_eq!(c.obstructions, vec![PlaceQ::Prime(2), PlaceQ::Prime(3)]);
        let c = conic_solvable_q(&r(-1), &r(-1)).unwrap();
        assert_eq!(c.obstructions, vec![PlaceQ::Real, PlaceQ::Prime(2)]);
        let c = conic_solvable_q(&r(1), &r(13)).unwrap();
        assert!(c.solvable);
        assert_eq!(c.point, Some((r(1), r(0))));
    }

    #[test]
    fn point_search_examples() {
        assert_eq!(conic_point_search(&r(1), &r(1), 10), Some((r(1), r(0))));
        let (a, b) = conic_point_search(&r(5), &r(-1), 10_000).unwrap();
        assert_eq!(r(5) * &a * &a - &b * &b, r(1));
        assert_eq!(conic_point_search(&r(2), &r(3), 300), None);
        let (a, b) = conic_point_search(&rat(1, 3), &rat(2, 3), 100).unwrap();
        assert_eq!(rat(1, 3) * &a * &a + rat(2, 3) * &b * &b, r(1));
    }

    #[test]
    fn quaternion_examples() {
        assert!(!quaternion_splits_at(&r(-1), &r(-1), PlaceQ::Real).unwrap());
        assert!(quaternion_splits(&r(1), &r(-7)).unwrap());
        assert!(!quaternion_splits(&r(2), &r(3)).unwrap());
    }

    #[test]
    fn pfister_examples() {
        let c = pfister_hasse_identity(&r(-1), &r(-1), PlaceQ::Real).unwrap();
        assert_eq!((c.hasse, c.correction, c.hilbert), (Sign::Plus, Sign::Minus, Sign::Minus));
        let c = pfister_hasse_identity(&r(2), &r(3), PlaceQ::Prime(2)).unwrap();
        assert!(c.holds());
        assert_eq!(c.hilbert, Sign::Minus);
        let x = rat(3, 7);
        for v in support_places(&x, &(r(1) - &x)).unwrap() {
            let c = pfister_hasse_identity(&x, &(r(1) - &x), v).unwrap();
            assert!(c.holds());
            assert!(c.hilbert.is_plus());
        }
    }

    #[test]
    fn pfister_identity_on_small_entries() {
        for x in -50i64..=50 {
            for y in -50i64..=50 {
                if x == 0 || y == 0 {
                    continue;
                }
                for v in support_places(&r(x), &r(y)).unwrap() {
                    assert!(pfister_hasse_identity(&r(x), &r(y), v).unwrap().holds(), "{x} {y} {v}");
                }
            }
        }
    }

    #[test]
    fn diagonalization_is_a_congruence() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 300 {
            let n = rng.gen_range(1..=5);
            let mut g = vec![vec![r(0); n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = if rng.gen_bool(0.4) { r(0) } else { rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)) };
                    g[i][j] = v.clone();
                    g[j][i] = v;
                }
            }
            match diagonalize(&g) {
                Ok(d) => {
                    assert!(is_diag_of(&d, &g));
                    let inv = invariants(&d.form).unwrap();
                    assert!(inv.hasse_product().is_plus());
                    done += 1;
                }
                Err(Error::Singular) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn conic_agrees_with_search_and_congruences() {
        for x in -30i64..=30 {
            for y in -30i64..=30 {
                if x == 0 || y == 0 {
                    continue;
                }
                let c = conic_solvable_q(&r(x), &r(y)).unwrap();
                let bound = if c.solvable { 10_000 } else { 60 };
                let found = conic_point_search(&r(x), &r(y), bound);
                assert_eq!(found.is_some(), c.solvable, "({x}, {y})");
                for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29] {
                    if (x * y) % p as i64 == 0 && !conic_solvable_mod_prime_power(x, y, p, 4) {
                        assert!(!c.solvable, "({x}, {y}) mod {p}");
                    }
                }
                for v in support_places(&r(x), &r(y)).unwrap() {
                    assert_eq!(quaternion_splits_at(&r(x), &r(y), v).unwrap(), crate::localsym::conic_local(&r(x), &r(y), v).unwrap());
                }
            }
        }
    }

    #[test]
    fn never_exactly_one_failure() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10_000 {
            let x = rat(rng.gen_range(1..=100_000) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=1000));
            let y = rat(rng.gen_range(1..=100_000) * if rng.gen() { 1 } else { -1 }, rng.gen_range(1..=1000));
            let fails = support_places(&x, &y)
                .unwrap()
                .into_iter()
                .filter(|&v| !hilbert(&x, &y, v).unwrap().is_plus())
                .count();
            assert_ne!(fails, 1);
        }
    }
}
