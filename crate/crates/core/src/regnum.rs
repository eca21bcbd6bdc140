//! Numerics on the Riemann sphere: the Bloch-Wigner dilogarithm, the
//! closed 1-form `eta(f, g) = log|f| dArg g - log|g| dArg f`, its loop
//! integrals, and their comparison with tame symbols.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::arith::gauss::rat_to_f64;
use crate::arith::{bernoulli, Field, GaussRat, GaussianRationals, Poly, RatFunc, RatFuncField};
use crate::error::{Error, Result};

pub type Cx = Complex64;
pub type CxRatFunc = RatFunc<GaussRat>;

/// Stop doubling once successive trapezoid estimates agree to this.
pub const LOOP_TOLERANCE: f64 = 1e-9;
pub const MAX_SAMPLES: usize = 1 << 20;

/// `Q(i)(z)`.
pub fn cx_field() -> RatFuncField<GaussianRationals> {
    RatFuncField::new(GaussianRationals, "z")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochWigner {
    pub value: f64,
    /// `z` is 0 or 1, where `D` extends continuously by 0.
    pub at_limit: bool,
}

fn li2_series(z: Cx) -> Cx {
    let mut term = z;
    let mut sum = Cx::zero();
    for k in 1..200u32 {
        sum += term / (k * k) as f64;
        term *= z;
        if term.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// `Li_2(z) = sum B_n u^(n+1)/(n+1)!` with `u = -log(1 - z)`.
fn li2_bernoulli(z: Cx) -> Cx {
    let u = -(Cx::new(1.0, 0.0) - z).ln();
    // B_0 u + B_1 u^2/2
    let mut sum = u - u * u / 4.0;
    let mut pow = u;
    let mut fact = 1.0;
    for n in (2..=crate::arith::bernoulli::MAX_BERNOULLI_INDEX).step_by(2) {
        pow *= u * u;
        fact *= (n as f64) * (n as f64 + 1.0);
        let b = rat_to_f64(&bernoulli(n).expect("even index in range"));
        sum += pow * (b / fact);
    }
    sum
}

fn d_reduced(w: Cx) -> f64 {
    let li2 = if w.norm() <= 0.5 { li2_series(w) } else { li2_bernoulli(w) };
    (Cx::new(1.0, 0.0) - w).arg() * w.norm().ln() + li2.im
}

/// `D(z) = Arg(1 - z) log|z| + Im Li_2(z)`, after moving `z` into
/// `|z| <= 1, Re z <= 1/2` with `D(1/z) = -D(z)` and `D(1 - z) = -D(z)`.
pub fn bloch_wigner(z: Cx) -> Result<BlochWigner> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Invalid(format!("non-finite argument {z}")));
    }
    let one = Cx::new(1.0, 0.0);
    if z == Cx::zero() || z == one {
        return Ok(BlochWigner { value: 0.0, at_limit: true });
    }
    let mut sign = 1.0;
    let mut w = z;
    if w.norm() > 1.0 {
        w = one / w;
        sign = -sign;
    }
    if w.re > 0.5 {
        w = one - w;
        sign = -sign;
    }
    Ok(BlochWigner { value: sign * d_reduced(w), at_limit: false })
}

/// Roots of a polynomial with complex coefficients (low to high), by the
/// Aberth iteration.
pub fn poly_roots(coeffs: &[Cx]) -> Vec<Cx> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[n];
    let c: Vec<Cx> = coeffs.iter().map(|&a| a / lc).collect();
    let radius = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Cx> = (0..n)
        .map(|k| Cx::from_polar(radius * 0.5, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Cx| {
        let mut p = Cx::zero();
        let mut dp = Cx::zero();
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Cx = (0..n).filter(|&j| j != i).map(|j| Cx::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Cx::new(1.0, 0.0) - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

fn to_cx(p: &Poly<GaussRat>) -> Vec<Cx> {
    p.coeffs().iter().map(GaussRat::to_c64).collect()
}

fn horner(c: &[Cx], x: Cx) -> (Cx, Cx) {
    let mut p = Cx::zero();
    let mut dp = Cx::zero();
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Numeric value and logarithmic derivative of a rational function.
#[derive(Debug, Clone)]
pub struct NumericFunc {
    num: Vec<Cx>,
    den: Vec<Cx>,
}

impl NumericFunc {
    pub fn new(f: &CxRatFunc) -> Self {
        NumericFunc { num: to_cx(f.num()), den: to_cx(f.den()) }
    }

    /// `(log|f(z)|, f'(z)/f(z))`.
    pub fn log_and_dlog(&self, z: Cx) -> (f64, Cx) {
        let (n, dn) = horner(&self.num, z);
        let (d, dd) = horner(&self.den, z);
        ((n / d).norm().ln(), dn / n - dd / d)
    }

    /// Zeros and poles, numerically.
    pub fn singularities(&self) -> Vec<Cx> {
        let mut v = poly_roots(&self.num);
        v.extend(poly_roots(&self.den));
        v
    }
}

/// A positively (`orientation = 1`) or negatively oriented circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Loop {
    pub center: Cx,
    pub radius: f64,
    pub orientation: i8,
    /// Initial sample count; doubled until convergence.
    pub samples: usize,
}

impl Loop {
    pub fn circle(center: Cx, radius: f64) -> Self {
        Loop { center, radius, orientation: 1, samples: 64 }
    }

    fn point(&self, theta: f64) -> (Cx, Cx) {
        let o = self.orientation as f64;
        let e = Cx::from_polar(1.0, o * theta);
        (self.center + e * self.radius, Cx::new(0.0, o) * e * self.radius)
    }
}

/// `eta(f, g)` evaluated on the tangent vector `dz` at `z`.
pub fn eta(f: &NumericFunc, g: &NumericFunc, z: Cx, dz: Cx) -> f64 {
    let (lf, df) = f.log_and_dlog(z);
    let (lg, dg) = g.log_and_dlog(z);
    lf * (dg * dz).im - lg * (df * dz).im
}

/// Checks that every zero and pole of `f, g` lies within `radius / 2` of the
/// center or beyond `2 radius`, and that at most one point is enclosed.
pub fn validate_loop(f: &NumericFunc, g: &NumericFunc, l: &Loop) -> Result<()> {
    if !(l.radius > 0.0) || l.radius.is_infinite() || !(l.orientation == 1 || l.orientation == -1) {
        return Err(Error::BadLoop(format!("radius {} orientation {}", l.radius, l.orientation)));
    }
    let mut inside: Vec<Cx> = Vec::new();
    for s in f.singularities().into_iter().chain(g.singularities()) {
        let d = (s - l.center).norm();
        if d <= l.radius / 2.0 {
            if inside.iter().all(|t| (t - s).norm() > 1e-6 * (1.0 + s.norm())) {
                inside.push(s);
            }
        } else if d < 2.0 * l.radius {
            return Err(Error::BadLoop(format!("singularity {s} too close to the loop")));
        }
    }
    if inside.len() > 1 {
        return Err(Error::BadLoop("loop encloses more than one singular point".into()));
    }
    Ok(())
}

/// The integrand `eta(f, g)(d gamma/d theta)` at angle `theta`.
pub fn eta_pullback(f: &CxRatFunc, g: &CxRatFunc, l: &Loop, theta: f64) -> Result<f64> {
    let (nf, ng) = (NumericFunc::new(f), NumericFunc::new(g));
    validate_loop(&nf, &ng, l)?;
    let (z, dz) = l.point(theta);
    Ok(eta(&nf, &ng, z, dz))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopIntegral {
    pub value: f64,
    /// Difference of the last two estimates.
    pub tolerance: f64,
    pub samples: usize,
}

/// `(1/2 pi) \oint eta(f, g)` by the trapezoid rule, doubling the sample
/// count until two estimates agree to [`LOOP_TOLERANCE`].
pub fn loop_integral(f: &CxRatFunc, g: &CxRatFunc, l: &Loop) -> Result<LoopIntegral> {
    let (nf, ng) = (NumericFunc::new(f), NumericFunc::new(g));
    validate_loop(&nf, &ng, l)?;
    let at = |theta: f64| {
        let (z, dz) = l.point(theta);
        eta(&nf, &ng, z, dz)
    };
    let mut n = l.samples.max(4).next_power_of_two();
    let mut sum: f64 = (0..n).map(|k| at(2.0 * PI * k as f64 / n as f64)).sum();
    let mut estimate = sum / n as f64;
    while n < MAX_SAMPLES {
        // the new nodes are the midpoints of the old ones
        sum += (0..n).map(|k| at(2.0 * PI * (k as f64 + 0.5) / n as f64)).sum::<f64>();
        n *= 2;
        let next = sum / n as f64;
        let delta = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            return Err(Error::BadLoop("integrand is not finite".into()));
        }
        if delta < LOOP_TOLERANCE {
            return Ok(LoopIntegral { value: estimate, tolerance: delta, samples: n });
        }
    }
    Err(Error::NoConvergence(n))
}

/// Order of vanishing at `a` and the value of the unit part there.
pub fn order_and_unit(f: &CxRatFunc, a: &GaussRat) -> Result<(i64, GaussRat)> {
    let k = cx_field();
    if k.is_zero(f) {
        return Err(Error::ZeroInput("order of vanishing"));
    }
    let r = k.ring();
    let lin = r.from_coeffs(vec![GaussianRationals.neg(a), GaussianRationals.one()]);
    let (vn, n) = r.split_off(f.num(), &lin);
    let (vd, d) = r.split_off(f.den(), &lin);
    let u = GaussianRationals.div(&r.eval(&n, a), &r.eval(&d, a));
    Ok((vn as i64 - vd as i64, u))
}

/// Exact tame symbol `(-1)^(v(f)v(g)) f^v(g) g^-v(f)` at `z = a`.
pub fn tame_at(f: &CxRatFunc, g: &CxRatFunc, a: &GaussRat) -> Result<GaussRat> {
    let (va, uf) = order_and_unit(f, a)?;
    let (vb, ug) = order_and_unit(g, a)?;
    let q = GaussianRationals;
    let v = q.mul(&q.powi(&uf, vb), &q.powi(&ug, -va));
    Ok(if (va * vb) % 2 != 0 { q.neg(&v) } else { v })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueCheck {
    pub tame: GaussRat,
    /// `log |tame|`.
    pub expected: f64,
    pub integral: LoopIntegral,
    pub radius: f64,
}

impl ResidueCheck {
    pub fn difference(&self) -> f64 {
        (self.integral.value - self.expected).abs()
    }

    pub fn agrees(&self) -> bool {
        self.difference() < 1e-6
    }
}

/// Loop integral of `eta(f, g)` around `a` against `log |t_a(f, g)|`. The
/// radius is a quarter of the distance to the nearest other singularity.
pub fn residue_check(f: &CxRatFunc, g: &CxRatFunc, a: &GaussRat) -> Result<ResidueCheck> {
    let tame = tame_at(f, g, a)?;
    let center = a.to_c64();
    let (nf, ng) = (NumericFunc::new(f), NumericFunc::new(g));
    let nearest = nf
        .singularities()
        .into_iter()
        .chain(ng.singularities())
        .map(|s| (s - center).norm())
        .filter(|&d| d > 1e-6)
        .fold(f64::INFINITY, f64::min);
    let radius = if nearest.is_finite() { nearest / 4.0 } else { 1.0 };
    let integral = loop_integral(f, g, &Loop::circle(center, radius))?;
    let expected = 0.5 * rat_to_f64(&tame.norm()).ln();
    Ok(ResidueCheck { tame, expected, integral, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::integer::rat_int;
    use crate::oracles::catalan_series;
    use rand::{Rng, SeedableRng};

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::new(rat_int(re), rat_int(im))
    }

    /// `c * prod (z - a)^e`
    fn build(c: GaussRat, factors: &[(GaussRat, i64)]) -> CxRatFunc {
        let k = cx_field();
        let r = k.ring();
        let mut f = k.constant(c);
        for (a, e) in factors {
            let lin = k.from_poly(r.from_coeffs(vec![GaussianRationals.neg(a), GaussianRationals.one()]));
            f = k.mul(&f, &k.powi(&lin, *e));
        }
        f
    }

    fn z() -> CxRatFunc {
        cx_field().var_elem()
    }

    #[test]
    fn dilog_examples() {
        assert_eq!(bloch_wigner(Cx::new(0.5, 0.0)).unwrap().value.abs() < 1e-15, true);
        let catalan = catalan_series(2_000_000);
        assert!((bloch_wigner(Cx::new(0.0, 1.0)).unwrap().value - catalan).abs() < 1e-9);
        assert!((catalan - 0.915_965_594_2).abs() < 1e-9);
        let limit = bloch_wigner(Cx::new(1.0, 0.0)).unwrap();
        assert!(limit.at_limit && limit.value == 0.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let w = Cx::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a = bloch_wigner(w).unwrap().value;
            let b = bloch_wigner(w.conj()).unwrap().value;
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn dilog_branches_agree() {
        // both expansions on the overlap |w| <= 1/2
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let w = Cx::from_polar(rng.gen_range(0.05..0.5), rng.gen_range(-PI..PI));
            let (a, b) = (li2_series(w), li2_bernoulli(w));
            assert!((a - b).norm() < 1e-13, "{w}");
        }
        // five-term style symmetries of D
        for _ in 0..200 {
            let w = Cx::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let one = Cx::new(1.0, 0.0);
            let d = |x: Cx| bloch_wigner(x).unwrap().value;
            assert!((d(w) - d(one - one / w)).abs() < 1e-12);
            assert!((d(w) - d(one / (one - w))).abs() < 1e-12);
            assert!((d(w) + d(w / (w - one))).abs() < 1e-12);
        }
    }

    #[test]
    fn pullback_examples() {
        let k = cx_field();
        let two_z = k.mul(&k.from_i64(2), &z());
        let l = Loop::circle(Cx::zero(), 0.3);
        for theta in [0.0, 1.0, 2.5] {
            assert!((eta_pullback(&z(), &two_z, &l, theta).unwrap() + 2f64.ln()).abs() < 1e-12);
            assert_eq!(eta_pullback(&two_z, &two_z, &l, theta).unwrap(), 0.0);
        }
        let bad = Loop::circle(Cx::new(0.3, 0.0), 0.3);
        assert!(eta_pullback(&z(), &two_z, &bad, 0.0).is_err());
    }

    #[test]
    fn loop_integral_examples() {
        let k = cx_field();
        let two_z = k.mul(&k.from_i64(2), &z());
        let one_minus = k.sub(&k.one(), &z());
        let l1 = Loop::circle(Cx::zero(), 0.1);
        let l2 = Loop::circle(Cx::zero(), 0.2);
        let v = loop_integral(&z(), &two_z, &l1).unwrap();
        assert!((v.value + 2f64.ln()).abs() < 1e-9);
        assert!(loop_integral(&z(), &one_minus, &l1).unwrap().value.abs() < 1e-9);
        let f = build(g(1, 1), &[(g(0, 0), 1), (g(2, 0), -1)]);
        let h = build(g(3, 0), &[(g(0, 0), 2), (g(0, 2), 1)]);
        let a = loop_integral(&f, &h, &l1).unwrap().value;
        let b = loop_integral(&f, &h, &l2).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn residue_examples() {
        let k = cx_field();
        let two_z = k.mul(&k.from_i64(2), &z());
        let r = residue_check(&z(), &two_z, &g(0, 0)).unwrap();
        assert_eq!(r.tame, GaussRat::real(crate::arith::integer::rat(-1, 2)));
        assert!(r.agrees());
        let r = residue_check(&z(), &k.sub(&k.one(), &z()), &g(0, 0)).unwrap();
        assert_eq!(r.tame, g(1, 0));
        assert!(r.agrees());
        let zm1 = k.sub(&z(), &k.one());
        let r = residue_check(&zm1, &zm1, &g(1, 0)).unwrap();
        assert_eq!(r.tame, g(-1, 0));
        assert!(r.agrees());
    }

    fn random_points(rng: &mut impl Rng, n: usize) -> Vec<GaussRat> {
        let mut pts: Vec<GaussRat> = Vec::new();
        while pts.len() < n {
            let p = g(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        pts
    }

    #[test]
    fn residue_identity_on_random_pairs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let pts = random_points(&mut rng, 6);
            let e = |rng: &mut rand_chacha::ChaCha8Rng| if rng.gen() { 1 } else { -1 };
            let f = build(g(rng.gen_range(1..4), rng.gen_range(-3..4)), &[(pts[0].clone(), e(&mut rng)), (pts[1].clone(), e(&mut rng)), (pts[2].clone(), e(&mut rng))]);
            let h = build(g(rng.gen_range(1..4), 0), &[(pts[0].clone(), e(&mut rng)), (pts[3].clone(), e(&mut rng)), (pts[4].clone(), e(&mut rng))]);
            for a in &pts[..5] {
                let r = residue_check(&f, &h, a).unwrap();
                assert!(r.agrees(), "{a:?}: {} vs {}", r.integral.value, r.expected);
                let anti = loop_integral(&h, &f, &Loop::circle(a.to_c64(), r.radius)).unwrap();
                assert!((anti.value + r.integral.value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn steinberg_and_bilinearity_of_loop_integrals() {
        let k = cx_field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        let mut done = 0;
        while done < 10 {
            let pts = random_points(&mut rng, 4);
            let deg = rng.gen_range(1..=3);
            let f = build(g(rng.gen_range(1..3), rng.gen_range(0..2)), &pts[..deg].iter().map(|p| (p.clone(), if rng.gen() { 1 } else { -1 })).collect::<Vec<_>>());
            let one_minus = k.sub(&k.one(), &f);
            if k.is_zero(&one_minus) {
                continue;
            }
            let (nf, ng) = (NumericFunc::new(&f), NumericFunc::new(&one_minus));
            let sing: Vec<Cx> = nf.singularities().into_iter().chain(ng.singularities()).collect();
            let mut ok = true;
            for &s in &sing {
                let nearest = sing.iter().map(|t| (t - s).norm()).filter(|&d| d > 1e-6).fold(f64::INFINITY, f64::min);
                let radius = if nearest.is_finite() { nearest / 4.0 } else { 0.5 };
                if nearest < 1e-3 {
                    ok = false;
                    break;
                }
                let v = loop_integral(&f, &one_minus, &Loop::circle(s, radius)).unwrap();
                assert!(v.value.abs() < 1e-8, "{}", v.value);
            }
            if ok {
                done += 1;
            }
        }
        let f1 = build(g(2, 0), &[(g(0, 0), 1), (g(1, 1), -1)]);
        let f2 = build(g(1, 1), &[(g(0, 0), 2), (g(-2, 0), 1)]);
        let h = build(g(3, 0), &[(g(0, 0), -1), (g(0, -2), 1)]);
        let l = Loop::circle(Cx::zero(), 0.3);
        let lhs = loop_integral(&k.mul(&f1, &f2), &h, &l).unwrap().value;
        let rhs = loop_integral(&f1, &h, &l).unwrap().value + loop_integral(&f2, &h, &l).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-8);
    }

    #[test]
    fn eta_is_closed() {
        let f = NumericFunc::new(&build(g(2, 1), &[(g(0, 0), 1), (g(1, 1), -2)]));
        let h = NumericFunc::new(&build(g(1, 0), &[(g(-1, 0), 1), (g(0, 2), 1)]));
        // Gauss-Legendre on each edge of small squares away from the singular points
        let nodes = [(-0.906_179_845_938_664, 0.236_926_885_056_189), (-0.538_469_310_105_683, 0.478_628_670_499_366), (0.0, 0.568_888_888_888_889), (0.538_469_310_105_683, 0.478_628_670_499_366), (0.906_179_845_938_664, 0.236_926_885_056_189)];
        for corner in [Cx::new(2.0, -1.0), Cx::new(-0.6, 0.6), Cx::new(0.4, -0.3)] {
            let side = 0.05;
            let verts = [corner, corner + side, corner + Cx::new(side, side), corner + Cx::new(0.0, side)];
            let mut total = 0.0;
            for i in 0..4 {
                let (a, b) = (verts[i], verts[(i + 1) % 4]);
                let dz = (b - a) / 2.0;
                for (x, w) in nodes {
                    total += w * eta(&f, &h, (a + b) / 2.0 + dz * x, dz);
                }
            }
            assert!(total.abs() < 1e-9, "{total}");
        }
    }

    #[test]
    fn roots_of_known_polynomials() {
        let c = [Cx::new(-6.0, 0.0), Cx::new(11.0, 0.0), Cx::new(-6.0, 0.0), Cx::new(1.0, 0.0)];
        let mut r: Vec<f64> = poly_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-12);
        }
    }
}
