//! Argument definitions and one handler per subcommand.

use clap::{Args, Parser, Subcommand};
use ksymbol::arith::integer::Rational;
use ksymbol::arith::{Field, Sign};
use ksymbol::charpforms::{Form1, Form2, FormField};
use ksymbol::funcfield::{
    counting_bound, k2_fq_reduce, steinberg_witness, FfSymbolExpr, FqPoly, FunctionField, K2FFClass, PlaceFq, Witness,
};
use ksymbol::k2q::{
    hilbert_reciprocity, lambda_tate, lift, moore_lift, moore_map, moore_sum, quadratic_reciprocity, K2QClass,
    MooreVector, QSymbolExpr,
};
use ksymbol::localsym::{h_p, hilbert, norm_residue, support_places, tame, MuValue, PlaceQ};
use ksymbol::quadforms::{
    congruent, conic_solvable_q, diagonalize, equivalent_over_q, invariants, pfister_hasse_identity,
    quaternion_splits, quaternion_splits_at, DiagForm, FormInvariants,
};
use ksymbol::regnum::{bloch_wigner, residue_check, Cx};
use ksymbol::zeta::{birch_tate_q, count_points, l_polynomial, tate_identity, CurveFq, MAX_COUNT_FIELD};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::input::{self, InputError};
use crate::report::{Failure, Outcome};

#[derive(Debug, Parser)]
#[command(name = "ksymbol", version, about = "Symbols on K2 of number fields and function fields, with JSON certificates")]
pub struct Cli {
    /// Size of the finite field (a prime power; a prime for form commands).
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// A place: inf (or ∞), a prime, or a monic irreducible polynomial in T.
    #[arg(long, global = true)]
    pub place: Option<String>,
    /// Emit JSON (the only output format).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Pair {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Args)]
pub struct Terms {
    /// Symbol entries `x1 y1 x2 y2 ...`.
    #[arg(num_args = 0..)]
    pub terms: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// `line`, or `a,b` for `y^2 = x^3 + a x + b`.
    #[arg(long, default_value = "line")]
    pub curve: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert symbol (x, y)_v.
    Hilbert(Pair),
    /// Tame symbol at an odd prime, as a unit of F_p.
    Tame(Pair),
    /// Local-global decision for x R^2 + y S^2 = 1.
    Conic(Pair),
    /// Image of a symbol expression in {±1} (+) (+)_p F_p^x.
    Decompose(Terms),
    /// Symbol expression with prescribed local components `p:a`.
    Lift {
        #[arg(num_args = 0..)]
        entries: Vec<String>,
        /// Component at 2 (1 or -1).
        #[arg(long, default_value = "1")]
        two: String,
    },
    /// Hilbert product formula for one pair.
    Reciprocity(Pair),
    /// Quadratic reciprocity for two odd primes.
    Quadrec {
        #[arg(value_name = "P")]
        first: String,
        #[arg(value_name = "Q")]
        second: String,
    },
    /// Moore map of symbols, or a preimage of a vector given with --vector.
    Moore {
        /// Symbol entries `x1 y1 x2 y2 ...`.
        #[arg(num_args = 0..)]
        terms: Vec<String>,
        /// Entries `place:value`.
        #[arg(long, num_args = 1..)]
        vector: Option<Vec<String>>,
    },
    /// Weil reciprocity for f, g in F_q(T).
    Weil(Pair),
    /// Tame symbols of a symbol expression over F_q(T).
    Ffdecompose(Terms),
    /// Symbol expression over F_q(T) with prescribed residues `poly:value`.
    Fflift {
        #[arg(num_args = 0..)]
        entries: Vec<String>,
    },
    /// Vanishing of K_2(F_q): witness, counting bound, reduction of {zeta^m, zeta^n}.
    Steinberg {
        m: Option<String>,
        n: Option<String>,
    },
    /// Diagonalization and invariants of quadratic forms; two forms are compared.
    Qform {
        /// Gram matrices `a,b;c,d`, or diagonal entries `a,b,c` with --diag.
        #[arg(num_args = 1..=2)]
        forms: Vec<String>,
        #[arg(long)]
        diag: bool,
    },
    /// Splitting of the quaternion algebra (a, b).
    Quaternion(Pair),
    /// Hasse invariant of <1, -x, -y, xy> against (x, y).
    Pfister(Pair),
    /// Exterior derivative over F_p(s, t); with two arguments, dlog f ^ dlog g.
    Dform {
        f: String,
        g: Option<String>,
    },
    /// Cartier operator on h ds^dt, or on a closed 1-form given by --ds/--dt.
    Cartier {
        h: Option<String>,
        #[arg(long)]
        ds: Option<String>,
        #[arg(long)]
        dt: Option<String>,
    },
    /// Membership in nu(n): fixed points of the Cartier operator.
    Numember {
        #[arg(long, default_value_t = 2)]
        degree: u8,
        #[arg(num_args = 1..=2)]
        values: Vec<String>,
    },
    /// Point counts, L-polynomial and zeta(-1) of a curve over F_q.
    Zeta(CurveArgs),
    /// The special-value identity for a curve over F_q.
    Tateid(CurveArgs),
    /// w_2(Q) |zeta_Q(-1)| against the order of the kernel.
    Birchtate,
    /// Bloch-Wigner dilogarithm at a Gaussian rational.
    Dilog {
        z: String,
    },
    /// Loop integral of eta(f, g) against log |tame symbol| at a point.
    Residue {
        f: String,
        g: String,
        #[arg(long)]
        point: String,
    },
    /// Invariant suites of every module.
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hilbert(_) => "hilbert",
            Command::Tame(_) => "tame",
            Command::Conic(_) => "conic",
            Command::Decompose(_) => "decompose",
            Command::Lift { .. } => "lift",
            Command::Reciprocity(_) => "reciprocity",
            Command::Quadrec { .. } => "quadrec",
            Command::Moore { .. } => "moore",
            Command::Weil(_) => "weil",
            Command::Ffdecompose(_) => "ffdecompose",
            Command::Fflift { .. } => "fflift",
            Command::Steinberg { .. } => "steinberg",
            Command::Qform { .. } => "qform",
            Command::Quaternion(_) => "quaternion",
            Command::Pfister(_) => "pfister",
            Command::Dform { .. } => "dform",
            Command::Cartier { .. } => "cartier",
            Command::Numember { .. } => "numember",
            Command::Zeta(_) => "zeta",
            Command::Tateid(_) => "tateid",
            Command::Birchtate => "birchtate",
            Command::Dilog { .. } => "dilog",
            Command::Residue { .. } => "residue",
            Command::Selftest => "selftest",
        }
    }
}

type Run = Result<Outcome, Failure>;

fn invalid(m: impl Into<String>) -> Failure {
    Failure::Input(InputError::Invalid(m.into()))
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn sign(s: Sign) -> Value {
    json!(s.to_i64())
}

fn place(v: PlaceQ) -> Value {
    Value::String(v.to_string())
}

fn mu(z: MuValue) -> Value {
    match z {
        MuValue::Sign(s) => sign(s),
        MuValue::Unit { value, .. } => json!(value),
    }
}

fn place_table(x: &Rational, y: &Rational) -> Result<Vec<Value>, Failure> {
    support_places(x, y)?
        .into_iter()
        .map(|v| Ok(json!({"place": place(v), "value": sign(hilbert(x, y, v)?)})))
        .collect()
}

fn require_q(q: Option<u64>) -> Result<u64, Failure> {
    q.ok_or_else(|| invalid("--q is required for this command"))
}

fn pairs<'a>(terms: &'a [String]) -> Result<Vec<(&'a str, &'a str)>, Failure> {
    if terms.is_empty() || terms.len() % 2 != 0 {
        return Err(invalid(format!("expected symbol entries in pairs, got {} values", terms.len())));
    }
    Ok(terms.chunks(2).map(|c| (c[0].as_str(), c[1].as_str())).collect())
}

fn q_expr(terms: &[String]) -> Result<QSymbolExpr, Failure> {
    let mut e = QSymbolExpr::new();
    for (x, y) in pairs(terms)? {
        e.push(input::nonzero_rational(x)?, input::nonzero_rational(y)?, 1);
    }
    Ok(e)
}

fn q_expr_json(e: &QSymbolExpr) -> Value {
    Value::Array(e.terms().iter().map(|t| json!([rat(&t.x), rat(&t.y), t.multiplicity])).collect())
}

fn class_json(c: &K2QClass) -> Value {
    let odd: Vec<Value> = c.odd_part().iter().map(|(p, v)| json!([p, v])).collect();
    json!({"two": sign(c.two_slot()), "odd": odd})
}

fn ff_expr_json(k: &FunctionField, e: &FfSymbolExpr) -> Value {
    Value::Array(e.terms().iter().map(|t| json!([k.fmt(&t.x), k.fmt(&t.y), t.multiplicity])).collect())
}

fn ff_class_json(k: &FunctionField, c: &K2FFClass) -> Value {
    Value::Array(c.entries().iter().map(|(p, v)| json!({"place": k.fmt_poly(p), "value": k.fmt_poly(v)})).collect())
}

pub fn run(cli: &Cli) -> (Value, Run) {
    let c = &cli.command;
    let (q, place_arg) = (cli.q, cli.place.as_deref());
    let mut inputs = serde_json::Map::new();
    if let Some(q) = q {
        inputs.insert("q".into(), json!(q));
    }
    if let Some(p) = place_arg {
        inputs.insert("place".into(), json!(input::normalize_place(p)));
    }
    let outcome = match c {
        Command::Hilbert(p) => cmd_hilbert(p, place_arg, &mut inputs),
        Command::Tame(p) => cmd_tame(p, place_arg, &mut inputs),
        Command::Conic(p) => cmd_conic(p, &mut inputs),
        Command::Decompose(t) => cmd_decompose(&t.terms, &mut inputs),
        Command::Lift { entries, two } => cmd_lift(entries, two, &mut inputs),
        Command::Reciprocity(p) => cmd_reciprocity(p, &mut inputs),
        Command::Quadrec { first, second } => cmd_quadrec(first, second, &mut inputs),
        Command::Moore { terms, vector } => cmd_moore(terms, vector.as_deref(), &mut inputs),
        Command::Weil(p) => cmd_weil(p, q, &mut inputs),
        Command::Ffdecompose(t) => cmd_ffdecompose(&t.terms, q, place_arg, &mut inputs),
        Command::Fflift { entries } => cmd_fflift(entries, q, &mut inputs),
        Command::Steinberg { m, n } => cmd_steinberg(m.as_deref(), n.as_deref(), q, &mut inputs),
        Command::Qform { forms, diag } => cmd_qform(forms, *diag, &mut inputs),
        Command::Quaternion(p) => cmd_quaternion(p, place_arg, &mut inputs),
        Command::Pfister(p) => cmd_pfister(p, place_arg, &mut inputs),
        Command::Dform { f, g } => cmd_dform(f, g.as_deref(), q, &mut inputs),
        Command::Cartier { h, ds, dt } => cmd_cartier(h.as_deref(), ds.as_deref(), dt.as_deref(), q, &mut inputs),
        Command::Numember { degree, values } => cmd_numember(*degree, values, q, &mut inputs),
        Command::Zeta(a) => cmd_zeta(&a.curve, q, &mut inputs),
        Command::Tateid(a) => cmd_tateid(&a.curve, q, &mut inputs),
        Command::Birchtate => cmd_birchtate(),
        Command::Dilog { z } => cmd_dilog(z, &mut inputs),
        Command::Residue { f, g, point } => cmd_residue(f, g, point, &mut inputs),
        Command::Selftest => cmd_selftest(),
    };
    (Value::Object(inputs), outcome)
}

type Inputs = serde_json::Map<String, Value>;

fn read_pair(p: &Pair, inputs: &mut Inputs) -> Result<(Rational, Rational), Failure> {
    let x = input::nonzero_rational(&p.x)?;
    let y = input::nonzero_rational(&p.y)?;
    inputs.insert("x".into(), rat(&x));
    inputs.insert("y".into(), rat(&y));
    Ok((x, y))
}

fn cmd_hilbert(p: &Pair, place_arg: Option<&str>, inputs: &mut Inputs) -> Run {
    let (x, y) = read_pair(p, inputs)?;
    let table = place_table(&x, &y)?;
    let result = match place_arg {
        Some(s) => sign(hilbert(&x, &y, input::place_q(s)?)?),
        None => Value::Object(
            support_places(&x, &y)?
                .into_iter()
                .map(|v| Ok((v.to_string(), sign(hilbert(&x, &y, v)?))))
                .collect::<Result<_, Failure>>()?,
        ),
    };
    Ok(Outcome::new(result).certificate("local_symbols", json!({"factors": table})))
}

fn cmd_tame(p: &Pair, place_arg: Option<&str>, inputs: &mut Inputs) -> Run {
    let (x, y) = read_pair(p, inputs)?;
    let primes: Vec<u64> = match place_arg {
        Some(s) => match input::place_q(s)? {
            PlaceQ::Prime(p) if p != 2 => vec![p],
            v => return Err(invalid(format!("the tame symbol needs an odd prime place, got {v}"))),
        },
        None => support_places(&x, &y)?
            .into_iter()
            .filter_map(|v| match v {
                PlaceQ::Prime(p) if p != 2 => Some(p),
                _ => None,
            })
            .collect(),
    };
    let mut out = Outcome::new(Value::Null);
    let mut values = serde_json::Map::new();
    for &p in &primes {
        let t = tame(&x, &y, p)?;
        let h = h_p(&x, &y, p)?;
        let n = norm_residue(&x, &y, PlaceQ::Prime(p))?;
        values.insert(p.to_string(), json!(t));
        out = out
            .certificate("tame", json!({"place": p, "value": t, "norm_residue": mu(n), "hilbert": sign(h)}))
            .require(mu(n) == json!(t), format!("norm residue symbol disagrees with the tame symbol at {p}"));
    }
    out.result = match place_arg {
        Some(_) => json!(tame(&x, &y, primes[0])?),
        None => Value::Object(values),
    };
    Ok(out)
}

fn cmd_conic(p: &Pair, inputs: &mut Inputs) -> Run {
    let (x, y) = read_pair(p, inputs)?;
    let c = conic_solvable_q(&x, &y)?;
    let point = c.point.as_ref().map(|(r, s)| json!([rat(r), rat(s)]));
    let obstructions: Vec<Value> = c.obstructions.iter().map(|&v| place(v)).collect();
    let mut out = Outcome::new(json!({"solvable": c.solvable, "point": point, "obstructions": obstructions}))
        .certificate(
            "local_symbols",
            json!({"factors": c.places.iter().map(|&(v, s)| json!({"place": place(v), "value": sign(s)})).collect::<Vec<_>>()}),
        );
    if let Some((r, s)) = &c.point {
        let value = &x * r * r + &y * s * s;
        out = out
            .certificate("point", json!({"x_r2_plus_y_s2": rat(&value)}))
            .require(value.is_one(), "the certified point is not on the conic");
    }
    Ok(out)
}

fn cmd_decompose(terms: &[String], inputs: &mut Inputs) -> Run {
    let e = q_expr(terms)?;
    inputs.insert("symbols".into(), q_expr_json(&e));
    let c = lambda_tate(&e)?;
    let mut out = Outcome::new(class_json(&c));
    for t in e.terms() {
        let r = hilbert_reciprocity(&t.x, &t.y)?;
        out = out.require(r.holds(), format!("product formula fails for ({}, {})", t.x, t.y));
    }
    let v = moore_map(&e)?;
    let vector: Vec<Value> = v.entries().iter().map(|(&p, &z)| json!({"place": place(p), "value": mu(z)})).collect();
    Ok(out.certificate("moore_image", json!({"vector": vector, "sum": sign(moore_sum(&v))})))
}

fn parse_class(entries: &[String], two: &str) -> Result<K2QClass, Failure> {
    let two = match input::signed(two, "--two")? {
        1 => Sign::Plus,
        -1 => Sign::Minus,
        v => return Err(invalid(format!("--two must be 1 or -1, got {v}"))),
    };
    let mut odd = Vec::new();
    for e in entries {
        let (p, a) = input::key_value(e, "a lift entry")?;
        let p = input::unsigned(p, "prime")?;
        let a = input::signed(a, "residue")?;
        if p == 0 {
            return Err(invalid("prime must be positive"));
        }
        odd.push((p, a.rem_euclid(p as i64) as u64));
    }
    Ok(K2QClass::new(two, odd)?)
}

fn cmd_lift(entries: &[String], two: &str, inputs: &mut Inputs) -> Run {
    let target = parse_class(entries, two)?;
    inputs.insert("target".into(), class_json(&target));
    let e = lift(&target)?;
    let back = lambda_tate(&e)?;
    Ok(Outcome::new(json!({"symbols": q_expr_json(&e), "representative": "least positive residue; one section of lambda among many"}))
        .certificate("round_trip", json!({"decomposition": class_json(&back)}))
        .require(back == target, "the lift does not decompose to the target"))
}

fn cmd_reciprocity(p: &Pair, inputs: &mut Inputs) -> Run {
    let (x, y) = read_pair(p, inputs)?;
    let r = hilbert_reciprocity(&x, &y)?;
    let factors: Vec<Value> = r.factors.iter().map(|&(v, s)| json!({"place": place(v), "value": sign(s)})).collect();
    Ok(Outcome::new(json!({"product": sign(r.product)}))
        .certificate("hilbert_product", json!({"factors": factors}))
        .require(r.holds(), "the product of local symbols is -1"))
}

fn cmd_quadrec(p: &str, q: &str, inputs: &mut Inputs) -> Run {
    let (p, q) = (input::unsigned(p, "p")?, input::unsigned(q, "q")?);
    inputs.insert("p".into(), json!(p));
    inputs.insert("q".into(), json!(q));
    let r = quadratic_reciprocity(p, q)?;
    let factors: Vec<Value> =
        r.reciprocity.factors.iter().map(|&(v, s)| json!({"place": place(v), "value": sign(s)})).collect();
    Ok(Outcome::new(json!({
        "legendre_p_q": r.legendre_p_q,
        "legendre_q_p": r.legendre_q_p,
        "exponent": r.exponent,
        "consistent": r.consistent,
    }))
    .certificate("hilbert_product", json!({"factors": factors, "product": sign(r.reciprocity.product)}))
    .require(r.consistent, "Legendre symbols disagree with the local symbols"))
}

fn parse_vector(entries: &[String]) -> Result<MooreVector, Failure> {
    let mut out = Vec::new();
    for e in entries {
        let (v, z) = input::key_value(e, "a vector entry")?;
        let v = input::place_q(v)?;
        let z = input::signed(z, "value")?;
        let value = match v {
            PlaceQ::Real | PlaceQ::Prime(2) => {
                MuValue::Sign(Sign::from_i64(z).ok_or_else(|| invalid(format!("{z} is not a sign at {v}")))?)
            }
            PlaceQ::Prime(p) => MuValue::Unit { p, value: z.rem_euclid(p as i64) as u64 },
        };
        out.push((v, value));
    }
    Ok(MooreVector::from_entries(out)?)
}

fn vector_json(v: &MooreVector) -> Value {
    Value::Array(v.entries().iter().map(|(&p, &z)| json!({"place": place(p), "value": mu(z)})).collect())
}

fn cmd_moore(terms: &[String], vector: Option<&[String]>, inputs: &mut Inputs) -> Run {
    if let Some(entries) = vector {
        if !terms.is_empty() {
            return Err(invalid("give either symbol entries or --vector, not both"));
        }
        let target = parse_vector(entries)?;
        inputs.insert("vector".into(), vector_json(&target));
        let s = moore_sum(&target);
        if !s.is_plus() {
            return Ok(Outcome::new(json!({"in_kernel": false, "sum": sign(s), "symbols": Value::Null})));
        }
        let cert = moore_lift(&target)?;
        let per_place: Vec<Value> = cert
            .per_place
            .iter()
            .map(|&(v, a, b)| json!({"place": place(v), "requested": mu(a), "obtained": mu(b)}))
            .collect();
        return Ok(Outcome::new(json!({"in_kernel": true, "sum": 1, "symbols": q_expr_json(&cert.expr)}))
            .certificate("per_place", json!({"entries": per_place}))
            .require(cert.image == target, "the preimage does not map to the target"));
    }
    let e = q_expr(terms)?;
    inputs.insert("symbols".into(), q_expr_json(&e));
    let v = moore_map(&e)?;
    let s = moore_sum(&v);
    Ok(Outcome::new(json!({"vector": vector_json(&v), "sum": sign(s)}))
        .require(s.is_plus(), "the image of a symbol leaves the kernel of the sum map"))
}

fn function_field(q: Option<u64>, inputs: &mut Inputs) -> Result<FunctionField, Failure> {
    let k = FunctionField::new(require_q(q)?)?;
    if k.fq().degree() > 1 {
        inputs.insert("modulus".into(), json!(k.fq().modulus()));
    }
    Ok(k)
}

fn cmd_weil(p: &Pair, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let k = function_field(q, inputs)?;
    let f = input::nonzero_fq_func(&k, &p.x)?;
    let g = input::nonzero_fq_func(&k, &p.y)?;
    inputs.insert("f".into(), json!(k.fmt(&f)));
    inputs.insert("g".into(), json!(k.fmt(&g)));
    let r = k.weil_check(&f, &g)?;
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|(v, s, n)| {
            json!({"place": k.fmt_place(v), "degree": v.degree(), "tame": k.fmt_poly(s), "norm": k.fq().fmt_elem(n)})
        })
        .collect();
    Ok(Outcome::new(json!({"product": k.fq().fmt_elem(&r.product)}))
        .certificate("weil_product", json!({"factors": factors}))
        .require(r.holds(), "the product of norms of tame symbols is not 1"))
}

fn ff_expr(k: &FunctionField, terms: &[String]) -> Result<FfSymbolExpr, Failure> {
    let mut e = FfSymbolExpr::new();
    for (x, y) in pairs(terms)? {
        e.push(input::nonzero_fq_func(k, x)?, input::nonzero_fq_func(k, y)?, 1);
    }
    Ok(e)
}

/// Product of the tame symbols of the terms at one place, in its residue field.
fn tame_of_expr(k: &FunctionField, e: &FfSymbolExpr, v: &PlaceFq) -> Result<FqPoly, Failure> {
    let r = k.ring();
    let modulus = match v {
        PlaceFq::Finite(pi) => pi.clone(),
        PlaceFq::Infinity => r.x(),
    };
    let mut acc = r.one();
    for t in e.terms() {
        let s = k.tame(&t.x, &t.y, v)?;
        let s = if t.multiplicity < 0 { r.inv_mod(&s, &modulus).expect("tame symbols are units") } else { s };
        acc = r.mul_mod(&acc, &r.pow_mod(&s, t.multiplicity.unsigned_abs() as u128, &modulus), &modulus);
    }
    Ok(acc)
}

fn cmd_ffdecompose(terms: &[String], q: Option<u64>, place_arg: Option<&str>, inputs: &mut Inputs) -> Run {
    let k = function_field(q, inputs)?;
    let e = ff_expr(&k, terms)?;
    inputs.insert("symbols".into(), ff_expr_json(&k, &e));
    let c = k.decompose(&e)?;
    let mut result = json!({"class": ff_class_json(&k, &c)});
    if let Some(s) = place_arg {
        let v = input::place_fq(&k, s)?;
        result["at_place"] = json!(k.fmt_poly(&tame_of_expr(&k, &e, &v)?));
    }
    let mut out = Outcome::new(result);
    for t in e.terms() {
        let r = k.weil_check(&t.x, &t.y)?;
        out = out.require(r.holds(), format!("Weil reciprocity fails for ({}, {})", k.fmt(&t.x), k.fmt(&t.y)));
    }
    let ret = k.retraction(&e)?;
    let constants: Vec<Value> =
        ret.constants.iter().map(|&(a, b, m)| json!([k.fq().fmt_elem(&a), k.fq().fmt_elem(&b), m])).collect();
    Ok(out.certificate("constant_part", json!({"leading_coefficients": constants, "vanishes_in_k2_fq": true})))
}

fn cmd_fflift(entries: &[String], q: Option<u64>, inputs: &mut Inputs) -> Run {
    let k = function_field(q, inputs)?;
    let mut pairs = Vec::new();
    for e in entries {
        let (p, a) = input::key_value(e, "an fflift entry")?;
        pairs.push((input::fq_poly(&k, p)?, input::fq_poly(&k, a)?));
    }
    let target = k.class(pairs)?;
    inputs.insert("target".into(), ff_class_json(&k, &target));
    let e = k.lift(&target)?;
    let back = k.decompose(&e)?;
    Ok(Outcome::new(json!({"symbols": ff_expr_json(&k, &e), "representative": "residue of degree below deg pi; one section among many"}))
        .certificate("round_trip", json!({"decomposition": ff_class_json(&k, &back)}))
        .require(back == target, "the lift does not decompose to the target"))
}

fn cmd_steinberg(m: Option<&str>, n: Option<&str>, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let q = require_q(q)?;
    let fq = ksymbol::arith::FqField::new(q)?;
    let zeta = fq.generator();
    let witness = match steinberg_witness(q, zeta)? {
        Witness::Pair(x, y) => json!({"x": fq.fmt_elem(&x), "y": fq.fmt_elem(&y)}),
        Witness::Char2 => json!("characteristic 2"),
    };
    let mut result = json!({"zeta": fq.fmt_elem(&zeta), "witness": witness});
    let mut out = Outcome::new(Value::Null);
    if fq.p() != 2 {
        let (a, b) = counting_bound(q, zeta)?;
        result["counting_bound"] = json!([a, b]);
        out = out.require(a + b > q as usize, "the two value sets are too small to meet");
    }
    match (m, n) {
        (Some(m), Some(n)) => {
            let (m, n) = (input::signed(m, "m")?, input::signed(n, "n")?);
            inputs.insert("m".into(), json!(m));
            inputs.insert("n".into(), json!(n));
            let t = k2_fq_reduce(m, n, q)?;
            out = out.certificate("reduction", json!({"steps": t.steps}));
            result["symbol_vanishes"] = json!(true);
        }
        (None, None) => {}
        _ => return Err(invalid("give both exponents m and n, or neither")),
    }
    out.result = result;
    Ok(out)
}

fn invariants_json(i: &FormInvariants) -> Value {
    let hasse: serde_json::Map<String, Value> = i.hasse.iter().map(|(v, s)| (v.to_string(), sign(*s))).collect();
    json!({
        "rank": i.rank,
        "discriminant": i.disc.to_string(),
        "signature": [i.signature.0, i.signature.1],
        "hasse": hasse,
        "hasse_convention": HASSE_CONVENTION,
    })
}

const HASSE_CONVENTION: &str = "product over i < j of (a_i, a_j)_v";

fn cmd_qform(forms: &[String], diag: bool, inputs: &mut Inputs) -> Run {
    let mut out = Outcome::new(Value::Null);
    let mut diagonals = Vec::new();
    let mut results = Vec::new();
    let mut echoed = Vec::new();
    for src in forms {
        let d = if diag {
            let entries = src.split(',').map(input::rational).collect::<Result<Vec<_>, _>>()?;
            echoed.push(json!(entries.iter().map(rat).collect::<Vec<_>>()));
            DiagForm::new(entries)?
        } else {
            let g = input::matrix(src)?;
            echoed.push(json!(g.iter().map(|row| row.iter().map(rat).collect::<Vec<_>>()).collect::<Vec<_>>()));
            let d = diagonalize(&g)?;
            let c = congruent(&g, &d.basis);
            let n = g.len();
            let ok = (0..n).all(|i| {
                (0..n).all(|j| if i == j { c[i][j] == d.form.entries()[i] } else { c[i][j].is_zero() })
            });
            let basis: Vec<Vec<Value>> = d.basis.iter().map(|row| row.iter().map(rat).collect()).collect();
            out = out
                .certificate("congruence", json!({"basis": basis, "verified": ok}))
                .require(ok, "U^T G U is not the reported diagonal form");
            d.form
        };
        let inv = invariants(&d)?;
        out = out.require(inv.hasse_product().is_plus(), "the Hasse invariants have product -1");
        results.push(json!({
            "diagonal": d.entries().iter().map(rat).collect::<Vec<_>>(),
            "invariants": invariants_json(&inv),
        }));
        diagonals.push(d);
    }
    inputs.insert("forms".into(), Value::Array(echoed));
    let mut result = json!({"forms": results});
    if let [a, b] = diagonals.as_slice() {
        result["equivalent"] = json!(equivalent_over_q(a, b)?);
    }
    out.result = result;
    Ok(out)
}

fn cmd_quaternion(p: &Pair, place_arg: Option<&str>, inputs: &mut Inputs) -> Run {
    let (a, b) = read_pair(p, inputs)?;
    let splits = match place_arg {
        Some(s) => quaternion_splits_at(&a, &b, input::place_q(s)?)?,
        None => quaternion_splits(&a, &b)?,
    };
    let ramified: Vec<Value> = support_places(&a, &b)?
        .into_iter()
        .filter(|&v| !hilbert(&a, &b, v).map(|s| s.is_plus()).unwrap_or(true))
        .map(place)
        .collect();
    let even = ramified.len() % 2 == 0;
    Ok(Outcome::new(json!({"splits": splits, "ramified": ramified}))
        .certificate("local_symbols", json!({"factors": place_table(&a, &b)?}))
        .require(even, "an odd number of ramified places"))
}

fn cmd_pfister(p: &Pair, place_arg: Option<&str>, inputs: &mut Inputs) -> Run {
    let (x, y) = read_pair(p, inputs)?;
    let places = match place_arg {
        Some(s) => vec![input::place_q(s)?],
        None => support_places(&x, &y)?,
    };
    let mut out = Outcome::new(Value::Null);
    let mut all = true;
    for v in places {
        let c = pfister_hasse_identity(&x, &y, v)?;
        all &= c.holds();
        out = out
            .certificate(
                "pfister",
                json!({"place": place(v), "hasse": sign(c.hasse), "correction": sign(c.correction), "hilbert": sign(c.hilbert)}),
            )
            .require(c.holds(), format!("the identity fails at {v}"));
    }
    out.result = json!({"holds": all, "hasse_convention": HASSE_CONVENTION});
    Ok(out)
}

fn form_field(q: Option<u64>) -> Result<FormField, Failure> {
    Ok(FormField::new(require_q(q)?)?)
}

fn form1_json(k: &FormField, w: &Form1) -> Value {
    json!({"ds": k.fmt(&w.ds), "dt": k.fmt(&w.dt)})
}

fn cmd_dform(f: &str, g: Option<&str>, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let k = form_field(q)?;
    let fv = input::form_func(&k, f)?;
    inputs.insert("f".into(), json!(k.fmt(&fv)));
    let df = k.d0(&fv);
    let ddf = k.d1(&df);
    let mut result = json!({"df": form1_json(&k, &df)});
    let mut out = Outcome::new(Value::Null)
        .certificate("d_squared", json!({"value": k.fmt(&ddf.h)}))
        .require(k.field().is_zero(&ddf.h), "d(df) is not zero");
    if let Some(g) = g {
        let fv = input::nonzero_form_func(&k, f)?;
        let gv = input::nonzero_form_func(&k, g)?;
        inputs.insert("g".into(), json!(k.fmt(&gv)));
        let w = k.dlog2(&fv, &gv)?;
        let fixed = k.nu_member2(&w);
        result["dlog"] = json!(k.fmt(&w.h));
        result["cartier_fixed"] = json!(fixed);
        out = out.require(fixed, "dlog f ^ dlog g is not fixed by the Cartier operator");
    }
    out.result = result;
    Ok(out)
}

fn cmd_cartier(h: Option<&str>, ds: Option<&str>, dt: Option<&str>, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let k = form_field(q)?;
    match (h, ds, dt) {
        (Some(h), None, None) => {
            let w = Form2 { h: input::form_func(&k, h)? };
            inputs.insert("h".into(), json!(k.fmt(&w.h)));
            let c = k.cartier2(&w);
            Ok(Outcome::new(json!({"h": k.fmt(&c.h), "exact": k.field().is_zero(&c.h)})))
        }
        (None, Some(ds), Some(dt)) => {
            let w = Form1 { ds: input::form_func(&k, ds)?, dt: input::form_func(&k, dt)? };
            inputs.insert("form".into(), form1_json(&k, &w));
            let c = k.cartier1(&w)?;
            let exact = k.field().is_zero(&c.ds) && k.field().is_zero(&c.dt);
            Ok(Outcome::new(json!({"form": form1_json(&k, &c), "exact": exact})))
        }
        _ => Err(invalid("give a 2-form coefficient h, or both --ds and --dt")),
    }
}

fn cmd_numember(degree: u8, values: &[String], q: Option<u64>, inputs: &mut Inputs) -> Run {
    let k = form_field(q)?;
    inputs.insert("degree".into(), json!(degree));
    let member = match (degree, values) {
        (0, [x]) => {
            let x = input::nonzero_form_func(&k, x)?;
            inputs.insert("x".into(), json!(k.fmt(&x)));
            k.nu_member0(&x)
        }
        (1, [ds, dt]) => {
            let w = Form1 { ds: input::form_func(&k, ds)?, dt: input::form_func(&k, dt)? };
            inputs.insert("form".into(), form1_json(&k, &w));
            k.nu_member1(&w)?
        }
        (2, [h]) => {
            let w = Form2 { h: input::form_func(&k, h)? };
            inputs.insert("h".into(), json!(k.fmt(&w.h)));
            k.nu_member2(&w)
        }
        _ => return Err(invalid("degree 0 and 2 take one value, degree 1 takes the ds and dt coefficients")),
    };
    Ok(Outcome::new(json!({"member": member})))
}

fn curve(src: &str, q: Option<u64>, inputs: &mut Inputs) -> Result<CurveFq, Failure> {
    let q = require_q(q)?;
    inputs.insert("curve".into(), json!(src));
    if src.trim() == "line" {
        return Ok(CurveFq::projective_line(q)?);
    }
    let (a, b) = src.split_once(',').ok_or_else(|| invalid(format!("--curve must be 'line' or 'a,b', got '{src}'")))?;
    let (a, b) = (input::signed(a, "a")?, input::signed(b, "b")?);
    let m = q as i64;
    Ok(CurveFq::elliptic(q, a.rem_euclid(m) as u64, b.rem_euclid(m) as u64)?)
}

fn cmd_zeta(src: &str, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let c = curve(src, q, inputs)?;
    let l = l_polynomial(&c)?;
    let mut counts = vec![count_points(&c, 1)?];
    if c.q().checked_mul(c.q()).is_some_and(|q2| q2 <= MAX_COUNT_FIELD) {
        counts.push(count_points(&c, 2)?);
    }
    let z = ksymbol::zeta::zeta_minus1(&c)?;
    let qq = c.q() as i64;
    let hasse_ok = l.a * l.a <= 4 * qq;
    Ok(Outcome::new(json!({
        "genus": c.genus(),
        "l_polynomial": l.coefficients(),
        "point_counts": counts,
        "zeta_minus1": rat(&z),
    }))
    .require(hasse_ok, "the trace of Frobenius exceeds the Hasse bound"))
}

fn cmd_tateid(src: &str, q: Option<u64>, inputs: &mut Inputs) -> Run {
    let c = curve(src, q, inputs)?;
    let t = tate_identity(&c)?;
    let mut result = json!({
        "genus": t.genus,
        "zeta_minus1": rat(&t.zeta_minus1),
        "lhs": rat(&t.lhs),
        "rhs": rat(&t.rhs),
        "holds": t.holds(),
    });
    if let Some(o) = t.coker_order {
        result["cokernel_order"] = json!(o);
    }
    Ok(Outcome::new(result)
        .certificate("identity", json!({"statement": t.statement, "note": t.note}))
        .require(t.holds(), "the two sides differ"))
}

fn cmd_birchtate() -> Run {
    let b = birch_tate_q()?;
    let product = b.product.to_integer().to_i64().filter(|_| b.product.is_integer());
    Ok(Outcome::new(json!({
        "w2": b.w2,
        "zeta": rat(&b.zeta),
        "product": product.map(Value::from).unwrap_or_else(|| rat(&b.product)),
    }))
    .certificate("kernel", json!({"order": b.kernel_order}))
    .require(b.holds(), "w2 |zeta(-1)| differs from the order of the kernel"))
}

fn cmd_dilog(z: &str, inputs: &mut Inputs) -> Run {
    let a = input::gauss(z)?;
    inputs.insert("z".into(), json!(ksymbol::arith::GaussianRationals.fmt_elem(&a)));
    let w = a.to_c64();
    let d = bloch_wigner(w)?;
    let mut out = Outcome::new(json!({"value": d.value, "at_limit": d.at_limit}));
    let conj = bloch_wigner(w.conj())?.value;
    out = out
        .certificate("conjugate", json!({"value": conj}))
        .require((conj + d.value).abs() < 1e-12, "D(conj z) != -D(z)");
    if !w.is_zero() {
        let inv = bloch_wigner(Cx::new(1.0, 0.0) / w)?.value;
        out = out
            .certificate("inverse", json!({"value": inv}))
            .require((inv + d.value).abs() < 1e-12, "D(1/z) != -D(z)");
    }
    Ok(out)
}

fn cmd_residue(f: &str, g: &str, point: &str, inputs: &mut Inputs) -> Run {
    let k = ksymbol::regnum::cx_field();
    let fv = input::nonzero_cx_func(f)?;
    let gv = input::nonzero_cx_func(g)?;
    let a = input::gauss(point)?;
    inputs.insert("f".into(), json!(k.fmt_elem(&fv)));
    inputs.insert("g".into(), json!(k.fmt_elem(&gv)));
    inputs.insert("point".into(), json!(ksymbol::arith::GaussianRationals.fmt_elem(&a)));
    let r = residue_check(&fv, &gv, &a)?;
    Ok(Outcome::new(json!({
        "tame": ksymbol::arith::GaussianRationals.fmt_elem(&r.tame),
        "log_abs_tame": r.expected,
        "integral": r.integral.value,
        "difference": r.difference(),
    }))
    .certificate(
        "quadrature",
        json!({"radius": r.radius, "samples": r.integral.samples, "tolerance": r.integral.tolerance}),
    )
    .require(r.agrees(), "the loop integral disagrees with log |tame symbol|"))
}

fn cmd_selftest() -> Run {
    let reports = ksymbol::selftest::run_all();
    let mut out = Outcome::new(Value::Null);
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| json!({"name": r.name, "checks": r.checks, "failures": r.failures, "passed": r.passed()}))
        .collect();
    for r in &reports {
        out = out.require(r.passed(), format!("suite {} failed", r.name));
    }
    out.result = json!({"suites": suites, "passed": reports.iter().all(|r| r.passed())});
    Ok(out)
}
