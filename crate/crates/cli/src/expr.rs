//! Arithmetic expressions over rationals, polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := uint | var | '(' expr ')'
//! ```

use std::fmt;

use ksymbol::arith::Field;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub const VARIABLES: [char; 6] = ['T', 's', 't', 'z', 'i', 'a'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(char, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

/// Replaces the Unicode minus sign with an ASCII hyphen.
pub fn normalize(src: &str) -> String {
    src.replace('\u{2212}', "-")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else if c.is_alphabetic() {
            out.push((Tok::Var(c), i));
            i += 1;
        } else {
            return Err(ParseError { offset: i, message: format!("unexpected character '{c}'") });
        }
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset, message: message.into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = self.peek().0 {
            self.next();
            let rhs = self.term()?;
            lhs = if c == '+' { Expr::Add(lhs.into(), rhs.into()) } else { Expr::Sub(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Tok::Op(c @ ('*' | '/')) = self.peek().0 {
            self.next();
            let rhs = self.factor()?;
            lhs = if c == '*' { Expr::Mul(lhs.into(), rhs.into()) } else { Expr::Div(lhs.into(), rhs.into()) };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().0 == Tok::Op('-') {
            self.next();
            return Ok(Expr::Neg(self.factor()?.into()));
        }
        let base = self.base()?;
        if self.peek().0 != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        match self.next() {
            (Tok::Int(n), at) => match n.to_u32() {
                Some(e) => Ok(Expr::Pow(base.into(), e)),
                None => self.error(at, "exponent too large"),
            },
            (_, at) => self.error(at, "expected an unsigned integer exponent"),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.next() {
            (Tok::Int(n), _) => Ok(Expr::Int(n)),
            (Tok::Var(v), at) => {
                if VARIABLES.contains(&v) {
                    Ok(Expr::Var(v, at))
                } else {
                    self.error(at, format!("unknown variable '{v}'"))
                }
            }
            (Tok::Op('('), _) => {
                let e = self.expr()?;
                match self.next() {
                    (Tok::Op(')'), _) => Ok(e),
                    (_, at) => self.error(at, "expected ')'"),
                }
            }
            (Tok::End, at) => self.error(at, "unexpected end of input"),
            (Tok::Op(c), at) => self.error(at, format!("unexpected '{c}'")),
        }
    }
}

/// Parses an expression; offsets count characters after Unicode minus
/// normalization, which preserves character positions.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let src = normalize(src);
    let mut p = Parser { toks: tokenize(&src)?, pos: 0 };
    let e = p.expr()?;
    match p.next() {
        (Tok::End, _) => Ok(e),
        (_, at) => p.error(at, "unexpected trailing input"),
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Var(..) => 5,
    }
}

fn write_at(out: &mut String, e: &Expr, min: u8) {
    if precedence(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    let binary = |out: &mut String, a: &Expr, b: &Expr, op: &str, prec: u8| {
        write_at(out, a, prec);
        out.push_str(op);
        write_at(out, b, prec + 1);
    };
    match e {
        Expr::Int(n) => out.push_str(&n.to_string()),
        Expr::Var(v, _) => out.push(*v),
        Expr::Neg(a) => {
            out.push('-');
            write_at(out, a, 3);
        }
        Expr::Add(a, b) => binary(out, a, b, " + ", 1),
        Expr::Sub(a, b) => binary(out, a, b, " - ", 1),
        Expr::Mul(a, b) => binary(out, a, b, "*", 2),
        Expr::Div(a, b) => binary(out, a, b, "/", 2),
        Expr::Pow(a, n) => {
            write_at(out, a, 5);
            out.push_str(&format!("^{n}"));
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self);
        f.write_str(&s)
    }
}

impl Expr {
    /// Structural equality ignoring source positions.
    pub fn same_shape(&self, other: &Expr) -> bool {
        use Expr::*;
        match (self, other) {
            (Int(a), Int(b)) => a == b,
            (Var(a, _), Var(b, _)) => a == b,
            (Neg(a), Neg(b)) => a.same_shape(b),
            (Pow(a, m), Pow(b, n)) => m == n && a.same_shape(b),
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) | (Div(a, b), Div(c, d)) => {
                a.same_shape(c) && b.same_shape(d)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    UnknownVariable { var: char, offset: usize },
    DivisionByZero,
    Literal(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnknownVariable { var, offset } => {
                write!(f, "variable '{var}' is not available here (offset {offset})")
            }
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::Literal(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Evaluates in `field`, with integer literals mapped by `lit` and variables
/// by `var`.
pub fn eval<F: Field>(
    e: &Expr,
    field: &F,
    lit: &dyn Fn(&BigInt) -> Result<F::Elem, EvalError>,
    var: &dyn Fn(char) -> Option<F::Elem>,
) -> Result<F::Elem, EvalError> {
    let go = |x: &Expr| eval(x, field, lit, var);
    Ok(match e {
        Expr::Int(n) => lit(n)?,
        Expr::Var(v, offset) => var(*v).ok_or(EvalError::UnknownVariable { var: *v, offset: *offset })?,
        Expr::Neg(a) => field.neg(&go(a)?),
        Expr::Add(a, b) => field.add(&go(a)?, &go(b)?),
        Expr::Sub(a, b) => field.sub(&go(a)?, &go(b)?),
        Expr::Mul(a, b) => field.mul(&go(a)?, &go(b)?),
        Expr::Div(a, b) => {
            let d = field.inv(&go(b)?).ok_or(EvalError::DivisionByZero)?;
            field.mul(&go(a)?, &d)
        }
        Expr::Pow(a, n) => field.pow(&go(a)?, *n as u128),
    })
}
