//! Analytic expressions in one complex variable `z`.
//!
//! Grammar (single-token lookahead):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' intlit)?
//! atom   := numlit | 'i' | 'pi' | 'e' | 'z' | func '(' expr ')' | '(' expr ')'
//! func   := 'exp' | 'sin' | 'cos' | 'sqrt'
//! intlit := '-'? digits | '(' '-'? digits ')'
//! numlit := digits ('.' digits?)? (('e' | 'E') ('+' | '-')? digits)? 'i'?
//! ```
//!
//! `^` binds tighter than unary minus, so `-z^2` is `-(z^2)`. Multiplication
//! is always explicit.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::jets::Jet;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Numeric literal; `3i` and `i` produce purely imaginary values.
    Num(Complex64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn real(v: f64) -> Expr {
        Expr::Num(Complex64::new(v, 0.0))
    }

    pub fn num(v: Complex64) -> Expr {
        Expr::Num(v)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn pow(base: Expr, exponent: i32) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    /// Jet of the expression at `at`, truncated at `order`.
    pub fn eval_jet(&self, at: Complex64, order: usize) -> Result<Jet> {
        let wrap = |e: Error| match e {
            Error::DivisionByZeroJet { magnitude } => Error::Evaluation {
                component: None,
                message: format!("division by a vanishing subexpression (|value| = {magnitude:e})"),
            },
            Error::NonFinite { context } => Error::Evaluation {
                component: None,
                message: format!("non-finite result in {context}"),
            },
            other => other,
        };
        self.eval_inner(at, order).map_err(wrap)
    }

    fn eval_inner(&self, at: Complex64, order: usize) -> Result<Jet> {
        Ok(match self {
            Expr::Num(v) => Jet::constant(*v, at, order),
            Expr::Const(Constant::Pi) => Jet::constant(std::f64::consts::PI.into(), at, order),
            Expr::Const(Constant::E) => Jet::constant(std::f64::consts::E.into(), at, order),
            Expr::Var => Jet::variable(at, order),
            Expr::Neg(e) => -e.eval_inner(at, order)?,
            Expr::Binary(op, l, r) => {
                let l = l.eval_inner(at, order)?;
                let r = r.eval_inner(at, order)?;
                match op {
                    BinOp::Add => l.try_add(&r)?,
                    BinOp::Sub => l.try_sub(&r)?,
                    BinOp::Mul => l.try_mul(&r)?,
                    BinOp::Div => l.try_div(&r)?,
                }
            }
            Expr::Pow(b, k) => b.eval_inner(at, order)?.powi(*k)?,
            Expr::Call(f, arg) => {
                let a = arg.eval_inner(at, order)?;
                match f {
                    Func::Exp => a.exp()?,
                    Func::Sin => a.sin()?,
                    Func::Cos => a.cos()?,
                    Func::Sqrt => {
                        if a.value() == Complex64::new(0.0, 0.0) {
                            return Err(Error::Evaluation {
                                component: None,
                                message: "sqrt of a vanishing argument".into(),
                            });
                        }
                        a.sqrt()?
                    }
                }
            }
        })
    }
}

/// Fully parenthesised so that `parse(e.to_string()) == e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if v.im == 0.0 {
                    write!(f, "{}", v.re)
                } else if v.re == 0.0 {
                    write!(f, "{}i", v.im)
                } else {
                    // Not produced by the parser; printed as an equivalent sum.
                    write!(f, "({} + {}i)", v.re, v.im)
                }
            }
            Expr::Const(Constant::Pi) => write!(f, "pi"),
            Expr::Const(Constant::E) => write!(f, "e"),
            Expr::Var => write!(f, "z"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinOp::Add => '+',
                    BinOp::Sub => '-',
                    BinOp::Mul => '*',
                    BinOp::Div => '/',
                };
                write!(f, "({l} {sym} {r})")
            }
            Expr::Pow(b, k) if *k < 0 => write!(f, "({b})^({k})"),
            Expr::Pow(b, k) => write!(f, "({b})^{k}"),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v, false) => format!("number {v}"),
            Tok::Num(v, true) => format!("number {v}i"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent only when a digit follows, so `2*e` style input is unaffected.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lit = &text[start..i];
                let v: f64 = lit.parse().map_err(|_| ParseError {
                    offset: start,
                    message: format!("malformed number '{lit}'"),
                })?;
                let imag = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
                if imag {
                    i += 1;
                }
                out.push((Tok::Num(v, imag), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character '{ch}'"),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::negate(self.factor()?));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let k = self.int_exponent()?;
            return Ok(Expr::pow(base, k));
        }
        Ok(base)
    }

    fn int_exponent(&mut self) -> PResult<i32> {
        let parenthesised = *self.peek() == Tok::LParen;
        if parenthesised {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let k = match self.peek() {
            Tok::Num(v, false) if v.fract() == 0.0 && *v <= i32::MAX as f64 => *v as i32,
            _ => return self.error("an integer exponent"),
        };
        self.bump();
        if parenthesised {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(if negative { -k } else { k })
    }

    fn atom(&mut self) -> PResult<Expr> {
        let offset = self.offset();
        match self.bump() {
            Tok::Num(v, false) => Ok(Expr::real(v)),
            Tok::Num(v, true) => Ok(Expr::Num(Complex64::new(0.0, v))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(Expr::Num(Complex64::new(0.0, 1.0))),
                "pi" => Ok(Expr::Const(Constant::Pi)),
                "e" => Ok(Expr::Const(Constant::E)),
                "z" => Ok(Expr::Var),
                _ => match Func::from_name(&name) {
                    Some(func) => {
                        self.expect(Tok::LParen, "'(' after function name")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Expr::call(func, arg))
                    }
                    None => Err(ParseError {
                        offset,
                        message: format!(
                            "unknown identifier '{name}' (expected z, i, pi, e, exp, sin, cos or sqrt)"
                        ),
                    }),
                },
            },
            other => Err(ParseError {
                    offset,
                    message: format!(
                        "expected a number, constant, 'z', function or '(', found {}",
                    other.describe()
                ),
            }),
        }
    }
}

pub fn parse(text: &str) -> std::result::Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("an operator or end of input");
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse(s)
    }
}

/// A curve in CP^n given by inhomogeneous coordinates `x_1(z), ..., x_n(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    components: Vec<Expr>,
}

impl CurveSpec {
    pub fn new(components: Vec<Expr>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput(
                "a curve needs at least one component (n >= 1)".into(),
            ));
        }
        Ok(CurveSpec { components })
    }

    pub fn parse<S: AsRef<str>>(components: &[S]) -> Result<Self> {
        let parsed = components
            .iter()
            .map(|s| parse(s.as_ref()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CurveSpec::new(parsed)
    }

    /// Projective dimension n.
    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Lifting `f = (1, x_1, ..., x_n)` as `n + 1` jets at `at`.
    pub fn lift(&self, at: Complex64, order: usize) -> Result<Vec<Jet>> {
        let mut out = Vec::with_capacity(self.n() + 1);
        out.push(Jet::constant(Complex64::new(1.0, 0.0), at, order));
        for (idx, c) in self.components.iter().enumerate() {
            out.push(c.eval_jet(at, order).map_err(|e| e.in_component(idx + 1))?);
        }
        Ok(out)
    }
}
