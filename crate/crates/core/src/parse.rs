//! Text front-end for polynomials in `h` and elements of H(f).
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT | DECIMAL | 'i' | 'zeta(' INT ')' | 'x' | 'h' | 'y' | 'z' | '(' expr ')'
//! ```
//!
//! `*` is never implied, so `2h` is an error. Division is only allowed by an
//! expression that lowers to a nonzero scalar.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::{AlgebraError, Generator, GhaElement, Presentation};
use crate::poly::Poly;
use crate::scalar::{Backend, Field, Scalar, ScalarError};

/// 1-based line and column of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent does not fit in 32 bits")]
    ExponentOverflow,
    #[error("generator `{0}` is not allowed in a polynomial in h")]
    NotPolynomial(char),
    #[error("decimal literals need the approximate backend")]
    DecimalInExact,
    #[error("`i` needs an even conductor or the approximate backend")]
    ImaginaryUnit,
    #[error("can only divide by a scalar")]
    NonScalarDivisor,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{kind} at {pos}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: Pos,
}

impl ParseError {
    fn new(kind: ParseErrorKind, pos: Pos) -> Self {
        ParseError { kind, pos }
    }

    fn syntax(msg: impl Into<String>, pos: Pos) -> Self {
        Self::new(ParseErrorKind::Syntax(msg.into()), pos)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Literal {
    Int(BigInt),
    /// Kept as written; converted when the backend is known.
    Decimal(String),
    ImaginaryUnit,
    Zeta(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Literal(Literal),
    Generator(Generator),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Group(Box<Expr>),
}

/// Abstract syntax with the position where each node starts.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Decimal(String),
    Ident(String),
    Op(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) | Tok::Decimal(s) | Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Op(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut take = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            take(&mut chars);
        } else if c.is_ascii_digit() || c == '.' {
            let mut s = String::new();
            while chars.peek().is_some_and(|d| d.is_ascii_digit() || *d == '.') {
                s.push(take(&mut chars));
            }
            let tok = match s.matches('.').count() {
                0 => Tok::Int(s),
                1 if s.len() > 1 => Tok::Decimal(s),
                _ => return Err(ParseError::syntax(format!("malformed number `{s}`"), pos)),
            };
            out.push((tok, pos));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|d| d.is_alphanumeric() || *d == '_') {
                s.push(take(&mut chars));
            }
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()".contains(c) {
            take(&mut chars);
            out.push((Tok::Op(c), pos));
        } else {
            return Err(ParseError::syntax(format!("unexpected character `{c}`"), pos));
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> Option<Pos> {
        match self.peek() {
            (Tok::Op(c), pos) if *c == op => {
                let pos = *pos;
                self.bump();
                Some(pos)
            }
            _ => None,
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        self.eat(op).map(|_| ()).ok_or_else(|| {
            let (tok, pos) = self.peek();
            ParseError::syntax(format!("expected `{op}`, found {tok}"), *pos)
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let pos = lhs.pos;
            if self.eat('+').is_some() {
                let rhs = self.term()?;
                lhs = Expr { kind: ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat('-').is_some() {
                let rhs = self.term()?;
                lhs = Expr { kind: ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = lhs.pos;
            if self.eat('*').is_some() {
                let rhs = self.unary()?;
                lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos };
            } else if self.eat('/').is_some() {
                let rhs = self.unary()?;
                lhs = Expr { kind: ExprKind::Div(Box::new(lhs), Box::new(rhs)), pos };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(pos) = self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while let Some(caret) = self.eat('^') {
            if let Some(pos) = self.eat('-') {
                return Err(ParseError::new(ParseErrorKind::NegativeExponent, pos));
            }
            let e = match self.bump() {
                (Tok::Int(s), pos) => s
                    .parse::<u32>()
                    .map_err(|_| ParseError::new(ParseErrorKind::ExponentOverflow, pos))?,
                (tok, pos) => {
                    return Err(ParseError::syntax(
                        format!("expected an integer exponent after `^` at {caret}, found {tok}"),
                        pos,
                    ))
                }
            };
            let pos = base.pos;
            base = Expr { kind: ExprKind::Pow(Box::new(base), e), pos };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Int(s) => ExprKind::Literal(Literal::Int(
                BigInt::from_str(&s).expect("lexer yields digits"),
            )),
            Tok::Decimal(s) => ExprKind::Literal(Literal::Decimal(s)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                ExprKind::Group(Box::new(inner))
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => ExprKind::Generator(Generator::X),
                "h" => ExprKind::Generator(Generator::H),
                "y" => ExprKind::Generator(Generator::Y),
                "z" => ExprKind::Generator(Generator::Z),
                "i" => ExprKind::Literal(Literal::ImaginaryUnit),
                "zeta" => {
                    self.expect('(')?;
                    let n = match self.bump() {
                        (Tok::Int(s), p) => match s.parse::<u32>() {
                            Ok(n) if n > 0 => n,
                            _ => return Err(ParseError::syntax("zeta order must be a positive integer", p)),
                        },
                        (tok, p) => {
                            return Err(ParseError::syntax(
                                format!("expected the order of zeta, found {tok}"),
                                p,
                            ))
                        }
                    };
                    self.expect(')')?;
                    ExprKind::Literal(Literal::Zeta(n))
                }
                _ => return Err(ParseError::new(ParseErrorKind::UnknownSymbol(name), pos)),
            },
            tok => return Err(ParseError::syntax(format!("unexpected {tok}"), pos)),
        };
        Ok(Expr { kind, pos })
    }
}

/// Parses text into an expression tree without interpreting it.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    match p.peek() {
        (Tok::End, _) => Ok(e),
        (tok, pos) => Err(ParseError::syntax(
            format!("expected an operator or end of input, found {tok}"),
            *pos,
        )),
    }
}

/// Reads a single scalar literal expression such as `1/2 - zeta(5)^2`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<Scalar, ParseError> {
    let e = parse_expr(text)?;
    let p = Lower::<Poly>::new(field).run(&e)?;
    match p.degree() {
        None => Ok(field.zero()),
        Some(0) => Ok(p.coeffs()[0].clone()),
        Some(_) => Err(ParseError::new(ParseErrorKind::NotPolynomial('h'), e.pos)),
    }
}

/// A polynomial in `h` with coefficients in `field`.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly, ParseError> {
    Lower::<Poly>::new(field).run(&parse_expr(text)?)
}

/// Evaluates an expression in H(f); products are taken left to right.
pub fn lower(expr: &Expr, pres: &Arc<Presentation>) -> Result<GhaElement, ParseError> {
    Lower::<GhaElement> { field: *pres.field(), ring: pres.clone() }.run(expr)
}

/// `parse_expr` followed by `lower`.
pub fn parse_element(text: &str, pres: &Arc<Presentation>) -> Result<GhaElement, ParseError> {
    lower(&parse_expr(text)?, pres)
}

/// The two targets of lowering.
trait Target: Sized {
    type Ctx;
    fn scalar(ctx: &Self::Ctx, s: Scalar) -> Self;
    fn generator(ctx: &Self::Ctx, g: Generator) -> Result<Self, ParseErrorKind>;
    fn add(&self, rhs: &Self) -> Result<Self, ParseErrorKind>;
    fn sub(&self, rhs: &Self) -> Result<Self, ParseErrorKind>;
    fn mul(&self, rhs: &Self) -> Result<Self, ParseErrorKind>;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn as_scalar(&self, ctx: &Self::Ctx) -> Option<Scalar>;
}

impl Target for Poly {
    type Ctx = Field;

    fn scalar(field: &Field, s: Scalar) -> Self {
        Poly::constant(field.coerce(&s))
    }

    fn generator(field: &Field, g: Generator) -> Result<Self, ParseErrorKind> {
        match g {
            Generator::H => Ok(Poly::identity(field)),
            other => Err(ParseErrorKind::NotPolynomial(other.symbol())),
        }
    }

    fn add(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self + rhs)
    }

    fn sub(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self - rhs)
    }

    fn mul(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self * rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn pow(&self, e: u32) -> Self {
        Poly::pow(self, e)
    }

    fn scale(&self, s: &Scalar) -> Self {
        Poly::scale(self, s)
    }

    fn as_scalar(&self, field: &Field) -> Option<Scalar> {
        match self.degree() {
            None => Some(field.zero()),
            Some(0) => Some(self.coeffs()[0].clone()),
            Some(_) => None,
        }
    }
}

impl Target for GhaElement {
    type Ctx = Arc<Presentation>;

    fn scalar(pres: &Arc<Presentation>, s: Scalar) -> Self {
        GhaElement::scalar(pres, s)
    }

    fn generator(pres: &Arc<Presentation>, g: Generator) -> Result<Self, ParseErrorKind> {
        Ok(GhaElement::generator(pres, g))
    }

    fn add(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self.try_add(rhs)?)
    }

    fn sub(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self.try_sub(rhs)?)
    }

    fn mul(&self, rhs: &Self) -> Result<Self, ParseErrorKind> {
        Ok(self.try_mul(rhs)?)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn pow(&self, e: u32) -> Self {
        GhaElement::pow(self, e)
    }

    fn scale(&self, s: &Scalar) -> Self {
        GhaElement::scale(self, s)
    }

    fn as_scalar(&self, pres: &Arc<Presentation>) -> Option<Scalar> {
        let terms = self.terms();
        match (terms.len(), terms.get(&(0, 0))) {
            (0, _) => Some(pres.field().zero()),
            (1, Some(g)) => g.as_scalar(pres.field()),
            _ => None,
        }
    }
}

struct Lower<T: Target> {
    field: Field,
    ring: T::Ctx,
}

impl Lower<Poly> {
    fn new(field: &Field) -> Self {
        Lower { field: *field, ring: *field }
    }
}

impl<T: Target> Lower<T> {
    fn literal(&self, lit: &Literal, pos: Pos) -> Result<Scalar, ParseError> {
        let f = &self.field;
        match lit {
            Literal::Int(n) => Ok(f.rational(BigRational::from_integer(n.clone()))),
            Literal::Decimal(s) => match f.backend {
                Backend::Approx => {
                    let v: f64 = s
                        .parse()
                        .map_err(|_| ParseError::syntax(format!("malformed number `{s}`"), pos))?;
                    Ok(f.complex(Complex64::new(v, 0.0)))
                }
                Backend::Exact => Err(ParseError::new(ParseErrorKind::DecimalInExact, pos)),
            },
            Literal::ImaginaryUnit => {
                if f.backend == Backend::Exact && f.conductor % 2 != 0 {
                    return Err(ParseError::new(ParseErrorKind::ImaginaryUnit, pos));
                }
                Ok(f.imaginary_unit())
            }
            Literal::Zeta(n) => Ok(f.zeta(*n, 1)),
        }
    }

    fn run(&self, e: &Expr) -> Result<T, ParseError> {
        let at = |kind: ParseErrorKind| ParseError::new(kind, e.pos);
        match &e.kind {
            ExprKind::Literal(lit) => Ok(T::scalar(&self.ring, self.literal(lit, e.pos)?)),
            ExprKind::Generator(g) => T::generator(&self.ring, *g).map_err(at),
            ExprKind::Neg(a) => Ok(self.run(a)?.neg()),
            ExprKind::Add(a, b) => self.run(a)?.add(&self.run(b)?).map_err(at),
            ExprKind::Sub(a, b) => self.run(a)?.sub(&self.run(b)?).map_err(at),
            ExprKind::Mul(a, b) => self.run(a)?.mul(&self.run(b)?).map_err(at),
            ExprKind::Div(a, b) => {
                let num = self.run(a)?;
                let den = self
                    .run(b)?
                    .as_scalar(&self.ring)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::NonScalarDivisor, b.pos))?;
                let inv = den
                    .inv()
                    .map_err(|err| ParseError::new(err.into(), b.pos))?;
                Ok(num.scale(&inv))
            }
            ExprKind::Pow(a, n) => Ok(self.run(a)?.pow(*n)),
            ExprKind::Group(a) => self.run(a),
        }
    }
}

/// Prints an expression back in the input syntax, fully parenthesized
/// where precedence would otherwise change the meaning.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Literal(Literal::Int(n)) => write!(f, "{n}"),
            ExprKind::Literal(Literal::Decimal(s)) => f.write_str(s),
            ExprKind::Literal(Literal::ImaginaryUnit) => f.write_str("i"),
            ExprKind::Literal(Literal::Zeta(n)) => write!(f, "zeta({n})"),
            ExprKind::Generator(g) => write!(f, "{}", g.symbol()),
            ExprKind::Neg(a) => write!(f, "-({a})"),
            ExprKind::Add(a, b) => write!(f, "{a} + ({b})"),
            ExprKind::Sub(a, b) => write!(f, "{a} - ({b})"),
            ExprKind::Mul(a, b) => write!(f, "({a})*({b})"),
            ExprKind::Div(a, b) => write!(f, "({a})/({b})"),
            ExprKind::Pow(a, n) => write!(f, "({a})^{n}"),
            ExprKind::Group(a) => write!(f, "({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(f: &str, field: Field) -> Arc<Presentation> {
        Presentation::new(parse_poly(f, &field).unwrap(), field).unwrap()
    }

    fn normal(text: &str, p: &Arc<Presentation>) -> String {
        parse_element(text, p).unwrap().to_string()
    }

    #[test]
    fn commutator_is_f_minus_h() {
        let p = pres("h^2", Field::exact(1));
        assert_eq!(normal("y*x - x*y", &p), "h^2 + (-1)*h");
        assert_eq!(normal("x^0", &p), "1");
        assert_eq!(normal("z - (x*y - h)", &p), "0");
    }

    #[test]
    fn polynomial_syntax() {
        let q = Field::exact(1);
        let f = parse_poly("h^2 + 2*h - 3/4", &q).unwrap();
        assert_eq!(f, Poly::from_coeffs(vec![q.ratio(-3, 4), q.int(2), q.int(1)]));
        assert_eq!(parse_poly("h/2", &q).unwrap(), Poly::monomial(q.ratio(1, 2), 1));
        let q3 = Field::exact(3);
        assert_eq!(parse_poly("zeta(3)*h", &q3).unwrap(), Poly::monomial(q3.zeta(3, 1), 1));
        let q4 = Field::exact(4);
        let g = parse_poly("(1+i)*h^3", &q4).unwrap();
        assert_eq!(g.coeffs()[3], &q4.one() + &q4.zeta(4, 1));
        assert_eq!(parse_poly("-h^2", &q).unwrap(), Poly::monomial(q.int(-1), 2));
        assert_eq!(parse_poly("2^3", &q).unwrap(), Poly::constant(q.int(8)));
    }

    #[test]
    fn scalars() {
        let q5 = Field::exact(5);
        let s = parse_scalar("1/2 - zeta(5)^2", &q5).unwrap();
        assert_eq!(s, &q5.ratio(1, 2) - &q5.zeta(5, 2));
        let c = Field::approx(1e-9);
        let v = parse_scalar("0.25 - 1.5*i", &c).unwrap();
        assert_eq!(v.to_complex(), Complex64::new(0.25, -1.5));
    }

    #[test]
    fn errors_carry_positions() {
        let q = Field::exact(1);
        let err = |t: &str| parse_poly(t, &q).unwrap_err();
        let e = err("h^2 +\n  2h");
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.pos, Pos { line: 2, col: 4 });
        let e = err("h + w");
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("w".into()));
        assert_eq!(e.pos, Pos { line: 1, col: 5 });
        assert_eq!(err("h^-1").kind, ParseErrorKind::NegativeExponent);
        assert_eq!(err("x + h").kind, ParseErrorKind::NotPolynomial('x'));
        assert_eq!(err("0.5*h").kind, ParseErrorKind::DecimalInExact);
        assert_eq!(err("i*h").kind, ParseErrorKind::ImaginaryUnit);
        assert_eq!(err("1/h").kind, ParseErrorKind::NonScalarDivisor);
        assert_eq!(err("h/0").kind, ParseErrorKind::Scalar(ScalarError::DivisionByZero));
        assert!(matches!(err("(h + 1").kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(err("h + ").kind, ParseErrorKind::Syntax(_)));
        assert!(matches!(err("h $ 1").kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn products_keep_their_order() {
        let p = pres("h^2", Field::exact(1));
        assert_ne!(normal("x*y", &p), normal("y*x", &p));
        assert_eq!(normal("h*x", &p), "x*h^2");
    }

    #[test]
    fn expression_printing_reparses() {
        let p = pres("h^2 + 1", Field::exact(1));
        for text in ["-x^2*y + 3/4*h", "(x - y)^2 * z", "zeta(1)*h - -h"] {
            let e = parse_expr(text).unwrap();
            let again = parse_expr(&e.to_string()).unwrap();
            assert_eq!(lower(&e, &p).unwrap(), lower(&again, &p).unwrap(), "{text}");
        }
    }
}
