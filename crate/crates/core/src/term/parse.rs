//! Lexer, recursive-descent parser and canonical printer for term expressions.
//!
//! Precedence from tightest: `^` (right associative), unary `-`, `* /`,
//! `+ -`. Named calls are `binomial(a, b)` and `factorial(a)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::algebra::{Field, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    N,
    K,
    /// The shift operator in `n`; only meaningful in operator text.
    Sn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Binomial(Box<Expr>, Box<Expr>),
    Factorial(Box<Expr>),
}

/// An integer-linear form `n*n + k*k + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub n: i64,
    pub k: i64,
    pub c: i64,
}

#[allow(clippy::should_implement_trait)]
impl Lin {
    pub fn new(n: i64, k: i64, c: i64) -> Lin {
        Lin { n, k, c }
    }

    pub fn constant(c: i64) -> Lin {
        Lin { n: 0, k: 0, c }
    }

    pub fn add(self, o: Lin) -> Lin {
        Lin { n: self.n + o.n, k: self.k + o.k, c: self.c + o.c }
    }

    pub fn sub(self, o: Lin) -> Lin {
        Lin { n: self.n - o.n, k: self.k - o.k, c: self.c - o.c }
    }

    pub fn scale(self, s: i64) -> Lin {
        Lin { n: self.n * s, k: self.k * s, c: self.c * s }
    }

    pub fn is_constant(&self) -> bool {
        self.n == 0 && self.k == 0
    }

    pub fn eval(&self, n0: i64, k0: i64) -> i64 {
        self.n * n0 + self.k * k0 + self.c
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (coef, var) in [(self.n, "n"), (self.k, "k")] {
            if coef == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push(if coef < 0 { '-' } else { '+' });
            } else if coef < 0 {
                out.push('-');
            }
            if coef.abs() != 1 {
                out.push_str(&format!("{}*", coef.abs()));
            }
            out.push_str(var);
        }
        if self.c != 0 || out.is_empty() {
            if !out.is_empty() && self.c > 0 {
                out.push('+');
            }
            out.push_str(&self.c.to_string());
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer> {
        let mut toks = Vec::new();
        let b: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < b.len() {
            let c = b[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let s = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = b[s..i].iter().collect();
                toks.push((Tok::Num(text.parse().expect("digits")), s));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let s = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(b[s..i].iter().collect()), s));
            } else if "+-*/^(),".contains(c) {
                toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character '{c}'") });
            }
        }
        toks.push((Tok::End, b.len()));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(Error::Syntax { pos: self.pos(), msg: format!("expected '{c}'") })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let pos = self.pos();
            let exp = self.unary()?;
            check_power(&base, &exp, pos)?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Int(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "n" => Ok(Expr::Var(Var::N)),
                "k" => Ok(Expr::Var(Var::K)),
                "Sn" | "S_n" => Ok(Expr::Var(Var::Sn)),
                "binomial" | "factorial" => {
                    self.expect('(')?;
                    let p1 = self.pos();
                    let a = self.expr()?;
                    require_linear(&a, p1)?;
                    if name == "factorial" {
                        self.expect(')')?;
                        return Ok(Expr::Factorial(Box::new(a)));
                    }
                    self.expect(',')?;
                    let p2 = self.pos();
                    let b = self.expr()?;
                    require_linear(&b, p2)?;
                    self.expect(')')?;
                    Ok(Expr::Binomial(Box::new(a), Box::new(b)))
                }
                _ => Err(Error::Syntax { pos, msg: format!("unknown identifier '{name}'") }),
            },
            Tok::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            Tok::Sym(c) => Err(Error::Syntax { pos, msg: format!("unexpected '{c}'") }),
        }
    }
}

fn require_linear(e: &Expr, pos: usize) -> Result<()> {
    linear_form(e).map(|_| ()).ok_or_else(|| Error::NonIntegerLinearArgument { pos, arg: e.to_string() })
}

fn check_power(base: &Expr, exp: &Expr, pos: usize) -> Result<()> {
    if constant_value(exp).is_some_and(|r| r.is_integer()) {
        return Ok(());
    }
    if linear_form(exp).is_none() {
        return Err(Error::NonIntegerLinearArgument { pos, arg: exp.to_string() });
    }
    if constant_value(base).is_none() {
        return Err(Error::NonIntegerLinearArgument { pos, arg: format!("{base} raised to a symbolic power") });
    }
    Ok(())
}

/// Parses a term expression, operator text or rational function.
pub fn parse(text: &str) -> Result<Expr> {
    let lx = Lexer::new(text)?;
    let mut p = Parser { toks: lx.toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Value of a variable-free, special-function-free expression.
pub fn constant_value(e: &Expr) -> Option<Rat> {
    Some(match e {
        Expr::Int(v) => Rat::from_int(v.clone()),
        Expr::Var(_) | Expr::Binomial(..) | Expr::Factorial(_) => return None,
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Div(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                return None;
            }
            constant_value(a)? / d
        }
        Expr::Pow(a, b) => {
            let base = constant_value(a)?;
            let e = constant_value(b)?;
            if !e.is_integer() || (base.is_zero() && e.is_negative()) {
                return None;
            }
            base.pow(e.to_i64()?)
        }
    })
}

fn affine(e: &Expr) -> Option<[Rat; 3]> {
    Some(match e {
        Expr::Int(v) => [Rat::zero(), Rat::zero(), Rat::from_int(v.clone())],
        Expr::Var(Var::N) => [Rat::one(), Rat::zero(), Rat::zero()],
        Expr::Var(Var::K) => [Rat::zero(), Rat::one(), Rat::zero()],
        Expr::Var(Var::Sn) | Expr::Binomial(..) | Expr::Factorial(_) => return None,
        Expr::Neg(a) => affine(a)?.map(|x| -x),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (affine(a)?, affine(b)?);
            let sub = matches!(e, Expr::Sub(..));
            [0, 1, 2].map(|i| if sub { &x[i] - &y[i] } else { &x[i] + &y[i] })
        }
        Expr::Mul(a, b) => {
            let (x, y) = (affine(a)?, affine(b)?);
            if x[0].is_zero() && x[1].is_zero() {
                y.map(|v| &v * &x[2])
            } else if y[0].is_zero() && y[1].is_zero() {
                x.map(|v| &v * &y[2])
            } else {
                return None;
            }
        }
        Expr::Div(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                return None;
            }
            affine(a)?.map(|v| &v / &d)
        }
        Expr::Pow(a, b) => {
            let ex = constant_value(b)?;
            if ex.is_zero() {
                [Rat::zero(), Rat::zero(), Rat::one()]
            } else if ex.is_one() {
                affine(a)?
            } else {
                [Rat::zero(), Rat::zero(), constant_value(e)?]
            }
        }
    })
}

/// The integer-linear form of `e`, if it is one.
pub fn linear_form(e: &Expr) -> Option<Lin> {
    let [a, b, c] = affine(e)?;
    let int = |r: &Rat| if r.is_integer() { r.numer().to_i64() } else { None };
    Some(Lin { n: int(&a)?, k: int(&b)?, c: int(&c)? })
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(v) if v.is_negative() => 3,
            _ => 5,
        }
    }

    fn write_prec(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_bare(f)?;
            write!(f, ")")
        } else {
            self.write_bare(f)
        }
    }

    fn write_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(Var::N) => write!(f, "n"),
            Expr::Var(Var::K) => write!(f, "k"),
            Expr::Var(Var::Sn) => write!(f, "Sn"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_prec(3, f)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_prec(1, f)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                b.write_prec(2, f)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_prec(2, f)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_prec(3, f)
            }
            Expr::Pow(a, b) => {
                a.write_prec(5, f)?;
                write!(f, "^")?;
                b.write_prec(3, f)
            }
            Expr::Binomial(a, b) => write!(f, "binomial({a},{b})"),
            Expr::Factorial(a) => write!(f, "factorial({a})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_bare(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_binomial_power() {
        let e = parse("(-1)^k * binomial(2*n+1, k)^2").unwrap();
        let Expr::Mul(a, b) = &e else { panic!("product expected") };
        assert!(matches!(**a, Expr::Pow(..)));
        assert!(matches!(**b, Expr::Pow(..)));
        assert_eq!(e.to_string(), "(-1)^k*binomial(2*n+1,k)^2");
    }

    #[test]
    fn rejects_nonlinear_arguments() {
        assert!(matches!(parse("binomial(n, k^2)"), Err(Error::NonIntegerLinearArgument { .. })));
        assert!(matches!(parse("n^k"), Err(Error::NonIntegerLinearArgument { .. })));
        assert!(matches!(parse("binomial(n/2, k)"), Err(Error::NonIntegerLinearArgument { .. })));
    }

    #[test]
    fn accepts_quotient_of_binomials() {
        let e = parse("binomial(5*n,3*k)^2 / binomial(n,k)").unwrap();
        assert!(matches!(e, Expr::Div(..)));
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("n + * k") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("binomial(n,k"), Err(Error::Syntax { pos: 12, .. })));
        assert!(matches!(parse("n $ k"), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn linear_forms() {
        assert_eq!(linear_form(&parse("(2*n+2)/2 - k").unwrap()), Some(Lin::new(1, -1, 1)));
        assert_eq!(linear_form(&parse("3*(n-k)").unwrap()), Some(Lin::new(3, -3, 0)));
        assert_eq!(Lin::new(3, -1, -4).to_string(), "3*n-k-4");
    }
}
