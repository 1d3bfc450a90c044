//! Hypergeometric terms in `n` and `k`.
//!
//! A term is given either by an expression built from integer-linear
//! binomials, factorials, geometric factors and rational functions, or
//! directly by its two shift quotients.

mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::algebra::{Field, Rat, RatN, RatNK};
use crate::{Error, Result};

pub use eval::eval_expr;
pub use parse::{constant_value, linear_form, parse, Expr, Lin, Var};

/// `Lin` as an element of `Q(n,k)`.
pub fn lin_ratnk(l: Lin) -> RatNK {
    RatNK::n()
        .scale(&RatN::int(l.n))
        .add(&RatNK::k().scale(&RatN::int(l.k)))
        .add(&RatNK::from_int(l.c))
}

/// `(l+s)!/l!` as a rational function, for any integer `s`.
pub fn rising_ratio(l: Lin, s: i64) -> RatNK {
    let mut acc = RatNK::one();
    if s >= 0 {
        for i in 1..=s {
            acc = acc.mul(&lin_ratnk(l.add(Lin::constant(i))));
        }
    } else {
        for i in 0..-s {
            acc = acc.div(&lin_ratnk(l.sub(Lin::constant(i))));
        }
    }
    acc
}

/// Product of a rational function, integer powers of factorials of
/// integer-linear forms and geometric factors `c^L`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorialForm {
    pub rational: RatNK,
    pub factorials: BTreeMap<Lin, i64>,
    pub geometric: Vec<(Rat, Lin)>,
}

impl FactorialForm {
    fn rational(r: RatNK) -> FactorialForm {
        FactorialForm { rational: r, factorials: BTreeMap::new(), geometric: Vec::new() }
    }

    fn is_rational(&self) -> bool {
        self.factorials.is_empty() && self.geometric.is_empty()
    }

    fn mul(mut self, o: FactorialForm) -> FactorialForm {
        self.rational = self.rational.mul(&o.rational);
        for (l, e) in o.factorials {
            *self.factorials.entry(l).or_insert(0) += e;
        }
        self.factorials.retain(|_, e| *e != 0);
        self.geometric.extend(o.geometric);
        self
    }

    fn pow(mut self, m: i64) -> Result<FactorialForm> {
        if m < 0 && self.rational.is_zero() {
            return Err(Error::ZeroTerm);
        }
        self.rational = self.rational.pow(m);
        for e in self.factorials.values_mut() {
            *e *= m;
        }
        self.factorials.retain(|_, e| *e != 0);
        for (c, _) in &mut self.geometric {
            *c = c.pow(m);
        }
        Ok(self)
    }

    /// Folds factorials of constants into the rational part.
    fn settle(mut self) -> Result<FactorialForm> {
        let consts: Vec<(Lin, i64)> = self.factorials.iter().filter(|(l, _)| l.is_constant()).map(|(l, e)| (*l, *e)).collect();
        for (l, e) in consts {
            self.factorials.remove(&l);
            if l.c < 0 {
                return Err(if e < 0 { Error::ZeroTerm } else { Error::NotHypergeometric(format!("factorial({})", l.c)) });
            }
            let f: BigInt = (1..=l.c).map(BigInt::from).product();
            let v = RatNK::from_ratn(RatN::from_rat(&Rat::from_int(f)));
            self.rational = self.rational.mul(&v.pow(e));
        }
        self.geometric.retain(|(c, l)| !c.is_one() && !(l.n == 0 && l.k == 0 && l.c == 0));
        let consts: Vec<usize> = (0..self.geometric.len()).filter(|&i| self.geometric[i].1.is_constant()).collect();
        for &i in consts.iter().rev() {
            let (c, l) = self.geometric.remove(i);
            self.rational = self.rational.scale(&RatN::from_rat(&c.pow(l.c)));
        }
        if self.rational.is_zero() {
            return Err(Error::ZeroTerm);
        }
        Ok(self)
    }

    /// `T(n+1,k)/T(n,k)` when `dir` is `Var::N`, `T(n,k+1)/T(n,k)` for `Var::K`.
    pub fn quotient(&self, dir: Var) -> RatNK {
        let shift = |l: &Lin| if dir == Var::N { l.n } else { l.k };
        let mut q = if dir == Var::N {
            self.rational.shift_n(1).div(&self.rational)
        } else {
            self.rational.shift_k(1).div(&self.rational)
        };
        for (l, &e) in &self.factorials {
            q = q.mul(&rising_ratio(*l, shift(l)).pow(e));
        }
        for (c, l) in &self.geometric {
            q = q.scale(&RatN::from_rat(&c.pow(shift(l))));
        }
        q
    }

    /// Constant geometric ratio in `k` carried by the factors `c^L`.
    pub fn k_geometric_ratio(&self) -> Rat {
        self.geometric.iter().fold(Rat::one(), |acc, (c, l)| acc.times(&c.pow(l.k)))
    }
}

fn compile_form(e: &Expr) -> Result<FactorialForm> {
    Ok(match e {
        Expr::Int(v) => FactorialForm::rational(RatNK::from_ratn(RatN::from_rat(&Rat::from_int(v.clone())))),
        Expr::Var(Var::N) => FactorialForm::rational(RatNK::n()),
        Expr::Var(Var::K) => FactorialForm::rational(RatNK::k()),
        Expr::Var(Var::Sn) => return Err(Error::NotHypergeometric("shift operator inside a term".into())),
        Expr::Neg(a) => {
            let mut f = compile_form(a)?;
            f.rational = f.rational.neg();
            f
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (x, y) = (compile_form(a)?, compile_form(b)?);
            if !x.is_rational() || !y.is_rational() {
                return Err(Error::NotHypergeometric(format!("sum of non-rational terms in {e}")));
            }
            let r = if matches!(e, Expr::Add(..)) { x.rational.add(&y.rational) } else { x.rational.sub(&y.rational) };
            FactorialForm::rational(r)
        }
        Expr::Mul(a, b) => compile_form(a)?.mul(compile_form(b)?),
        Expr::Div(a, b) => {
            let d = compile_form(b)?;
            if d.rational.is_zero() {
                return Err(Error::ZeroTerm);
            }
            compile_form(a)?.mul(d.pow(-1)?)
        }
        Expr::Pow(a, b) => {
            if let Some(m) = constant_value(b).filter(|r| r.is_integer()) {
                let m = m.to_i64().ok_or_else(|| Error::NotHypergeometric("exponent too large".into()))?;
                compile_form(a)?.pow(m)?
            } else {
                let l = linear_form(b).ok_or_else(|| Error::NotHypergeometric(format!("exponent {b}")))?;
                let c = constant_value(a).ok_or_else(|| Error::NotHypergeometric(format!("base {a}")))?;
                if c.is_zero() {
                    return Err(Error::ZeroTerm);
                }
                let mut f = FactorialForm::rational(RatNK::one());
                f.geometric.push((c, l));
                f
            }
        }
        Expr::Binomial(a, b) => {
            let (la, lb) = (lin_of(a)?, lin_of(b)?);
            let mut f = FactorialForm::rational(RatNK::one());
            for (l, ex) in [(la, 1), (lb, -1), (la.sub(lb), -1)] {
                *f.factorials.entry(l).or_insert(0) += ex;
            }
            f.factorials.retain(|_, e| *e != 0);
            f
        }
        Expr::Factorial(a) => {
            let mut f = FactorialForm::rational(RatNK::one());
            f.factorials.insert(lin_of(a)?, 1);
            f
        }
    })
}

fn lin_of(e: &Expr) -> Result<Lin> {
    linear_form(e).ok_or_else(|| Error::NonIntegerLinearArgument { pos: 0, arg: e.to_string() })
}

/// A hypergeometric term with its shift quotients.
#[derive(Clone, Debug)]
pub struct HyperTerm {
    gn: RatNK,
    gk: RatNK,
    source: Option<Expr>,
    form: Option<FactorialForm>,
}

impl HyperTerm {
    /// Compiles an expression.
    pub fn from_expr(e: Expr) -> Result<HyperTerm> {
        let form = compile_form(&e)?.settle()?;
        let gn = form.quotient(Var::N);
        let gk = form.quotient(Var::K);
        let t = HyperTerm { gn, gk, source: Some(e), form: Some(form) };
        t.check_compatible()?;
        Ok(t)
    }

    /// Parses and compiles term text.
    pub fn parse(text: &str) -> Result<HyperTerm> {
        HyperTerm::from_expr(parse(text)?)
    }

    /// A term known only through its quotients.
    pub fn from_quotients(gn: RatNK, gk: RatNK) -> Result<HyperTerm> {
        if gn.is_zero() || gk.is_zero() {
            return Err(Error::ZeroTerm);
        }
        let t = HyperTerm { gn, gk, source: None, form: None };
        t.check_compatible()?;
        Ok(t)
    }

    fn check_compatible(&self) -> Result<()> {
        let lhs = self.gn.shift_k(1).mul(&self.gk);
        let rhs = self.gk.shift_n(1).mul(&self.gn);
        if lhs == rhs {
            Ok(())
        } else {
            Err(Error::IncompatibleQuotients)
        }
    }

    pub fn gn(&self) -> &RatNK {
        &self.gn
    }

    pub fn gk(&self) -> &RatNK {
        &self.gk
    }

    pub fn source(&self) -> Option<&Expr> {
        self.source.as_ref()
    }

    pub fn form(&self) -> Option<&FactorialForm> {
        self.form.as_ref()
    }

    /// The term `r * T` for a nonzero rational function `r`.
    pub fn scaled(&self, r: &RatNK) -> Result<HyperTerm> {
        if r.is_zero() {
            return Err(Error::ZeroTerm);
        }
        let gn = self.gn.mul(&r.shift_n(1)).div(r);
        let gk = self.gk.mul(&r.shift_k(1)).div(r);
        let source = match &self.source {
            Some(e) => Some(Expr::Mul(Box::new(parse(&r.to_string())?), Box::new(e.clone()))),
            None => None,
        };
        let form = self.form.clone().map(|f| f.mul(FactorialForm::rational(r.clone())));
        Ok(HyperTerm { gn, gk, source, form })
    }

    /// Value at an integer point; `None` where the expression is undefined
    /// or the term carries no expression.
    pub fn eval_int(&self, n0: i64, k0: i64) -> Option<Rat> {
        eval_expr(self.source.as_ref()?, n0, k0)
    }
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Some(e) => write!(f, "{e}"),
            None => write!(f, "term(gn = {}, gk = {})", self.gn, self.gk),
        }
    }
}

/// Parses a rational function in `n` and `k`.
pub fn parse_ratfunc(text: &str) -> Result<RatNK> {
    let e = parse(text)?;
    let f = compile_form(&e)?;
    if !f.is_rational() {
        return Err(Error::InvalidInput(format!("'{text}' is not a rational function")));
    }
    Ok(f.rational)
}
