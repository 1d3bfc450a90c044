//! Linear recurrence operators `sum c_i(n) S_n^i` over `Q(n)`.
//!
//! Multiplication follows `S_n a(n) = a(n+1) S_n`.

use std::fmt;

use num_traits::Signed;

use crate::algebra::linalg::Matrix;
use crate::algebra::{Field, RatN, RatNK, ZPoly};
use crate::term::{parse, Expr, Var};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOp {
    coeffs: Vec<RatN>,
}

impl OreOp {
    /// `coeffs[i]` multiplies `S_n^i`; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<RatN>) -> OreOp {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOp { coeffs }
    }

    pub fn zero() -> OreOp {
        OreOp { coeffs: Vec::new() }
    }

    pub fn one() -> OreOp {
        OreOp::scalar(RatN::one())
    }

    pub fn scalar(c: RatN) -> OreOp {
        OreOp::new(vec![c])
    }

    /// `S_n^d`.
    pub fn sn_pow(d: usize) -> OreOp {
        let mut c = vec![RatN::zero(); d];
        c.push(RatN::one());
        OreOp { coeffs: c }
    }

    pub fn sn() -> OreOp {
        OreOp::sn_pow(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `S_n`; zero for the zero operator.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> RatN {
        self.coeffs.get(i).cloned().unwrap_or_else(RatN::zero)
    }

    pub fn coeffs(&self) -> &[RatN] {
        &self.coeffs
    }

    pub fn lc(&self) -> RatN {
        self.coeffs.last().cloned().unwrap_or_else(RatN::zero)
    }

    pub fn add(&self, o: &OreOp) -> OreOp {
        let m = self.coeffs.len().max(o.coeffs.len());
        OreOp::new((0..m).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &OreOp) -> OreOp {
        self.add(&o.scale_left(&RatN::int(-1)))
    }

    /// `c * L`.
    pub fn scale_left(&self, c: &RatN) -> OreOp {
        OreOp::new(self.coeffs.iter().map(|a| c.times(a)).collect())
    }

    pub fn mul(&self, o: &OreOp) -> OreOp {
        if self.is_zero() || o.is_zero() {
            return OreOp::zero();
        }
        let mut out = vec![RatN::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(&b.shift(i as i64)));
            }
        }
        OreOp::new(out)
    }

    /// `(Q, R)` with `self = Q * d + R` and `order(R) < order(d)`.
    pub fn rdivmod(&self, d: &OreOp) -> Result<(OreOp, OreOp)> {
        if d.is_zero() {
            return Err(Error::DivisionByZeroOperator);
        }
        let e = d.order();
        let bl = d.lc();
        let mut q = vec![RatN::zero(); self.coeffs.len().saturating_sub(e).max(1)];
        let mut r = self.clone();
        while !r.is_zero() && r.order() >= e {
            let s = r.order() - e;
            let c = r.lc().over(&bl.shift(s as i64));
            q[s] = q[s].plus(&c);
            let mut t = vec![RatN::zero(); s];
            t.push(c);
            r = r.sub(&OreOp::new(t).mul(d));
        }
        Ok((OreOp::new(q), r))
    }

    /// Least common left multiple, normalized to be monic.
    pub fn lclm(&self, o: &OreOp) -> Result<OreOp> {
        if self.is_zero() || o.is_zero() {
            return Err(Error::DivisionByZeroOperator);
        }
        let (r1, r2) = (self.order(), o.order());
        let width = r1 + r2;
        let mut rows: Vec<Vec<RatN>> = Vec::new();
        for d in 0..=width {
            let p = OreOp::sn_pow(d);
            let a = p.rdivmod(self)?.1;
            let b = p.rdivmod(o)?.1;
            let mut row: Vec<RatN> = (0..r1).map(|i| a.coeff(i)).collect();
            row.extend((0..r2).map(|i| b.coeff(i)));
            rows.push(row);
            if d < r1.max(r2) {
                continue;
            }
            // c_0 row_0 + ... + c_d row_d = 0 with c_d = 1
            let cols: Vec<Vec<RatN>> = (0..width).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
            let m = if width == 0 { Matrix::zeros(1, d + 1) } else { Matrix::from_rows(cols) };
            let ns = m.nullspace();
            if let Some(v) = ns.iter().find(|v| !v[d].is_zero()) {
                let l = v[d].clone();
                return Ok(OreOp::new(v.iter().map(|c| c.over(&l)).collect()));
            }
        }
        unreachable!("an lclm exists in order r1 + r2")
    }

    /// Multiple with integer polynomial coefficients, content one and
    /// leading coefficient positive.
    pub fn canonical(&self) -> OreOp {
        if self.is_zero() {
            return OreOp::zero();
        }
        let mut l = ZPoly::one();
        for c in &self.coeffs {
            let d = c.denom();
            let g = l.gcd(d);
            l = l.mul(&d.div_exact(&g).expect("gcd divides"));
        }
        let lr = RatN::from_poly(l);
        let nums: Vec<ZPoly> = self.coeffs.iter().map(|c| c.times(&lr).numer().clone()).collect();
        let mut g = ZPoly::zero();
        for p in &nums {
            g = if g.is_zero() { p.clone() } else { g.gcd(p) };
        }
        let mut out: Vec<RatN> = nums.iter().map(|p| RatN::from_poly(p.div_exact(&g).expect("content divides"))).collect();
        if out.last().expect("nonzero").numer().lc().is_negative() {
            out = out.iter().map(|c| c.negated()).collect();
        }
        OreOp::new(out)
    }

    /// `L(T)/T` for a term with `T(n+1)/T(n) = g`.
    pub fn apply_quotient(&self, g: &RatNK) -> RatNK {
        let mut acc = RatNK::zero();
        let mut prod = RatNK::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                prod = prod.mul(&g.shift_n(i as i64 - 1));
            }
            if !c.is_zero() {
                acc = acc.add(&prod.scale(c));
            }
        }
        acc
    }

    /// `sum c_i(n) f(n+i, k)`.
    pub fn apply(&self, f: &RatNK) -> RatNK {
        let mut acc = RatNK::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&f.shift_n(i as i64).scale(c));
            }
        }
        acc
    }

    /// Coefficients as text, lowest order first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_coeff_strings(cs: &[String]) -> Result<OreOp> {
        let mut out = Vec::with_capacity(cs.len());
        for s in cs {
            let r = crate::term::parse_ratfunc(s)?;
            out.push(r.as_ratn().ok_or_else(|| Error::InvalidInput(format!("coefficient '{s}' depends on k")))?);
        }
        Ok(OreOp::new(out))
    }

    /// Parses text such as `(2*n+3)*Sn + 8*n + 8` or `Sn^2 - 1`.
    pub fn parse(text: &str) -> Result<OreOp> {
        from_expr(&parse(text)?)
    }
}

fn from_expr(e: &Expr) -> Result<OreOp> {
    Ok(match e {
        Expr::Int(v) => OreOp::scalar(RatN::from_rat(&crate::algebra::Rat::from_int(v.clone()))),
        Expr::Var(Var::N) => OreOp::scalar(RatN::var()),
        Expr::Var(Var::Sn) => OreOp::sn(),
        Expr::Var(Var::K) => return Err(Error::InvalidInput("operator coefficients may not depend on k".into())),
        Expr::Neg(a) => from_expr(a)?.scale_left(&RatN::int(-1)),
        Expr::Add(a, b) => from_expr(a)?.add(&from_expr(b)?),
        Expr::Sub(a, b) => from_expr(a)?.sub(&from_expr(b)?),
        Expr::Mul(a, b) => from_expr(a)?.mul(&from_expr(b)?),
        Expr::Div(a, b) => {
            let d = from_expr(b)?;
            if d.order() > 0 || d.is_zero() {
                return Err(Error::InvalidInput(format!("cannot divide by {b}")));
            }
            from_expr(a)?.mul(&OreOp::scalar(d.lc().inv()))
        }
        Expr::Pow(a, b) => {
            let m = crate::term::constant_value(b)
                .and_then(|r| r.to_i64())
                .ok_or_else(|| Error::InvalidInput(format!("exponent {b}")))?;
            let base = from_expr(a)?;
            if m < 0 {
                if base.order() > 0 || base.is_zero() {
                    return Err(Error::InvalidInput(format!("negative power of {a}")));
                }
                OreOp::scalar(base.lc().pow(m))
            } else {
                (0..m).fold(OreOp::one(), |acc, _| acc.mul(&base))
            }
        }
        Expr::Binomial(..) | Expr::Factorial(_) => {
            return Err(Error::InvalidInput(format!("special function in operator text: {e}")))
        }
    })
}

fn is_compound(s: &str) -> bool {
    s.char_indices().skip(1).any(|(_, c)| c == '+' || c == '-' || c == '/')
}

impl fmt::Display for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "Sn".to_string(),
                _ => format!("Sn^{i}"),
            };
            let text = c.to_string();
            let (neg, body) = if !is_compound(&text) && text.starts_with('-') {
                (true, text[1..].to_string())
            } else {
                (false, text)
            };
            let body = if is_compound(&body) { format!("({body})") } else { body };
            let piece = match (mono.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => mono.clone(),
                (false, _) => format!("{body}*{mono}"),
            };
            if first {
                write!(f, "{}{piece}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {piece}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_ratfunc;

    fn op(s: &str) -> OreOp {
        OreOp::parse(s).unwrap()
    }

    #[test]
    fn commutation_rule() {
        assert_eq!(op("Sn*n"), op("(n+1)*Sn"));
        assert_eq!(op("(Sn-1)*(Sn+3)"), op("Sn^2 + 2*Sn - 3"));
    }

    #[test]
    fn right_division() {
        let (q, r) = op("Sn+3").rdivmod(&op("Sn-1")).unwrap();
        assert_eq!(q, OreOp::one());
        assert_eq!(r, op("4"));
        let a = op("n*Sn^3 + Sn - n^2");
        let b = op("(n+2)*Sn^2 + 1");
        let (q, r) = a.rdivmod(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.order() < 2);
        assert!(matches!(a.rdivmod(&OreOp::zero()), Err(Error::DivisionByZeroOperator)));
    }

    #[test]
    fn lclm_is_common_multiple() {
        let a = op("Sn - 1");
        let b = op("Sn - n");
        let l = a.lclm(&b).unwrap();
        assert_eq!(l.order(), 2);
        assert!(l.rdivmod(&a).unwrap().1.is_zero());
        assert!(l.rdivmod(&b).unwrap().1.is_zero());
        assert_eq!(a.lclm(&a).unwrap(), a);
    }

    #[test]
    fn application() {
        let two = parse_ratfunc("2").unwrap();
        assert_eq!(op("Sn - 1").apply_quotient(&two), RatNK::one());
        let f = parse_ratfunc("1/(n+k)").unwrap();
        assert_eq!(op("Sn - 1").apply(&f), parse_ratfunc("-1/((n+k)*(n+k+1))").unwrap());
    }

    #[test]
    fn canonical_text() {
        let t = op("Sn + 8*(n+1)/(2*n+3)").canonical();
        assert_eq!(t.to_string(), "(2*n+3)*Sn + (8*n+8)");
        assert_eq!(op("Sn+3").to_string(), "Sn + 3");
        assert_eq!(op("Sn-1").to_string(), "Sn - 1");
        assert_eq!(op("-2*n*Sn^2 + Sn").canonical().to_string(), "2*n*Sn^2 - Sn");
        let round = op("(2*n+3)*Sn + (8*n+8)");
        assert_eq!(OreOp::parse(&round.to_string()).unwrap(), round);
        assert_eq!(OreOp::from_coeff_strings(&round.coeff_strings()).unwrap(), round);
    }
}
