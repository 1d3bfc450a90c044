//! Exact evaluation of term expressions at integer points.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::parse::{Expr, Var};
use crate::algebra::{Field, Rat};

fn factorial(m: &BigInt) -> Option<Rat> {
    if m.is_negative() {
        return None;
    }
    let m = m.to_u64()?;
    Some(Rat::from_int((1..=m).map(BigInt::from).product::<BigInt>()))
}

/// Binomial coefficient with the conventions `binomial(a, b) = 0` for
/// `b < 0` or `0 <= a < b`, and the falling-factorial extension for `a < 0`.
pub fn binomial(a: &BigInt, b: &BigInt) -> Rat {
    if b.is_negative() || (!a.is_negative() && b > a) {
        return Rat::zero();
    }
    let b = b.to_u64().expect("small binomial index");
    let mut acc = Rat::one();
    for i in 1..=b {
        let num = Rat::from_int(a - BigInt::from(b) + BigInt::from(i));
        acc = acc.times(&num).over(&Rat::from(i as i64));
    }
    acc
}

fn int_of(e: &Expr, n0: i64, k0: i64) -> Option<BigInt> {
    let v = eval_expr(e, n0, k0)?;
    v.is_integer().then(|| v.numer().clone())
}

/// Value of `e` at `(n0, k0)`; `None` where undefined.
pub fn eval_expr(e: &Expr, n0: i64, k0: i64) -> Option<Rat> {
    Some(match e {
        Expr::Int(v) => Rat::from_int(v.clone()),
        Expr::Var(Var::N) => Rat::from(n0),
        Expr::Var(Var::K) => Rat::from(k0),
        Expr::Var(Var::Sn) => return None,
        Expr::Neg(a) => eval_expr(a, n0, k0)?.negated(),
        Expr::Add(a, b) => eval_expr(a, n0, k0)?.plus(&eval_expr(b, n0, k0)?),
        Expr::Sub(a, b) => eval_expr(a, n0, k0)?.minus(&eval_expr(b, n0, k0)?),
        Expr::Mul(a, b) => eval_expr(a, n0, k0)?.times(&eval_expr(b, n0, k0)?),
        Expr::Div(a, b) => {
            let d = eval_expr(b, n0, k0)?;
            if d.is_zero() {
                return None;
            }
            eval_expr(a, n0, k0)?.over(&d)
        }
        Expr::Pow(a, b) => {
            let base = eval_expr(a, n0, k0)?;
            let ex = int_of(b, n0, k0)?.to_i64()?;
            if base.is_zero() && ex < 0 {
                return None;
            }
            base.pow(ex)
        }
        Expr::Binomial(a, b) => binomial(&int_of(a, n0, k0)?, &int_of(b, n0, k0)?),
        Expr::Factorial(a) => factorial(&int_of(a, n0, k0)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn binomial_conventions() {
        let b = |a: i64, c: i64| binomial(&BigInt::from(a), &BigInt::from(c));
        assert_eq!(b(5, 2), Rat::from(10));
        assert_eq!(b(5, -1), Rat::from(0));
        assert_eq!(b(3, 5), Rat::from(0));
        assert_eq!(b(-2, 3), Rat::from(-4));
        assert_eq!(b(0, 0), Rat::from(1));
    }

    #[test]
    fn undefined_points() {
        let e = parse("factorial(n-k)/k").unwrap();
        assert_eq!(eval_expr(&e, 1, 2), None);
        assert_eq!(eval_expr(&e, 1, 0), None);
        assert_eq!(eval_expr(&e, 3, 1), Some(Rat::from(2)));
        let e = parse("0^(k-1)").unwrap();
        assert_eq!(eval_expr(&e, 0, 0), None);
        assert_eq!(eval_expr(&e, 0, 1), Some(Rat::from(1)));
    }
}
