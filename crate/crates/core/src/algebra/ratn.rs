//! Rational functions in `n` over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Field, Rat, ZPoly};

/// Element of `Q(n)` stored as `num/den` with integer polynomials,
/// `gcd(num, den) = 1` (integer content included) and `lc(den) > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatN {
    num: ZPoly,
    den: ZPoly,
}

impl RatN {
    pub fn new(num: ZPoly, den: ZPoly) -> RatN {
        assert!(!den.is_zero(), "RatN with zero denominator");
        if num.is_zero() {
            return RatN::zero();
        }
        let g = if den.is_constant() {
            ZPoly::constant(num.content().gcd(&den.lc()))
        } else if num.is_constant() {
            ZPoly::constant(den.content().gcd(&num.lc()))
        } else {
            num.gcd(&den)
        };
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatN { num, den }
    }

    pub fn from_poly(p: ZPoly) -> RatN {
        RatN { num: p, den: ZPoly::one() }
    }

    pub fn from_rat(r: &Rat) -> RatN {
        RatN::new(ZPoly::constant(r.numer().clone()), ZPoly::constant(r.denom().clone()))
    }

    pub fn int(v: i64) -> RatN {
        RatN::from_poly(ZPoly::constant(BigInt::from(v)))
    }

    /// The indeterminate `n`.
    pub fn var() -> RatN {
        RatN::from_poly(ZPoly::var())
    }

    /// `a*n + b`
    pub fn linear(a: i64, b: i64) -> RatN {
        RatN::from_poly(ZPoly::from_i64s(&[b, a]))
    }

    pub fn numer(&self) -> &ZPoly {
        &self.num
    }

    pub fn denom(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| Rat::new(self.num.coeff(0), self.den.coeff(0)))
    }

    /// Integer value if this is an integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant().filter(|r| r.is_integer()).map(|r| r.numer().clone())
    }

    pub fn shift(&self, j: i64) -> RatN {
        if j == 0 || self.is_constant() {
            return self.clone();
        }
        let j = BigInt::from(j);
        RatN::new(self.num.shift(&j), self.den.shift(&j))
    }

    /// Value at `n = x`, `None` at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x).over(&d))
    }

    pub fn pow(&self, e: i64) -> RatN {
        if e < 0 {
            return self.inv().pow(-e);
        }
        RatN { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
    }

    /// Polynomial part of `num/den` evaluated the way orbit normalization
    /// needs it: the constant term of the polynomial quotient.
    pub fn polynomial_constant_term(&self) -> Rat {
        if self.den.is_constant() {
            return Rat::new(self.num.coeff(0), self.den.coeff(0));
        }
        let q = super::Poly::new(self.num.coeffs().iter().map(|c| Rat::from_int(c.clone())).collect())
            .divrem(&super::Poly::new(self.den.coeffs().iter().map(|c| Rat::from_int(c.clone())).collect()))
            .0;
        q.coeff(0)
    }

    /// Degree of numerator minus degree of denominator (the zero element reports 0).
    pub fn degree_balance(&self) -> i64 {
        self.num.degree() as i64 - self.den.degree() as i64
    }

    pub fn total_degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }
}

impl Field for RatN {
    fn zero() -> Self {
        RatN { num: ZPoly::zero(), den: ZPoly::one() }
    }
    fn one() -> Self {
        RatN { num: ZPoly::one(), den: ZPoly::one() }
    }
    fn from_i64(v: i64) -> Self {
        RatN::int(v)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatN::new(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatN { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatN { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            return RatN::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den));
        }
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        RatN::new(num, d1.mul(&o.den))
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatN::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1).unwrap() };
        let d = if g1.is_one() { o.den.clone() } else { o.den.div_exact(&g1).unwrap() };
        let c = if g2.is_one() { o.num.clone() } else { o.num.div_exact(&g2).unwrap() };
        let b = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2).unwrap() };
        let mut num = a.mul(&c);
        let mut den = b.mul(&d);
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatN { num, den }
    }
    fn negated(&self) -> Self {
        RatN { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in Q(n)");
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatN { num, den }
    }
}

impl From<Rat> for RatN {
    fn from(r: Rat) -> RatN {
        RatN::from_rat(&r)
    }
}

impl fmt::Display for RatN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let multi = |p: &ZPoly| p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if multi(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let den_simple = self.den.is_constant() || (!multi(&self.den) && self.den.lc().is_one());
        if den_simple {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / a.gcd(b)) * b
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_arith() {
        let n = RatN::var();
        let a = n.plus(&RatN::int(1)).inv(); // 1/(n+1)
        let b = RatN::var().plus(&RatN::int(2)).inv();
        let s = a.minus(&b); // 1/((n+1)(n+2))
        assert_eq!(s, RatN::new(ZPoly::one(), ZPoly::from_i64s(&[2, 3, 1])));
        let half = RatN::from_rat(&Rat::frac(1, 2));
        assert_eq!(half.times(&RatN::int(4)), RatN::int(2));
        assert_eq!(RatN::new(ZPoly::from_i64s(&[2, 2]), ZPoly::from_i64s(&[-4])).to_string(), "(-n-1)/2");
    }

    #[test]
    fn shift_eval() {
        let f = RatN::new(ZPoly::from_i64s(&[0, 1]), ZPoly::from_i64s(&[1, 1])); // n/(n+1)
        assert_eq!(f.shift(1), RatN::new(ZPoly::from_i64s(&[1, 1]), ZPoly::from_i64s(&[2, 1])));
        assert_eq!(f.eval(&Rat::from(-1)), None);
        assert_eq!(f.eval(&Rat::from(3)), Some(Rat::frac(3, 4)));
    }
}
