//! Arbitrary-precision rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Field;

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat {
    num: BigInt,
    den: BigInt,
}

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Rat { num, den }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Rat {
        Rat { num: v.into(), den: BigInt::one() }
    }

    pub fn frac(num: i64, den: i64) -> Rat {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.num.to_i64()
        } else {
            None
        }
    }

    pub fn pow(&self, e: i64) -> Rat {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let e = e as u32;
        Rat { num: num_traits::pow(self.num.clone(), e as usize), den: num_traits::pow(self.den.clone(), e as usize) }
    }

    pub fn signum(&self) -> i32 {
        if self.num.is_zero() {
            0
        } else if self.num.is_negative() {
            -1
        } else {
            1
        }
    }
}

impl Field for Rat {
    fn zero() -> Self {
        Rat { num: BigInt::zero(), den: BigInt::one() }
    }
    fn one() -> Self {
        Rat::from_int(1)
    }
    fn from_i64(v: i64) -> Self {
        Rat::from_int(v)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Rat::new(&self.num + &o.num, self.den.clone());
        }
        Rat::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Rat::zero();
        }
        Rat::new(&self.num * &o.num, &self.den * &o.den)
    }
    fn negated(&self) -> Self {
        Rat { num: -&self.num, den: self.den.clone() }
    }
    fn inv(&self) -> Self {
        Rat::new(self.den.clone(), self.num.clone())
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Rat {
        Rat::from_int(v)
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                self.$f(o)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, o: Rat) -> Rat {
                (&self).$f(&o)
            }
        }
    };
}
rat_binop!(Add, add, plus);
rat_binop!(Sub, sub, minus);
rat_binop!(Mul, mul, times);
rat_binop!(Div, div, over);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.negated()
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.negated()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> Result<Rat, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let a = BigInt::from_str(a.trim()).map_err(|e| e.to_string())?;
                let b = BigInt::from_str(b.trim()).map_err(|e| e.to_string())?;
                if b.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rat::new(a, b))
            }
            None => Ok(Rat::from_int(BigInt::from_str(s).map_err(|e| e.to_string())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = Rat::frac(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.floor(), BigInt::from(-2));
    }

    #[test]
    fn parse_and_print() {
        let r: Rat = "-10/4".parse().unwrap();
        assert_eq!(r.to_string(), "-5/2");
        assert_eq!(Rat::frac(1, 3).plus(&Rat::frac(1, 6)), Rat::frac(1, 2));
    }
}
