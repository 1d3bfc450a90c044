//! Rational functions in `n` and `k`.

use std::fmt;

use super::{kpoly, Field, KPoly, Poly, PolyNK, Rat, RatN};

/// Element of `Q(n,k)` as `num/den` over `Q(n)[k]`, coprime, `den` monic in `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatNK {
    num: KPoly,
    den: KPoly,
}

impl RatNK {
    pub fn new(num: KPoly, den: KPoly) -> RatNK {
        assert!(!den.is_zero(), "RatNK with zero denominator");
        if num.is_zero() {
            return RatNK::zero();
        }
        let g = if den.is_constant() || num.is_constant() { Poly::one() } else { kpoly::gcd_k(&num, &den) };
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let l = den.lc();
        if l.is_one() {
            RatNK { num, den }
        } else {
            let li = l.inv();
            RatNK { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn zero() -> RatNK {
        RatNK { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> RatNK {
        RatNK { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: KPoly) -> RatNK {
        RatNK { num: p, den: Poly::one() }
    }

    pub fn from_ratn(c: RatN) -> RatNK {
        RatNK::from_poly(Poly::constant(c))
    }

    pub fn from_int(v: i64) -> RatNK {
        RatNK::from_ratn(RatN::int(v))
    }

    pub fn n() -> RatNK {
        RatNK::from_ratn(RatN::var())
    }

    pub fn k() -> RatNK {
        RatNK::from_poly(kpoly::k_var())
    }

    pub fn num(&self) -> &KPoly {
        &self.num
    }

    pub fn den(&self) -> &KPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when free of `k`.
    pub fn is_k_free(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_ratn(&self) -> Option<RatN> {
        self.is_k_free().then(|| self.num.coeff(0))
    }

    pub fn is_polynomial_in_k(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, o: &RatNK) -> RatNK {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatNK::new(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return RatNK { num: &(&self.num * &o.den) + &o.num, den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatNK { num: &(&o.num * &self.den) + &self.num, den: self.den.clone() };
        }
        let g = kpoly::gcd_k(&self.den, &o.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = o.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        RatNK::new(num, &d1 * &o.den)
    }

    pub fn neg(&self) -> RatNK {
        RatNK { num: self.num.neg_ref(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatNK) -> RatNK {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatNK) -> RatNK {
        if self.is_zero() || o.is_zero() {
            return RatNK::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatNK { num: &self.num * &o.num, den: Poly::one() };
        }
        let g1 = if o.den.is_constant() { Poly::one() } else { kpoly::gcd_k(&self.num, &o.den) };
        let g2 = if self.den.is_constant() { Poly::one() } else { kpoly::gcd_k(&o.num, &self.den) };
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let den = &b * &d;
        let l = den.lc().inv();
        RatNK { num: (&a * &c).scale(&l), den: den.scale(&l) }
    }

    pub fn inv(&self) -> RatNK {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatNK::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatNK) -> RatNK {
        self.mul(&o.inv())
    }

    pub fn scale(&self, c: &RatN) -> RatNK {
        if c.is_zero() {
            return RatNK::zero();
        }
        RatNK { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> RatNK {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let e = e as u32;
        RatNK { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// `f(n, k + j)`
    pub fn shift_k(&self, j: i64) -> RatNK {
        if j == 0 {
            return self.clone();
        }
        RatNK { num: kpoly::shift_k(&self.num, j), den: kpoly::shift_k(&self.den, j) }
    }

    /// `f(n + j, k)`
    pub fn shift_n(&self, j: i64) -> RatNK {
        if j == 0 {
            return self.clone();
        }
        RatNK { num: kpoly::shift_n(&self.num, j), den: kpoly::shift_n(&self.den, j) }
    }

    /// `f(n, value)`; `None` if the denominator vanishes there.
    pub fn eval_k(&self, value: &RatN) -> Option<RatN> {
        let d = self.den.eval(value);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(value).over(&d))
    }

    /// Value at an integer point; `None` at a pole.
    pub fn eval(&self, n0: &Rat, k0: &Rat) -> Option<Rat> {
        let d = kpoly::eval_point(&self.den, n0, k0)?;
        if d.is_zero() {
            return None;
        }
        Some(kpoly::eval_point(&self.num, n0, k0)?.over(&d))
    }

    /// Integer-coefficient view `(num, den)`, coprime in `Q[n,k]`,
    /// `den` with positive graded-lex leading coefficient.
    pub fn integer_parts(&self) -> (PolyNK, PolyNK) {
        if self.num.is_zero() {
            return (PolyNK::zero(), PolyNK::constant(Rat::one()));
        }
        let (nc, nf) = kpoly::integer_form(&self.num);
        let (dc, df) = kpoly::integer_form(&self.den);
        // value = nf/df * N/D with N, D primitive integer polynomials
        let ratio = nf.over(&df);
        let mut num = PolyNK::from_zcoeffs(&nc);
        let mut den = PolyNK::from_zcoeffs(&dc);
        let rn = PolyNK::from_kpoly(&Poly::constant(RatN::from_poly(ratio.numer().clone())));
        let rd = PolyNK::from_kpoly(&Poly::constant(RatN::from_poly(ratio.denom().clone())));
        num = num.mul(&rn);
        den = den.mul(&rd);
        if let Some((_, c)) = den.leading() {
            if c.is_negative() {
                num = num.scale(&Rat::from(-1));
                den = den.scale(&Rat::from(-1));
            }
        }
        (num, den)
    }
}

impl From<KPoly> for RatNK {
    fn from(p: KPoly) -> RatNK {
        RatNK::from_poly(p)
    }
}

impl fmt::Display for RatNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.integer_parts();
        let den_is_one = den.is_constant() && den.leading().is_some_and(|(_, c)| c.is_one());
        if den_is_one {
            return write!(f, "{num}");
        }
        if num.len() > 1 {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        let simple_den = den.len() == 1 && den.leading().is_some_and(|(e, c)| c.is_one() || e == (0, 0));
        if simple_den {
            write!(f, "/{den}")
        } else {
            write!(f, "/({den})")
        }
    }
}

impl fmt::Debug for RatNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
