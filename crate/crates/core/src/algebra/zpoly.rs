//! Univariate polynomials over the integers; the numerators and
//! denominators of [`RatN`](super::RatN) values.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> ZPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn zero() -> ZPoly {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> ZPoly {
        ZPoly { c: vec![BigInt::one()] }
    }

    pub fn constant(v: BigInt) -> ZPoly {
        ZPoly::new(vec![v])
    }

    /// The polynomial `n`.
    pub fn var() -> ZPoly {
        ZPoly { c: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn from_i64s(v: &[i64]) -> ZPoly {
        ZPoly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.c.len().max(o.c.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            });
        }
        ZPoly::new(v)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut v = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ZPoly::new(v)
    }

    pub fn scale(&self, s: &BigInt) -> ZPoly {
        if s.is_zero() {
            return ZPoly::zero();
        }
        ZPoly { c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn div_scalar_exact(&self, s: &BigInt) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| x / s).collect() }
    }

    pub fn pow(&self, e: u32) -> ZPoly {
        let mut acc = ZPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        self.div_scalar_exact(&g)
    }

    /// Exact division in `Z[n]`; `None` when the quotient is not integral.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if d.c.len() == 1 {
            let s = &d.c[0];
            if self.c.iter().all(|x| (x % s).is_zero()) {
                return Some(self.div_scalar_exact(s));
            }
            return None;
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let dd = d.degree();
        let dl = d.lc();
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qq, rr) = top.div_rem(&dl);
            if !rr.is_zero() {
                return None;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] -= &qq * b;
            }
            q[i] = qq;
        }
        if r.iter().take(dd).any(|x| !x.is_zero()) {
            return None;
        }
        Some(ZPoly::new(q))
    }

    fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let mut r = self.clone();
        let dd = d.degree();
        let dl = d.lc();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let rl = r.lc();
            // r = dl*r - rl*x^shift*d
            let mut v = r.c.iter().map(|x| x * &dl).collect::<Vec<_>>();
            for (j, b) in d.c.iter().enumerate() {
                v[shift + j] -= &rl * b;
            }
            r = ZPoly::new(v);
            let g = r.content();
            if !g.is_zero() && !g.is_one() {
                r = r.div_scalar_exact(&g);
            }
        }
        r
    }

    fn gcd_prs(&self, o: &ZPoly) -> ZPoly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    fn max_norm(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Heuristic gcd of primitive polynomials; `None` if the attempt fails.
    fn gcd_heu(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
        let mut xi = BigInt::from(2) * a.max_norm().min(b.max_norm()) + BigInt::from(29);
        for _ in 0..6 {
            let ga = a.eval_int(&xi);
            let gb = b.eval_int(&xi);
            let gamma = ga.gcd(&gb);
            if gamma.is_zero() {
                return None;
            }
            // symmetric xi-adic expansion
            let mut digits = Vec::new();
            let mut g = gamma.clone();
            let half = &xi / BigInt::from(2);
            while !g.is_zero() {
                let mut d = g.mod_floor(&xi);
                if d > half {
                    d -= &xi;
                }
                g = (g - &d) / &xi;
                digits.push(d);
            }
            let cand = ZPoly::new(digits).primitive();
            if !cand.is_zero() && a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                return Some(cand);
            }
            xi = xi * BigInt::from(73794) / BigInt::from(27011);
        }
        None
    }

    /// Full gcd in `Z[n]` (integer content included), positive leading coefficient.
    pub fn gcd(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() {
            return o.abs_lc();
        }
        if o.is_zero() {
            return self.abs_lc();
        }
        let cg = self.content().gcd(&o.content());
        if self.is_constant() || o.is_constant() {
            return ZPoly::constant(cg);
        }
        let pa = self.primitive();
        let pb = o.primitive();
        if pa == pb {
            return pa.scale(&cg);
        }
        let g = ZPoly::gcd_heu(&pa, &pb).unwrap_or_else(|| pa.gcd_prs(&pb));
        g.scale(&cg)
    }

    fn abs_lc(&self) -> ZPoly {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        if self.is_zero() {
            return Rat::from_int(0);
        }
        // sum c_i p^i q^(d-i), then divide by q^d
        let (p, q) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.c.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        Rat::new(acc, num_traits::pow(q.clone(), self.degree()))
    }

    /// `p(n + j)` for an integer `j`.
    pub fn shift(&self, j: &BigInt) -> ZPoly {
        if j.is_zero() || self.is_constant() {
            return self.clone();
        }
        // Horner with (n + j)
        let mut acc: Vec<BigInt> = Vec::new();
        for a in self.c.iter().rev() {
            // acc = acc*(n+j) + a
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (i, x) in acc.iter().enumerate() {
                next[i + 1] += x;
                next[i] += x * j;
            }
            next[0] += a;
            acc = next;
        }
        ZPoly::new(acc)
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect())
    }

    pub fn sign_of_lc(&self) -> Sign {
        self.lc().sign()
    }

    /// Writes the polynomial in variable `var`, highest degree first, e.g. `2*n^2-3`.
    pub fn write_with(&self, var: &str, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "{var}")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with("n", f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_products() {
        let a = ZPoly::from_i64s(&[1, 1]).mul(&ZPoly::from_i64s(&[3, 2]));
        let b = ZPoly::from_i64s(&[1, 1]).mul(&ZPoly::from_i64s(&[-5, 7]));
        assert_eq!(a.gcd(&b), ZPoly::from_i64s(&[1, 1]));
        let c = ZPoly::from_i64s(&[6, 12]);
        let d = ZPoly::from_i64s(&[9, 18]);
        assert_eq!(c.gcd(&d), ZPoly::from_i64s(&[3, 6]));
    }

    #[test]
    fn gcd_prs_agrees_with_heuristic() {
        let f = ZPoly::from_i64s(&[-7, 3, 0, 2]);
        let a = f.mul(&ZPoly::from_i64s(&[1, 0, 4]));
        let b = f.mul(&ZPoly::from_i64s(&[5, -3]));
        assert_eq!(a.gcd_prs(&b), f);
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn shift_and_eval() {
        let p = ZPoly::from_i64s(&[1, 2, 1]); // (n+1)^2
        assert_eq!(p.shift(&BigInt::from(-1)), ZPoly::from_i64s(&[0, 0, 1]));
        assert_eq!(p.eval(&Rat::frac(1, 2)), Rat::frac(9, 4));
        assert_eq!(p.to_string(), "n^2+2*n+1");
    }
}
