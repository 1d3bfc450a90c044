//! Canonical bivariate polynomials in `n`, `k` over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{kpoly, Field, KPoly, Poly, Rat, RatN, ZPoly};

/// Sparse bivariate polynomial: exponent pair `(deg_n, deg_k)` to coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyNK {
    terms: BTreeMap<(u32, u32), Rat>,
}

/// Graded-lex with `n > k`: total degree first, then the `n` exponent.
fn grlex_key(e: &(u32, u32)) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

impl PolyNK {
    pub fn zero() -> PolyNK {
        PolyNK::default()
    }

    pub fn constant(c: Rat) -> PolyNK {
        let mut p = PolyNK::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn n() -> PolyNK {
        PolyNK::monomial(1, 0, Rat::one())
    }

    pub fn k() -> PolyNK {
        PolyNK::monomial(0, 1, Rat::one())
    }

    pub fn monomial(dn: u32, dk: u32, c: Rat) -> PolyNK {
        let mut p = PolyNK::zero();
        p.add_term(dn, dk, c);
        p
    }

    pub fn add_term(&mut self, dn: u32, dk: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((dn, dk)).or_insert_with(Rat::zero);
        *e = e.plus(&c);
        if e.is_zero() {
            self.terms.remove(&(dn, dk));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_k(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn deg_n(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    /// Leading term under graded-lex `n > k`.
    pub fn leading(&self) -> Option<((u32, u32), Rat)> {
        self.terms.iter().max_by_key(|(e, _)| grlex_key(e)).map(|(e, c)| (*e, c.clone()))
    }

    pub fn from_zcoeffs(coeffs: &[ZPoly]) -> PolyNK {
        let mut p = PolyNK::zero();
        for (dk, c) in coeffs.iter().enumerate() {
            for (dn, a) in c.coeffs().iter().enumerate() {
                p.add_term(dn as u32, dk as u32, Rat::from_int(a.clone()));
            }
        }
        p
    }

    /// Polynomial coefficients are required; panics on a proper fraction in `n`.
    pub fn from_kpoly(p: &KPoly) -> PolyNK {
        let mut out = PolyNK::zero();
        for (dk, c) in p.coeffs().iter().enumerate() {
            assert!(c.is_polynomial(), "coefficient {c} is not polynomial in n");
            let d = Rat::from_int(c.denom().coeff(0));
            for (dn, a) in c.numer().coeffs().iter().enumerate() {
                out.add_term(dn as u32, dk as u32, Rat::from_int(a.clone()).over(&d));
            }
        }
        out
    }

    pub fn to_kpoly(&self) -> KPoly {
        let dk = self.deg_k() as usize;
        let mut cols: Vec<Vec<Rat>> = vec![Vec::new(); dk + 1];
        for ((en, ek), c) in &self.terms {
            let col = &mut cols[*ek as usize];
            if col.len() <= *en as usize {
                col.resize(*en as usize + 1, Rat::zero());
            }
            col[*en as usize] = c.clone();
        }
        Poly::new(
            cols.into_iter()
                .map(|col| {
                    let mut den = BigInt::one();
                    for c in &col {
                        den = super::ratn::lcm_int(&den, c.denom());
                    }
                    let num = ZPoly::new(col.iter().map(|c| c.numer() * (&den / c.denom())).collect());
                    RatN::new(num, ZPoly::constant(den))
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> PolyNK {
        let mut p = PolyNK::zero();
        for (e, a) in &self.terms {
            p.add_term(e.0, e.1, a.times(c));
        }
        p
    }

    /// Multiplies by -1 if needed so the graded-lex leading coefficient is positive.
    pub fn normalized_sign(self) -> PolyNK {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.scale(&Rat::from(-1)),
            _ => self,
        }
    }

    /// Primitive integer representative with positive leading coefficient.
    pub fn primitive(&self) -> PolyNK {
        if self.is_zero() {
            return PolyNK::zero();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = super::ratn::lcm_int(&den, c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::Integer::gcd(&g, &(c.numer() * (&den / c.denom())));
        }
        self.scale(&Rat::new(den, g)).normalized_sign()
    }

    pub fn eval(&self, n0: &Rat, k0: &Rat) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, ((en, ek), c)| {
            acc.plus(&c.times(&n0.pow(*en as i64)).times(&k0.pow(*ek as i64)))
        })
    }

    pub fn add(&self, o: &PolyNK) -> PolyNK {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.0, e.1, c.clone());
        }
        p
    }

    pub fn mul(&self, o: &PolyNK) -> PolyNK {
        let mut p = PolyNK::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                p.add_term(e1.0 + e2.0, e1.1 + e2.1, c1.times(c2));
            }
        }
        p
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == (0, 0))
    }
}

/// Canonical gcd of two bivariate polynomials: primitive, positive leading
/// coefficient under graded-lex `n > k`; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &PolyNK, b: &PolyNK) -> PolyNK {
    if a.is_zero() && b.is_zero() {
        return PolyNK::zero();
    }
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let (ka, kb) = (a.to_kpoly(), b.to_kpoly());
    // k-free content parts combine by a gcd in Z[n]
    let (ca, _) = kpoly::integer_form(&ka);
    let (cb, _) = kpoly::integer_form(&kb);
    let content = |cs: &[ZPoly]| cs.iter().fold(ZPoly::zero(), |g, c| g.gcd(c));
    let cont = content(&ca).gcd(&content(&cb));
    let g = kpoly::gcd_k(&ka, &kb);
    let gk = kpoly::primitive_nk(&g).to_kpoly();
    let prod = gk.scale(&RatN::from_poly(cont));
    PolyNK::from_kpoly(&prod).primitive()
}

impl fmt::Display for PolyNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by_key(|e| std::cmp::Reverse(grlex_key(e)));
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if e.0 > 0 {
                parts.push(if e.0 == 1 { "n".into() } else { format!("n^{}", e.0) });
            }
            if e.1 > 0 {
                parts.push(if e.1 == 1 { "k".into() } else { format!("k^{}", e.1) });
            }
            if parts.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    if a.is_integer() {
                        write!(f, "{a}*")?;
                    } else {
                        write!(f, "({a})*")?;
                    }
                }
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyNK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(a: i64, b: i64, c: i64) -> PolyNK {
        let mut p = PolyNK::zero();
        p.add_term(1, 0, Rat::from(a));
        p.add_term(0, 1, Rat::from(b));
        p.add_term(0, 0, Rat::from(c));
        p
    }

    #[test]
    fn gcd_examples() {
        let k2m1 = PolyNK::k().mul(&PolyNK::k()).add(&PolyNK::constant(Rat::from(-1)));
        assert_eq!(poly_gcd(&k2m1, &lin(0, 1, -1)), lin(0, 1, -1));
        assert_eq!(poly_gcd(&PolyNK::zero(), &lin(3, 0, 0)), PolyNK::n());
        let a = lin(-1, 3, 0).mul(&lin(0, 1, 1));
        let b = lin(-1, 3, 0).mul(&lin(0, 1, 2));
        // canonical sign: leading monomial n has positive coefficient
        assert_eq!(poly_gcd(&a, &b), lin(1, -3, 0));
    }

    #[test]
    fn display_order() {
        assert_eq!(lin(-3, 1, 2).to_string(), "-3*n+k+2");
        let p = PolyNK::k().mul(&PolyNK::n()).add(&PolyNK::n().mul(&PolyNK::n()));
        assert_eq!(p.to_string(), "n^2+n*k");
    }
}
