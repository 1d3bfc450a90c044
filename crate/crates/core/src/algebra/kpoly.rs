//! Polynomials in `k` with coefficients in `Q(n)`.
//!
//! This is the working representation for everything that is "a
//! polynomial in k over the field Q(n)"; [`PolyNK`] is the canonical
//! integer view used for printing and comparisons.

use super::factor::specialize;
use super::{Field, Poly, PolyNK, Rat, RatN, ZPoly};

pub type KPoly = Poly<RatN>;

/// The polynomial `k`.
pub fn k_var() -> KPoly {
    Poly::new(vec![RatN::zero(), RatN::one()])
}

/// `a*n + b*k + c`
pub fn k_linear(a: i64, b: i64, c: i64) -> KPoly {
    Poly::new(vec![RatN::linear(a, c), RatN::int(b)])
}

pub fn k_const(c: RatN) -> KPoly {
    Poly::constant(c)
}

/// `p(n, k + j)`
pub fn shift_k(p: &KPoly, j: i64) -> KPoly {
    p.taylor_shift(&RatN::int(j))
}

/// `p(n + j, k)`
pub fn shift_n(p: &KPoly, j: i64) -> KPoly {
    if j == 0 {
        return p.clone();
    }
    p.map(|c| c.shift(j))
}

/// `p(n, value)` for `value` in `Q(n)`.
pub fn eval_k(p: &KPoly, value: &RatN) -> RatN {
    p.eval(value)
}

/// `p(n0, k0)`; `None` when a coefficient has a pole at `n0`.
pub fn eval_point(p: &KPoly, n0: &Rat, k0: &Rat) -> Option<Rat> {
    let mut acc = Rat::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.times(k0).plus(&c.eval(n0)?);
    }
    Some(acc)
}

/// True when every coefficient is a polynomial in `n`.
pub fn has_polynomial_coeffs(p: &KPoly) -> bool {
    p.coeffs().iter().all(|c| c.is_polynomial())
}

/// Clears denominators: returns integer coefficient polynomials `c_i(n)`
/// and the factor `d` in `Q(n)` with `p = d * sum c_i k^i`, the `c_i`
/// jointly primitive over `Z[n]`.
pub fn integer_form(p: &KPoly) -> (Vec<ZPoly>, RatN) {
    if p.is_zero() {
        return (Vec::new(), RatN::one());
    }
    let mut den = ZPoly::one();
    for c in p.coeffs() {
        if !c.denom().is_one() {
            let g = den.gcd(c.denom());
            den = den.mul(&c.denom().div_exact(&g).expect("gcd divides"));
        }
    }
    let coeffs: Vec<ZPoly> = p
        .coeffs()
        .iter()
        .map(|c| c.numer().mul(&den.div_exact(c.denom()).expect("lcm multiple")))
        .collect();
    let mut g = ZPoly::zero();
    for c in &coeffs {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    let coeffs: Vec<ZPoly> = coeffs.iter().map(|c| c.div_exact(&g).expect("content divides")).collect();
    (coeffs, RatN::new(g, den))
}

/// Canonical primitive representative of `p` up to a `Q(n)` unit:
/// integer coefficients, content 1, positive leading coefficient under
/// graded-lex order with `n > k`.
pub fn primitive_nk(p: &KPoly) -> PolyNK {
    let (coeffs, _) = integer_form(p);
    PolyNK::from_zcoeffs(&coeffs).normalized_sign()
}

/// Same as [`primitive_nk`] but returned as a [`KPoly`].
pub fn primitive_kpoly(p: &KPoly) -> KPoly {
    primitive_nk(p).to_kpoly()
}

/// Monic gcd in `Q(n)[k]`. A specialization of `n` bounds the degree of
/// the gcd from above, which settles the common coprime case cheaply.
pub fn gcd_k(a: &KPoly, b: &KPoly) -> KPoly {
    if a.is_zero() || b.is_zero() {
        return a.gcd(b);
    }
    for n0 in [1009, 2003, 3001] {
        let n0 = Rat::from(n0);
        if let (Some(sa), Some(sb)) = (specialize(a, &n0), specialize(b, &n0)) {
            let d = sa.gcd(&sb).degree();
            if d == 0 {
                return KPoly::one();
            }
            let (small, big) = if a.degree() <= b.degree() { (a, b) } else { (b, a) };
            if d == small.degree() && big.rem(small).is_zero() {
                return small.monic();
            }
            break;
        }
    }
    a.gcd(b)
}

/// Squarefree decomposition in `Q(n)[k]` (Yun) with [`gcd_k`].
pub fn squarefree_k(p: &KPoly) -> Vec<(KPoly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let mut a = gcd_k(&f, &f.derivative());
    let mut b = f.div_exact(&a).expect("gcd divides");
    let mut i = 1;
    while !b.is_constant() {
        let y = gcd_k(&a, &b);
        let z = b.div_exact(&y).expect("gcd divides");
        if !z.is_constant() {
            out.push((z.monic(), i));
        }
        a = a.div_exact(&y).expect("gcd divides");
        b = y;
        i += 1;
    }
    out
}

/// Total degree in `n` of the polynomial coefficients (after clearing).
pub fn n_degree(p: &KPoly) -> usize {
    integer_form(p).0.iter().map(|c| c.degree()).max().unwrap_or(0)
}
