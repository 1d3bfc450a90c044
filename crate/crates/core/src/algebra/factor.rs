//! Partial factorization in `Q(n)[k]`: dispersion, shift equivalence,
//! integer-linear factors and partial fractions over k-linear factors.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::kpoly::{integer_form, shift_k};
use super::roots::{integer_roots, interpolate, rational_roots, resultant};
use super::{Field, KPoly, Poly, QPoly, Rat, RatN, RatNK, ZPoly};
use crate::{Error, Result};

/// Specialization `n -> n0`, `None` when a coefficient has a pole there or
/// the degree in `k` drops.
pub fn specialize(p: &KPoly, n0: &Rat) -> Option<QPoly> {
    let c: Option<Vec<Rat>> = p.coeffs().iter().map(|c| c.eval(n0)).collect();
    let q = QPoly::new(c?);
    (q.degree() == p.degree() && !q.is_zero()).then_some(q)
}

const SPECIAL_POINTS: [i64; 8] = [1009, 2003, 3001, 4007, 5003, 6007, 7001, 8009];

fn candidate_shifts(a: &QPoly, b: &QPoly) -> BTreeSet<i64> {
    let d = a.degree() * b.degree();
    let xs: Vec<Rat> = (0..=d as i64).map(Rat::from).collect();
    let ys: Vec<Rat> = xs.iter().map(|h| resultant(a, &b.taylor_shift(h))).collect();
    integer_roots(&interpolate(&xs, &ys)).into_iter().filter_map(|r| r.to_i64()).collect()
}

/// `{ j : gcd(a(k), b(k + j)) != 1 }` over `Q(n)`.
pub fn dispersion_set(a: &KPoly, b: &KPoly) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    if a.degree() == 0 || b.degree() == 0 || a.is_zero() || b.is_zero() {
        return out;
    }
    if a.degree() == 1 && b.degree() == 1 {
        let j = a.coeff(0).over(&a.coeff(1)).minus(&b.coeff(0).over(&b.coeff(1)));
        if let Some(j) = j.as_integer().and_then(|j| j.to_i64()) {
            out.insert(j);
        }
        return out;
    }
    let mut cands: Option<BTreeSet<i64>> = None;
    let mut used = 0;
    for &n0 in &SPECIAL_POINTS {
        let n0 = Rat::from(n0);
        let (Some(a0), Some(b0)) = (specialize(a, &n0), specialize(b, &n0)) else {
            continue;
        };
        let c = candidate_shifts(&a0, &b0);
        cands = Some(match cands {
            None => c,
            Some(prev) => prev.intersection(&c).copied().collect(),
        });
        used += 1;
        if used == 2 {
            break;
        }
    }
    for j in cands.expect("a point of good specialization exists") {
        if super::kpoly::gcd_k(a, &shift_k(b, j)).degree() > 0 {
            out.insert(j);
        }
    }
    out
}

/// `Some(j)` with `q(k) = p(k + j)` up to a `Q(n)` unit.
pub fn shift_equivalence(p: &KPoly, q: &KPoly) -> Option<i64> {
    if p.degree() != q.degree() || p.is_zero() || q.is_zero() {
        return None;
    }
    let d = p.degree();
    let (pm, qm) = (p.monic(), q.monic());
    if d == 0 {
        return Some(0);
    }
    let diff = qm.coeff(d - 1).minus(&pm.coeff(d - 1)).over(&RatN::int(d as i64));
    let j = diff.as_integer()?.to_i64()?;
    (shift_k(&pm, j) == qm).then_some(j)
}

/// An irreducible-or-coarser factor `P(m*n + l*k)` with `l > 0`,
/// `gcd(m, l) = 1` and `P` monic over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerLinear {
    pub m: i64,
    pub l: i64,
    pub poly: QPoly,
}

impl IntegerLinear {
    pub fn to_kpoly(&self) -> KPoly {
        let inner = Poly::new(vec![RatN::linear(self.m, 0), RatN::int(self.l)]);
        self.poly.map(RatN::from_rat).compose(&inner)
    }
}

fn bivariate_top(coeffs: &[ZPoly]) -> (usize, QPoly) {
    let mut total = 0;
    for (b, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            total = total.max(b + c.degree());
        }
    }
    let top: Vec<Rat> = (0..=total)
        .map(|b| match coeffs.get(b) {
            Some(c) if total >= b => Rat::from_int(c.coeff(total - b)),
            _ => Rat::zero(),
        })
        .collect();
    (total, QPoly::new(top))
}

/// Content in `n` of `p(n, (z - m*n)/l)` as a monic polynomial in `z`.
fn direction_content(p: &KPoly, m: i64, l: i64) -> QPoly {
    let inner = Poly::new(vec![RatN::linear(-m, 0).over(&RatN::int(l)), RatN::from_rat(&Rat::frac(1, l))]);
    let sub = p.compose(&inner);
    let mut slices: Vec<Vec<Rat>> = Vec::new();
    for (i, c) in sub.coeffs().iter().enumerate() {
        let den = Rat::from_int(c.denom().coeff(0));
        for (a, x) in c.numer().coeffs().iter().enumerate() {
            if slices.len() <= a {
                slices.resize(a + 1, Vec::new());
            }
            let s = &mut slices[a];
            if s.len() <= i {
                s.resize(i + 1, Rat::zero());
            }
            s[i] = &Rat::from_int(x.clone()) / &den;
        }
    }
    let mut g = QPoly::zero();
    for s in slices {
        g = g.gcd(&QPoly::new(s));
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Splits `p` into integer-linear groups, one per direction `(m, l)`, and
/// the remaining cofactor (monic when nonconstant).
pub fn split_integer_linear(p: &KPoly) -> (Vec<IntegerLinear>, KPoly) {
    let mut out = Vec::new();
    if p.degree() == 0 {
        return (out, KPoly::one());
    }
    let (coeffs, _) = integer_form(p);
    let mut rest = super::PolyNK::from_zcoeffs(&coeffs).to_kpoly();
    let (_, top) = bivariate_top(&coeffs);
    for rho in rational_roots(&top) {
        let m = -rho.numer().to_i64().expect("small direction");
        let l = rho.denom().to_i64().expect("small direction");
        let pz = direction_content(&rest, m, l);
        if pz.degree() == 0 {
            continue;
        }
        let f = IntegerLinear { m, l, poly: pz.monic() };
        rest = rest.div_exact(&f.to_kpoly()).expect("direction content divides");
        out.push(f);
        if rest.degree() == 0 {
            break;
        }
    }
    let rest = if rest.degree() == 0 { KPoly::one() } else { rest.monic() };
    (out, rest)
}

/// Squarefree decomposition refined by extraction of k-linear factors.
/// Returns monic pieces with multiplicities; linear pieces come first.
pub fn pieces(p: &KPoly) -> Vec<(KPoly, u32)> {
    let mut lin = Vec::new();
    let mut other = Vec::new();
    for (f, e) in super::kpoly::squarefree_k(p) {
        let (groups, rest) = split_integer_linear(&f);
        for g in groups {
            for z0 in rational_roots(&g.poly) {
                let factor = IntegerLinear { m: g.m, l: g.l, poly: QPoly::linear(-z0) }.to_kpoly().monic();
                lin.push((factor, e));
            }
            let remaining = strip_linear(&g);
            if remaining.degree() > 0 {
                let r = IntegerLinear { m: g.m, l: g.l, poly: remaining }.to_kpoly().monic();
                other.push((r, e));
            }
        }
        if rest.degree() == 1 {
            lin.push((rest, e));
        } else if rest.degree() > 1 {
            other.push((rest, e));
        }
    }
    lin.extend(other);
    lin
}

fn strip_linear(g: &IntegerLinear) -> QPoly {
    let mut poly = g.poly.clone();
    for z0 in rational_roots(&g.poly) {
        poly = poly.div_exact(&QPoly::linear(-z0)).expect("root divides");
    }
    poly
}

/// Partial fraction decomposition over k-linear factors.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub poly: KPoly,
    /// `(root, order, coeff)` meaning `coeff / (k - root)^order`.
    pub terms: Vec<(RatN, u32, RatN)>,
}

pub fn partial_fractions_linear(f: &RatNK) -> Result<PartialFractions> {
    let (num, den) = (f.num(), f.den());
    let (poly, rem) = num.divrem(den);
    let mut factors = Vec::new();
    for (piece, e) in pieces(den) {
        if piece.degree() > 1 {
            return Err(Error::NonLinearDenominator {
                factor: super::kpoly::primitive_nk(&piece).to_string(),
                degree: piece.degree(),
            });
        }
        factors.push((piece, e));
    }
    let mut terms = Vec::new();
    for (i, (lin, e)) in factors.iter().enumerate() {
        let pe = lin.pow(*e);
        let mut cof = KPoly::one();
        for (j, (l2, e2)) in factors.iter().enumerate() {
            if i != j {
                cof = cof.mul_ref(&l2.pow(*e2));
            }
        }
        let c = rem.mul_ref(&cof.inv_mod(&pe).expect("coprime factors")).rem(&pe);
        let root = lin.coeff(0).negated();
        let d = c.taylor_shift(&root);
        for t in 0..*e {
            let coeff = d.coeff(t as usize);
            if !coeff.is_zero() {
                terms.push((root.clone(), e - t, coeff));
            }
        }
    }
    Ok(PartialFractions { poly, terms })
}

/// `P(beta) / Q'(beta)` for a simple root `beta` of a squarefree `Q`.
pub fn lagrange_residue(p: &KPoly, q: &KPoly, beta: &RatN) -> Result<RatN> {
    if !q.eval(beta).is_zero() {
        return Err(Error::NotARoot(beta.to_string()));
    }
    let dq = q.derivative();
    if q.gcd(&dq).degree() > 0 {
        return Err(Error::NotSquarefree);
    }
    Ok(p.eval(beta).over(&dq.eval(beta)))
}
