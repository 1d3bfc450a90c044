//! Rational summation in `k` over `Q(n)`: Abramov decomposition, discrete
//! residues and vanishing sums from Nicole's lemma.

use std::collections::BTreeMap;

use crate::algebra::factor::partial_fractions_linear;
use crate::algebra::{Field, KPoly, Poly, PolyNK, Rat, RatN, RatNK};
use crate::apred::Reducer;
use crate::term::{eval_expr, lin_ratnk, Expr, FactorialForm, HyperTerm, Lin, Var};
use crate::{Error, Result};

/// `f = S_k(g) - g + r` with `r` proper and shift-free.
#[derive(Clone, Debug, PartialEq)]
pub struct AbramovDecomp {
    pub g: RatNK,
    pub r: RatNK,
}

/// Sum of the partial-fraction coefficients of order `multiplicity` along
/// the orbit `orbit_rep + Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResidue {
    pub orbit_rep: RatN,
    pub multiplicity: u32,
    pub residue: RatN,
}

pub fn abramov_reduce(f: &RatNK) -> AbramovDecomp {
    let red = Reducer::new(&RatNK::one()).expect("trivial kernel");
    let res = red.reduce(f);
    debug_assert!(res.p.is_zero(), "polynomials are summable");
    let out = AbramovDecomp { g: res.certificate(), r: res.ab() };
    assert!(out.g.shift_k(1).sub(&out.g).add(&out.r) == *f, "Abramov identity");
    out
}

fn orbit_normal(root: &RatN) -> RatN {
    let shift = root.polynomial_constant_term().floor();
    root.minus(&RatN::from_rat(&Rat::from_int(shift)))
}

pub fn discrete_residues(f: &RatNK) -> Result<Vec<OrbitResidue>> {
    let pf = partial_fractions_linear(f)?;
    let mut acc: Vec<OrbitResidue> = Vec::new();
    for (root, order, coeff) in pf.terms {
        let rep = orbit_normal(&root);
        match acc.iter_mut().find(|o| o.orbit_rep == rep && o.multiplicity == order) {
            Some(o) => o.residue = o.residue.plus(&coeff),
            None => acc.push(OrbitResidue { orbit_rep: rep, multiplicity: order, residue: coeff }),
        }
    }
    acc.retain(|o| !o.residue.is_zero());
    acc.sort_by_key(|o| (o.orbit_rep.to_string(), o.multiplicity));
    Ok(acc)
}

pub fn is_summable(f: &RatNK) -> bool {
    abramov_reduce(f).r.is_zero()
}

/// Nicole's lemma for `P / prod (k + beta_i)`: true iff `deg_k P <= |betas| - 2`.
pub fn nicole_certify(p: &PolyNK, betas: &[RatN]) -> Result<bool> {
    for (i, a) in betas.iter().enumerate() {
        for b in &betas[i + 1..] {
            let d = a.minus(b);
            if d.is_zero() || d.as_integer().is_none() {
                return Err(Error::BadOrbit(format!("{a} and {b}")));
            }
        }
    }
    if p.is_zero() {
        return Ok(true);
    }
    Ok((p.deg_k() as i64) <= betas.len() as i64 - 2)
}

/// `prod_{i=lo}^{hi} (s*x + t*i + c)^e` with `lo`, `hi` integer-linear in `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub lo: Lin,
    pub hi: Lin,
    pub s: i64,
    pub t: i64,
    pub c: i64,
    pub e: u32,
}

impl Block {
    /// Factor with index `i` at `x = -k`.
    fn factor(&self, i: Lin) -> Lin {
        Lin::new(self.t * i.n, self.t * i.k - self.s, self.t * i.c + self.c)
    }

    /// `prod_{i=lo+da}^{hi+db} / prod_{i=lo}^{hi}` of the factors at `x = -k`.
    fn ratio(&self, da: i64, db: i64) -> RatNK {
        let f = |j: i64, end: Lin| lin_ratnk(self.factor(end.add(Lin::constant(j))));
        let mut acc = RatNK::one();
        for j in 1..=db {
            acc = acc.mul(&f(j, self.hi));
        }
        for j in 0..-db {
            acc = acc.div(&f(-j, self.hi));
        }
        for j in 0..da {
            acc = acc.div(&f(j, self.lo));
        }
        for j in 1..=-da {
            acc = acc.mul(&f(-j, self.lo));
        }
        acc.pow(self.e as i64)
    }

    fn value(&self, n0: i64, k0: i64) -> Rat {
        let (a, b) = (self.lo.eval(n0, 0), self.hi.eval(n0, 0));
        let mut acc = Rat::one();
        for i in a..=b {
            acc = acc.times(&Rat::from(self.t * i + self.c - self.s * k0));
        }
        acc.pow(self.e as i64)
    }
}

/// Numerator `scale(n) * base(n, x) * blocks`; the `k` slot of `base`
/// holds the variable `x`.
#[derive(Clone, Debug)]
pub struct NicoleNumerator {
    pub scale: Expr,
    pub base: PolyNK,
    pub blocks: Vec<Block>,
}

/// Denominator `prod_{i=lo}^{hi} (x + i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NicoleDenominator {
    pub lo: Lin,
    pub hi: Lin,
}

/// Outcome of a vanishing-sum check: when `certified`, the sum of the term
/// over `k` vanishes for every `n >= valid_from`.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingSum {
    pub certified: bool,
    pub valid_from: Option<i64>,
    pub anchor: (i64, i64),
    /// `|poles| - 2 - deg P` as a form in `n`.
    pub gap: Lin,
}

fn n_only(l: &Lin, what: &str) -> Result<()> {
    if l.k != 0 {
        return Err(Error::InvalidInput(format!("{what} bound {l} depends on k")));
    }
    Ok(())
}

/// Least `n >= 0` with `l(n) >= 0` for all larger `n`, `None` if `l` decreases.
fn eventually_nonneg(l: &Lin) -> Option<i64> {
    match l.n.signum() {
        0 => (l.c >= 0).then_some(0),
        1 => Some((-l.c).div_euclid(l.n) + i64::from((-l.c).rem_euclid(l.n) != 0)).map(|n| n.max(0)),
        _ => None,
    }
}

/// `base(n, -k)` as a polynomial in `k`.
fn base_at_minus_k(base: &PolyNK) -> KPoly {
    base.to_kpoly().compose(&Poly::new(vec![RatN::zero(), RatN::int(-1)]))
}

/// Residue `alpha_k = P(-k)/Q'(-k)` of `P/Q` at `x = -k`, exact.
pub fn residue_value(p: &NicoleNumerator, q: &NicoleDenominator, n0: i64, k0: i64) -> Option<Rat> {
    let (lo, hi) = (q.lo.eval(n0, 0), q.hi.eval(n0, 0));
    if k0 < lo || k0 > hi {
        return None;
    }
    let mut acc = eval_expr(&p.scale, n0, 0)?;
    acc = acc.times(&p.base.eval(&Rat::from(n0), &Rat::from(-k0)));
    for b in &p.blocks {
        acc = acc.times(&b.value(n0, k0));
    }
    let mut dq = Rat::one();
    for i in lo..=hi {
        if i != k0 {
            dq = dq.times(&Rat::from(i - k0));
        }
    }
    Some(acc.over(&dq))
}

/// Shift quotients of `alpha_k` in `n` and in `k`.
fn alpha_quotients(p: &NicoleNumerator, q: &NicoleDenominator) -> Result<(RatNK, RatNK)> {
    let scale = HyperTerm::from_expr(p.scale.clone())?;
    if !scale.gk().is_one() {
        return Err(Error::InvalidInput(format!("scale {} depends on k", p.scale)));
    }
    let base = base_at_minus_k(&p.base);
    let base_r = RatNK::from_poly(base.clone());
    let mut gn = scale.gn().clone();
    let mut gk = RatNK::one();
    if !base.is_zero() {
        gn = gn.mul(&base_r.shift_n(1).div(&base_r));
        gk = gk.mul(&base_r.shift_k(1).div(&base_r));
    }
    for b in &p.blocks {
        n_only(&b.lo, "block")?;
        n_only(&b.hi, "block")?;
        let m = match (b.s, b.t) {
            (0, _) => 0,
            (s, t) if t != 0 && s % t == 0 => s / t,
            (s, t) => return Err(Error::InvalidInput(format!("block step {t} does not divide slope {s}"))),
        };
        gk = gk.mul(&b.ratio(-m, -m));
        gn = gn.mul(&b.ratio(b.lo.n, b.hi.n));
    }
    // 1 / Q'(-k) = (-1)^(k-lo) / ((k-lo)! (hi-k)!)
    let low = Lin::new(-q.lo.n, 1, -q.lo.c);
    let high = Lin::new(q.hi.n, -1, q.hi.c);
    let mut factorials = BTreeMap::new();
    *factorials.entry(low).or_insert(0) -= 1;
    *factorials.entry(high).or_insert(0) -= 1;
    factorials.retain(|_, e| *e != 0);
    let form = FactorialForm { rational: RatNK::one(), factorials, geometric: vec![(Rat::from(-1), low)] };
    gn = gn.mul(&form.quotient(Var::N));
    gk = gk.mul(&form.quotient(Var::K));
    Ok((gn, gk))
}

/// Symbolic degree of the numerator in `x`.
fn numerator_degree(p: &NicoleNumerator) -> Lin {
    let mut d = Lin::constant(if p.base.is_zero() { 0 } else { p.base.deg_k() as i64 });
    for b in &p.blocks {
        if b.s != 0 {
            d = d.add(b.hi.sub(b.lo).add(Lin::constant(1)).scale(b.e as i64));
        }
    }
    d
}

/// Checks that `t(n, k)` is the residue profile of `P/Q` and applies Nicole's lemma.
pub fn vanishing_sum_check(t: &HyperTerm, p: &NicoleNumerator, q: &NicoleDenominator) -> Result<VanishingSum> {
    n_only(&q.lo, "denominator")?;
    n_only(&q.hi, "denominator")?;
    let (gn, gk) = alpha_quotients(p, q)?;
    if gk != *t.gk() {
        return Err(Error::MismatchedTerm(format!("k-quotient {gk} differs from {}", t.gk())));
    }
    if gn != *t.gn() {
        return Err(Error::MismatchedTerm(format!("n-quotient {gn} differs from {}", t.gn())));
    }

    let mut constraints = vec![q.hi.sub(q.lo)];
    for b in &p.blocks {
        constraints.push(b.hi.sub(b.lo).add(Lin::constant(1)));
    }
    let mut start = Some(0i64);
    for c in &constraints {
        start = match (start, eventually_nonneg(c)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    let Some(from) = start else {
        return Err(Error::BadOrbit("pole range is empty for large n".into()));
    };
    let gap = q.hi.sub(q.lo).sub(Lin::constant(1)).sub(numerator_degree(p));
    let valid_from = eventually_nonneg(&gap).map(|g| g.max(from));

    let mut anchor = None;
    'search: for n0 in valid_from.unwrap_or(from)..valid_from.unwrap_or(from) + 8 {
        for k0 in q.lo.eval(n0, 0)..=q.hi.eval(n0, 0) {
            let Some(a) = residue_value(p, q, n0, k0) else { continue };
            if a.is_zero() {
                continue;
            }
            let Some(tv) = t.eval_int(n0, k0) else { continue };
            if tv != a {
                return Err(Error::MismatchedTerm(format!("value {tv} at (n, k) = ({n0}, {k0}), expected {a}")));
            }
            anchor = Some((n0, k0));
            break 'search;
        }
    }
    let Some(anchor) = anchor else {
        return Err(Error::MismatchedTerm("no nonzero anchor value on the support".into()));
    };
    Ok(VanishingSum { certified: valid_from.is_some(), valid_from, anchor, gap })
}

/// Exact `sum_{k=lo}^{hi} t(n0, k)`, skipping points where `t` is undefined.
pub fn finite_sum(t: &HyperTerm, n0: i64, lo: i64, hi: i64) -> Rat {
    (lo..=hi).filter_map(|k| t.eval_int(n0, k)).fold(Rat::zero(), |a, b| a.plus(&b))
}

#[cfg(test)]
mod tests;
