//! Zero-sum submodules from Nicole's lemma and annihilators of sums that
//! need not be telescopers.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{dependence, search, Coords, HyperModule};
use crate::algebra::factor::{pieces, split_integer_linear};
use crate::algebra::kpoly::integer_form;
use crate::algebra::{Field, KPoly, Poly, PolyNK, Rat, RatN, RatNK};
use crate::ore::OreOp;
use crate::ratsum::{vanishing_sum_check, Block, NicoleDenominator, NicoleNumerator};
use crate::term::{parse, Expr, HyperTerm, Lin};
use crate::{Error, Result};

/// End point of a summation range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    PosInf,
    At(Lin),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumRange {
    pub lo: Bound,
    pub hi: Bound,
}

impl SumRange {
    pub fn all() -> SumRange {
        SumRange { lo: Bound::NegInf, hi: Bound::PosInf }
    }

    /// Whether `[a, b]` lies inside the range at `n = n0`.
    pub fn covers(&self, n0: i64, a: i64, b: i64) -> bool {
        let lo_ok = match self.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::At(l) => l.eval(n0, 0) <= a,
        };
        let hi_ok = match self.hi {
            Bound::PosInf => true,
            Bound::NegInf => false,
            Bound::At(l) => l.eval(n0, 0) >= b,
        };
        lo_ok && hi_ok
    }
}

/// Certification attempt for one complement monomial `k^degree / v * H0`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub degree: usize,
    pub pair: Option<(NicoleNumerator, NicoleDenominator)>,
    pub certified: bool,
    pub valid_from: Option<i64>,
    /// Degree slack `|poles| - 2 - deg P` when it does not depend on `n`.
    pub slack: Option<i64>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct ZeroSumCertificate {
    pub basis_degree_bound: Option<i64>,
    pub witnesses: Vec<Witness>,
    /// `S_n` maps the certified span into itself modulo `Delta_k`.
    pub closure: bool,
    /// Rows: images `S_n(k^i/v H0)` over the certified monomials.
    pub closure_matrix: Vec<Vec<RatN>>,
    pub n_min: Option<i64>,
}

impl ZeroSumCertificate {
    pub fn certified_degrees(&self) -> Vec<usize> {
        self.witnesses.iter().filter(|w| w.certified).map(|w| w.degree).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.certified_degrees().is_empty()
    }
}

fn lin_expr(l: Lin) -> Expr {
    parse(&l.to_string()).expect("linear forms print parseably")
}

fn ratn_expr(c: &RatN) -> Expr {
    parse(&c.to_string()).expect("rational functions print parseably")
}

/// k-linear integer-linear factors `L` with exponents, a leftover
/// polynomial and a `Q(n)` content.
struct Split {
    content: RatN,
    linear: Vec<(Lin, i64)>,
    rest: KPoly,
}

fn split_linear(p: &KPoly, sign: i64) -> Option<Split> {
    let mut linear = Vec::new();
    let mut rest = KPoly::one();
    let mut prod = KPoly::one();
    for (piece, e) in pieces(p) {
        let mut as_lin = None;
        if piece.degree() == 1 {
            let (groups, r) = split_integer_linear(&piece);
            if let ([g], 0) = (groups.as_slice(), r.degree()) {
                let c = g.poly.coeff(0);
                if c.is_integer() && g.poly.degree() == 1 {
                    as_lin = Some((Lin::new(g.m, g.l, c.to_i64()?), g.to_kpoly()));
                }
            }
        }
        match as_lin {
            Some((l, kp)) => {
                linear.push((l, sign * e as i64));
                prod = prod.mul_ref(&kp.pow(e));
            }
            None => {
                rest = rest.mul_ref(&piece.pow(e));
                prod = prod.mul_ref(&piece.pow(e));
            }
        }
    }
    let content = p.lc().over(&prod.lc());
    Some(Split { content, linear, rest })
}

/// Candidate pairs `(P, Q)` whose residue profile could be `t`.
pub fn nicole_candidates(t: &HyperTerm) -> Vec<(NicoleNumerator, NicoleDenominator)> {
    let Some(form) = t.form() else { return Vec::new() };
    let (Some(num), Some(den)) = (split_linear(form.rational.num(), 1), split_linear(form.rational.den(), -1)) else {
        return Vec::new();
    };
    if den.rest.degree() > 0 {
        return Vec::new();
    }
    let mut scale: Vec<Expr> = vec![ratn_expr(&num.content.over(&den.content))];
    // geometric factors: only (-1)^(odd k) may depend on k
    let mut parity = 0i64;
    for (c, l) in &form.geometric {
        if l.k != 0 {
            if *c != Rat::from(-1) {
                return Vec::new();
            }
            parity += l.k;
        }
        let n_part = Lin::new(l.n, 0, l.c);
        scale.push(Expr::Pow(Box::new(ratn_expr(&RatN::from_rat(c))), Box::new(lin_expr(n_part))));
    }
    if parity.rem_euclid(2) != 1 {
        return Vec::new();
    }
    let (poly_rest, rest_content) = {
        let (coeffs, c) = integer_form(&num.rest);
        (PolyNK::from_zcoeffs(&coeffs), c)
    };
    scale.push(ratn_expr(&rest_content));
    let base = {
        let kp = poly_rest.to_kpoly().compose(&Poly::new(vec![RatN::zero(), RatN::int(-1)]));
        PolyNK::from_kpoly(&kp)
    };

    let mut lins = num.linear.clone();
    lins.extend(den.linear.iter().cloned());
    let flips = lins.len().min(10);
    let mut out = Vec::new();
    for mask in 0u32..(1 << flips) {
        let mut facts = form.factorials.clone();
        let mut sign = 1i64;
        for (i, (l, e)) in lins.iter().enumerate() {
            // L = L!/(L-1)!  or  L = -(-L)!/(-L-1)!
            let flip = i < flips && mask & (1 << i) != 0;
            let (top, bottom) = if flip {
                if e.rem_euclid(2) == 1 {
                    sign = -sign;
                }
                (l.scale(-1), l.scale(-1).sub(Lin::constant(1)))
            } else {
                (*l, l.sub(Lin::constant(1)))
            };
            *facts.entry(top).or_insert(0) += e;
            *facts.entry(bottom).or_insert(0) -= e;
        }
        facts.retain(|_, e| *e != 0);
        for cand in assemble(&facts, sign, &scale, &base) {
            out.push(cand);
        }
    }
    out
}

fn pairs(nums: &[Lin], dens: &[Lin], slope: i64) -> Option<Vec<Block>> {
    if nums.len() != dens.len() {
        return None;
    }
    let key = |l: &Lin| (l.n, l.c);
    let mut a = nums.to_vec();
    let mut b = dens.to_vec();
    a.sort_by_key(key);
    b.sort_by_key(key);
    let mut blocks: Vec<Block> = Vec::new();
    for (top, bottom) in a.iter().zip(&b) {
        let len = top.sub(*bottom);
        if len.n < 0 || (len.n == 0 && len.c < 0) {
            return None;
        }
        if len.n == 0 && len.c == 0 {
            continue;
        }
        let blk = Block { lo: Lin::new(bottom.n, 0, bottom.c + 1), hi: Lin::new(top.n, 0, top.c), s: -slope, t: 1, c: 0, e: 1 };
        match blocks.iter_mut().find(|x| x.lo == blk.lo && x.hi == blk.hi && x.s == blk.s) {
            Some(x) => x.e += 1,
            None => blocks.push(blk),
        }
    }
    Some(blocks)
}

fn expand(facts: &BTreeMap<Lin, i64>, slope: i64) -> (Vec<Lin>, Vec<Lin>) {
    let mut nums = Vec::new();
    let mut dens = Vec::new();
    for (l, e) in facts.iter().filter(|(l, _)| l.k == slope) {
        for _ in 0..e.abs() {
            if *e > 0 {
                nums.push(*l);
            } else {
                dens.push(*l);
            }
        }
    }
    (nums, dens)
}

fn assemble(facts: &BTreeMap<Lin, i64>, sign: i64, scale: &[Expr], base: &PolyNK) -> Vec<(NicoleNumerator, NicoleDenominator)> {
    let mut out = Vec::new();
    let lo_choices: Vec<Lin> = facts.iter().filter(|(l, e)| l.k == 1 && **e < 0).map(|(l, _)| *l).collect();
    let hi_choices: Vec<Lin> = facts.iter().filter(|(l, e)| l.k == -1 && **e < 0).map(|(l, _)| *l).collect();
    for lo_f in &lo_choices {
        for hi_f in &hi_choices {
            let mut f = facts.clone();
            *f.get_mut(lo_f).expect("present") += 1;
            *f.get_mut(hi_f).expect("present") += 1;
            f.retain(|_, e| *e != 0);
            let lo = Lin::new(-lo_f.n, 0, -lo_f.c);
            let hi = Lin::new(hi_f.n, 0, hi_f.c);
            let slopes: Vec<i64> = {
                let mut s: Vec<i64> = f.keys().map(|l| l.k).filter(|&k| k != 0).collect();
                s.sort_unstable();
                s.dedup();
                s
            };
            let mut blocks = Vec::new();
            let mut ok = true;
            for s in slopes {
                let (nums, dens) = expand(&f, s);
                match pairs(&nums, &dens, s) {
                    Some(b) => blocks.extend(b),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let mut sc: Vec<Expr> = scale.to_vec();
            for (l, e) in f.iter().filter(|(l, _)| l.k == 0) {
                let fact = Expr::Factorial(Box::new(lin_expr(*l)));
                sc.push(Expr::Pow(Box::new(fact), Box::new(Expr::Int(BigInt::from(*e)))));
            }
            // (-1)^k from the term against (-1)^(k-lo) from Q'(-k)
            sc.push(Expr::Pow(Box::new(Expr::Int(BigInt::from(-1))), Box::new(lin_expr(lo))));
            if sign < 0 {
                sc.push(Expr::Int(BigInt::from(-1)));
            }
            let scale_expr =
                sc.into_iter().reduce(|a, b| Expr::Mul(Box::new(a), Box::new(b))).expect("nonempty scale");
            out.push((
                NicoleNumerator { scale: scale_expr, base: base.clone(), blocks },
                NicoleDenominator { lo, hi },
            ));
        }
    }
    out
}

/// Exact oracle: at `n0`, the residues of `P/Q` sum to zero, agree with
/// `t` where it is defined, and the pole range lies in `range`.
fn oracle(t: &HyperTerm, p: &NicoleNumerator, q: &NicoleDenominator, range: &SumRange, n0: i64) -> bool {
    let (lo, hi) = (q.lo.eval(n0, 0), q.hi.eval(n0, 0));
    if !range.covers(n0, lo, hi) {
        return false;
    }
    let mut total = Rat::zero();
    for k0 in lo..=hi {
        let Some(a) = crate::ratsum::residue_value(p, q, n0, k0) else { return false };
        if let Some(tv) = t.eval_int(n0, k0) {
            if tv != a {
                return false;
            }
        }
        total = total.plus(&a);
    }
    // outside the pole range the term must vanish where it is defined
    for k0 in (lo - 6..lo).chain(hi + 1..=hi + 6) {
        if range.covers(n0, k0, k0) {
            if let Some(tv) = t.eval_int(n0, k0) {
                if !tv.is_zero() {
                    return false;
                }
            }
        }
    }
    total.is_zero()
}

fn certify_one(
    t: &HyperTerm,
    degree: usize,
    range: &SumRange,
    cands: Vec<(NicoleNumerator, NicoleDenominator)>,
) -> Witness {
    let mut best = Witness { degree, pair: None, certified: false, valid_from: None, slack: None, note: "no candidate".into() };
    for (p, q) in cands {
        match vanishing_sum_check(t, &p, &q) {
            Ok(v) => {
                let slack = (v.gap.n == 0).then_some(v.gap.c);
                let mut w = Witness { degree, pair: Some((p, q)), certified: false, valid_from: v.valid_from, slack, note: String::new() };
                match v.valid_from {
                    Some(n0) => {
                        let q = &w.pair.as_ref().expect("set").1;
                        let p = &w.pair.as_ref().expect("set").0;
                        if (n0..n0 + 9).all(|n| oracle(t, p, q, range, n)) {
                            w.certified = true;
                            w.note = "certified".into();
                            return w;
                        }
                        w.note = "exact oracle failed".into();
                    }
                    None => w.note = "degree condition fails".into(),
                }
                if best.pair.is_none() {
                    best = w;
                }
            }
            Err(e) => {
                if best.pair.is_none() {
                    best.note = e.to_string();
                }
            }
        }
    }
    best
}

/// Certifies complement monomials `k^i / v * H0` as zero-sum elements.
pub fn zero_sum_certify(
    module: &HyperModule,
    range: &SumRange,
    candidates: &[(usize, NicoleNumerator, NicoleDenominator)],
) -> Result<ZeroSumCertificate> {
    let h0 = module.h0()?;
    let v = RatNK::from_poly(module.v().clone());
    let mut witnesses = Vec::new();
    for &i in module.reducer().wk_basis() {
        let mono = RatNK::from_poly(KPoly::monomial(RatN::one(), i));
        let t = h0.scaled(&mono.div(&v))?;
        let supplied: Vec<_> = candidates.iter().filter(|(d, _, _)| *d == i).map(|(_, p, q)| (p.clone(), *q)).collect();
        let cands = if supplied.is_empty() { nicole_candidates(&t) } else { supplied };
        witnesses.push(certify_one(&t, i, range, cands));
    }
    let certified: Vec<usize> = witnesses.iter().filter(|w| w.certified).map(|w| w.degree).collect();
    let mut closure = true;
    let mut closure_matrix = Vec::new();
    for &i in &certified {
        let f = RatNK::new(KPoly::monomial(RatN::one(), i), module.v().clone());
        let res = module.reduce(&module.shift_n(&f));
        let inside = !res.has_polar_part() && (0..=res.p.degree()).all(|d| res.p.coeff(d).is_zero() || certified.contains(&d));
        closure &= inside;
        closure_matrix.push(certified.iter().map(|&d| res.p.coeff(d)).collect());
    }
    let n_min = witnesses.iter().filter(|w| w.certified).filter_map(|w| w.valid_from).max();
    let basis_degree_bound = witnesses.iter().find(|w| w.certified).and_then(|w| w.slack.map(|s| w.degree as i64 + s));
    Ok(ZeroSumCertificate { basis_degree_bound, witnesses, closure, closure_matrix, n_min })
}

/// Least-order `T` with `T(H)` in the certified zero-sum span, searched
/// below the order of the minimal telescoper.
pub fn minimal_annihilator(module: &HyperModule, zcert: &ZeroSumCertificate) -> Result<OreOp> {
    let f = module.shell().clone();
    let basis = module.reducer().wk_basis().to_vec();
    let tel = search(module, &f, Coords::All, super::ORDER_BOUND)
        .ok_or_else(|| Error::NoTelescoper(format!("none up to order {}", super::ORDER_BOUND)))?;
    let order = tel.0.order();
    let skip = zcert.certified_degrees();
    let seen = tel.1;
    for d in 0..order {
        if let Some(op) = dependence(&seen[..=d], &basis, Coords::Except(&skip)) {
            return Ok(op.canonical());
        }
    }
    Err(Error::NoOperatorFound(order))
}
