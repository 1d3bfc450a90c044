//! Direct prescopers for multipliers `q / (m n + l k + alpha)^lambda`.

use num_traits::ToPrimitive;

use super::{HyperModule, PrescoperResult};
use crate::algebra::factor::{pieces, split_integer_linear};
use crate::algebra::{Field, KPoly, Poly, Rat, RatN, RatNK};
use crate::apred::strongly_prime;
use crate::ore::OreOp;
use crate::{Error, Result};

/// `q / (m n + l k + alpha)^lambda` with `deg_k q < lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialForm {
    pub q: KPoly,
    pub m: i64,
    pub l: i64,
    pub alpha: Rat,
    pub lambda: u32,
}

impl SpecialForm {
    /// `m n + l k + alpha`.
    pub fn linear(&self) -> KPoly {
        Poly::new(vec![
            RatN::linear(self.m, 0).plus(&RatN::from_rat(&self.alpha)),
            RatN::int(self.l),
        ])
    }

    pub fn multiplier(&self) -> RatNK {
        RatNK::new(self.q.clone(), self.linear().pow(self.lambda))
    }

    /// Reads a multiplier whose denominator is a power of one k-linear
    /// integer-linear form.
    pub fn from_multiplier(f: &RatNK) -> Result<SpecialForm> {
        let den = f.den();
        let ps = pieces(den);
        let [(lin, lambda)] = ps.as_slice() else {
            return Err(Error::PreconditionViolated(format!("denominator {den:?} is not a power of a linear form")));
        };
        if lin.degree() != 1 {
            return Err(Error::PreconditionViolated(format!("denominator {den:?} is not linear in k")));
        }
        let (groups, rest) = split_integer_linear(lin);
        let g = match (groups.as_slice(), rest.degree()) {
            ([g], 0) if g.poly.degree() == 1 => g.clone(),
            _ => return Err(Error::PreconditionViolated(format!("{lin:?} is not integer-linear"))),
        };
        let alpha = g.poly.coeff(0);
        // f = num / (c * lin^lambda), lin monic; l*lin = m n + l k + alpha
        let scale = den.lc().times(&RatN::int(g.l).pow(-(*lambda as i64)));
        let q = f.num().scale(&scale.inv());
        Ok(SpecialForm { q, m: g.m, l: g.l, alpha, lambda: *lambda })
    }

    fn check(&self, module: &HyperModule) -> Result<()> {
        if self.l <= 0 || self.lambda == 0 {
            return Err(Error::PreconditionViolated("need l > 0 and lambda > 0".into()));
        }
        if self.q.is_zero() {
            return Err(Error::ZeroTerm);
        }
        if self.q.degree() >= self.lambda as usize {
            return Err(Error::PreconditionViolated(format!("deg_k q = {} is not below lambda = {}", self.q.degree(), self.lambda)));
        }
        let lin = self.linear();
        if self.q.rem(&lin).is_zero() {
            return Err(Error::PreconditionViolated("q shares a factor with the linear form".into()));
        }
        if !strongly_prime(&lin, module.kernel()) {
            return Err(Error::PreconditionViolated("linear form is not strongly prime with the kernel".into()));
        }
        Ok(())
    }
}

/// `S_n^l S_k^{-m}(q H0) / (q H0)` evaluated at `k = -(m n + alpha)/l`.
fn leading_ratio(module: &HyperModule, sf: &SpecialForm) -> Result<RatN> {
    let q = RatNK::from_poly(sf.q.clone());
    let gxn = q.shift_n(1).div(&q).mul(module.g0n());
    let gxk = q.shift_k(1).div(&q).mul(module.kernel());
    let mut g = RatNK::one();
    for i in 0..sf.l {
        g = g.mul(&gxn.shift_n(i));
    }
    let mut h = g.shift_k(-sf.m);
    if sf.m >= 0 {
        for i in 1..=sf.m {
            h = h.div(&gxk.shift_k(-i));
        }
    } else {
        for i in 0..-sf.m {
            h = h.mul(&gxk.shift_k(i));
        }
    }
    let at = RatN::linear(-sf.m, 0).minus(&RatN::from_rat(&sf.alpha)).over(&RatN::int(sf.l));
    h.eval_k(&at).ok_or_else(|| Error::PreconditionViolated(format!("h has a pole at k = {at}")))
}

/// Minimal prescoper of `sf * H0` by the direct method: a product of
/// first-order factors in `S_n^l`.
pub fn direct_prescoper(module: &HyperModule, sf: &SpecialForm) -> Result<PrescoperResult> {
    let op = direct_op(module, sf)?;
    let f = sf.multiplier();
    let res = module.reduce(&module.apply(&op, &f));
    if res.has_polar_part() {
        return Err(Error::PreconditionViolated("direct prescoper leaves a polar part".into()));
    }
    Ok(PrescoperResult { op, p: res.p, v: module.v().clone() })
}

fn direct_op(module: &HyperModule, sf: &SpecialForm) -> Result<OreOp> {
    sf.check(module)?;
    let r = leading_ratio(module, sf)?;
    let l = sf.l.to_usize().expect("positive l");
    let mut coeffs = vec![RatN::zero(); l + 1];
    coeffs[0] = r.negated();
    coeffs[l] = RatN::one();
    let r1 = OreOp::new(coeffs);
    if sf.lambda == 1 {
        return Ok(r1);
    }
    let rest = module.reduce(&module.apply(&r1, &sf.multiplier()));
    if !rest.has_polar_part() {
        return Ok(r1);
    }
    let next = SpecialForm::from_multiplier(&rest.ab())?;
    if next.lambda >= sf.lambda || next.m != sf.m || next.l != sf.l {
        return Err(Error::PreconditionViolated("remainder left the filtration".into()));
    }
    Ok(direct_op(module, &next)?.mul(&r1))
}
