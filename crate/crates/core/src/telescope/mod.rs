//! Minimal telescopers, prescopers and annihilators of definite sums of
//! hypergeometric terms, through residual forms.

mod direct;
mod zerosum;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::algebra::factor::{pieces, shift_equivalence, split_integer_linear};
use crate::algebra::linalg::Matrix;
use crate::algebra::{Field, KPoly, PolyNK, QPoly, Rat, RatN, RatNK};
use crate::apred::{rational_normal_form, Reducer, Residual};
use crate::ore::OreOp;
use crate::term::HyperTerm;
use crate::{Error, Result};

pub use direct::{direct_prescoper, SpecialForm};
pub use zerosum::{minimal_annihilator, nicole_candidates, zero_sum_certify, Bound, SumRange, Witness, ZeroSumCertificate};

/// Order at which the telescoper search gives up.
pub const ORDER_BOUND: usize = 24;

/// The module generated by `H = shell * H0` over `Q(n,k)`, together with
/// the reduction engine of the kernel `K = S_k(H0)/H0`.
#[derive(Debug)]
pub struct HyperModule {
    term: HyperTerm,
    shell: RatNK,
    g0n: RatNK,
    reducer: Reducer,
}

impl HyperModule {
    pub fn new(term: &HyperTerm) -> Result<HyperModule> {
        let rnf = rational_normal_form(term.gk());
        HyperModule::build(term, rnf.shell)
    }

    /// Uses a prescribed shell; the induced kernel must be shift-reduced.
    pub fn with_shell(term: &HyperTerm, shell: &RatNK) -> Result<HyperModule> {
        if shell.is_zero() {
            return Err(Error::ZeroTerm);
        }
        HyperModule::build(term, shell.clone())
    }

    fn build(term: &HyperTerm, shell: RatNK) -> Result<HyperModule> {
        let kernel = term.gk().mul(&shell).div(&shell.shift_k(1));
        let g0n = term.gn().mul(&shell).div(&shell.shift_n(1));
        let reducer = Reducer::new(&kernel)?;
        Ok(HyperModule { term: term.clone(), shell, g0n, reducer })
    }

    pub fn term(&self) -> &HyperTerm {
        &self.term
    }

    pub fn shell(&self) -> &RatNK {
        &self.shell
    }

    pub fn kernel(&self) -> &RatNK {
        self.reducer.kernel()
    }

    pub fn v(&self) -> &KPoly {
        self.reducer.v()
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    /// `S_n(H0)/H0`.
    pub fn g0n(&self) -> &RatNK {
        &self.g0n
    }

    /// `H0 = H / shell` as a term.
    pub fn h0(&self) -> Result<HyperTerm> {
        self.term.scaled(&self.shell.inv())
    }

    /// Multiplier of `S_n(f * H0)`.
    pub fn shift_n(&self, f: &RatNK) -> RatNK {
        f.shift_n(1).mul(&self.g0n)
    }

    /// Multiplier of `L(f * H0)`.
    pub fn apply(&self, op: &OreOp, f: &RatNK) -> RatNK {
        let mut acc = RatNK::zero();
        let mut cur = f.clone();
        for (i, c) in op.coeffs().iter().enumerate() {
            if i > 0 {
                cur = self.shift_n(&cur);
            }
            if !c.is_zero() {
                acc = acc.add(&cur.scale(c));
            }
        }
        acc
    }

    pub fn reduce(&self, f: &RatNK) -> Residual {
        self.reducer.reduce(f)
    }

    /// Residual of the multiplier `f`, then of its images under `S_n`.
    pub fn shifts(&self, f: &RatNK) -> ShiftSequence<'_> {
        ShiftSequence { module: self, start: Some(f.clone()), prev: None }
    }
}

/// Iterator of the residuals of `S_n^d(f * H0)`, `d = 0, 1, ...`, each
/// obtained by shifting and reducing the previous residual.
pub struct ShiftSequence<'a> {
    module: &'a HyperModule,
    start: Option<RatNK>,
    prev: Option<Residual>,
}

impl Iterator for ShiftSequence<'_> {
    type Item = Residual;

    fn next(&mut self) -> Option<Residual> {
        let f = match self.start.take() {
            Some(f) => f,
            None => self.module.shift_n(&self.prev.as_ref()?.multiplier(self.module.v())),
        };
        let res = self.module.reduce(&f);
        self.prev = Some(res.clone());
        Some(res)
    }
}

/// Which coordinates of a residual enter a dependence.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Coords<'a> {
    All,
    Polar,
    /// Everything except the monomials `k^i` for listed `i`.
    Except(&'a [usize]),
}

/// Columns: residuals; rows: coefficients of the polar parts over common
/// target powers, then the selected coefficients of `p`.
pub(crate) fn residual_matrix(res: &[Residual], basis: &[usize], coords: Coords<'_>) -> Matrix<RatN> {
    let mut targets: Vec<(KPoly, u32)> = Vec::new();
    for r in res {
        for part in &r.parts {
            match targets.iter_mut().find(|(t, _)| *t == part.target) {
                Some((_, m)) => *m = (*m).max(part.mult),
                None => targets.push((part.target.clone(), part.mult)),
            }
        }
    }
    let mut rows: Vec<Vec<RatN>> = Vec::new();
    for (t, mm) in &targets {
        let width = t.degree() * *mm as usize;
        let mut block = vec![vec![RatN::zero(); res.len()]; width];
        for (j, r) in res.iter().enumerate() {
            for part in r.parts.iter().filter(|p| p.target == *t) {
                let num = part.num.mul_ref(&t.pow(mm - part.mult));
                for (i, row) in block.iter_mut().enumerate() {
                    row[j] = row[j].plus(&num.coeff(i));
                }
            }
        }
        rows.extend(block);
    }
    let keep: Vec<usize> = match coords {
        Coords::All => basis.to_vec(),
        Coords::Polar => Vec::new(),
        Coords::Except(skip) => basis.iter().copied().filter(|i| !skip.contains(i)).collect(),
    };
    for i in keep {
        rows.push(res.iter().map(|r| r.p.coeff(i)).collect());
    }
    if rows.is_empty() {
        return Matrix::zeros(0, res.len());
    }
    Matrix::from_rows(rows)
}

/// Monic operator from a dependence of the first `res.len()` residuals in
/// which the last one occurs, if any.
pub(crate) fn dependence(res: &[Residual], basis: &[usize], coords: Coords<'_>) -> Option<OreOp> {
    let d = res.len() - 1;
    let m = residual_matrix(res, basis, coords);
    let null = if m.rows() == 0 {
        let mut e = vec![RatN::zero(); res.len()];
        e[d] = RatN::one();
        vec![e]
    } else {
        m.nullspace_qn()
    };
    let e = null.into_iter().find(|e| !e[d].is_zero())?;
    let lead = e[d].clone();
    Some(OreOp::new(e.iter().map(|c| c.over(&lead)).collect()))
}

pub fn monic(op: &OreOp) -> OreOp {
    op.scale_left(&op.lc().inv())
}

/// The residual form of a term: `H = Delta_k(r H0) + (a/b + p/v) H0`.
pub fn residual_of(module: &HyperModule) -> Residual {
    module.reduce(module.shell())
}

/// `m`, `l` and `P` with a factor group `prod S_k^mu(P(m n + l k + j))^lambda`,
/// recorded as offsets `(j, mu, lambda)` with `0 <= j < l`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerLinearFactor {
    pub m: i64,
    pub l: i64,
    pub poly: QPoly,
    pub shift_offsets: Vec<(i64, i64, u32)>,
}

impl IntegerLinearFactor {
    /// The product the group stands for.
    pub fn expand(&self) -> KPoly {
        let mut acc = KPoly::one();
        for &(j, mu, lam) in &self.shift_offsets {
            let shifted = self.poly.taylor_shift(&Rat::from(j + self.l * mu));
            let f = crate::algebra::factor::IntegerLinear { m: self.m, l: self.l, poly: shifted }.to_kpoly();
            acc = acc.mul_ref(&f.pow(lam));
        }
        acc
    }
}

fn qpoly_as_kpoly(p: &QPoly) -> KPoly {
    p.map(RatN::from_rat)
}

/// Normal member of the `z`-shift class of a monic `P`.
fn z_normal(p: &QPoly) -> QPoly {
    let d = p.degree();
    if d == 0 {
        return p.clone();
    }
    let c = p.coeff(d - 1).over(&Rat::from(d as i64));
    let j = (-c.floor()).to_i64().expect("small shift");
    p.taylor_shift(&Rat::from(j))
}

/// Groups of the `k`-dependent factors of `b` by direction and shift class.
pub fn integer_linear_decompose(b: &PolyNK) -> Result<Vec<IntegerLinearFactor>> {
    if b.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    let kb = b.to_kpoly();
    let mut out: Vec<IntegerLinearFactor> = Vec::new();
    for (piece, e) in pieces(&kb) {
        let (groups, rest) = split_integer_linear(&piece);
        if rest.degree() > 0 {
            return Err(Error::NotIntegerLinear(crate::algebra::kpoly::primitive_nk(&rest).to_string()));
        }
        for g in groups {
            let rep = z_normal(&g.poly);
            let found = out.iter_mut().find(|f| {
                f.m == g.m && f.l == g.l && shift_equivalence(&qpoly_as_kpoly(&f.poly), &qpoly_as_kpoly(&g.poly)).is_some()
            });
            let entry = match found {
                Some(f) => f,
                None => {
                    out.push(IntegerLinearFactor { m: g.m, l: g.l, poly: rep.clone(), shift_offsets: Vec::new() });
                    out.last_mut().expect("just pushed")
                }
            };
            let jp = shift_equivalence(&qpoly_as_kpoly(&entry.poly), &qpoly_as_kpoly(&g.poly)).expect("same class");
            let (mu, j) = (jp.div_euclid(entry.l), jp.rem_euclid(entry.l));
            entry.shift_offsets.push((j, mu, e));
        }
    }
    for f in &mut out {
        f.shift_offsets.sort();
    }
    Ok(out)
}

/// A telescoper exists iff the denominator of the polar part is integer-linear.
pub fn telescoper_exists(b: &PolyNK) -> bool {
    integer_linear_decompose(b).is_ok()
}

fn polar_denominator(res: &Residual) -> PolyNK {
    res.ab().integer_parts().1
}

fn require_telescoper(res: &Residual) -> Result<()> {
    match integer_linear_decompose(&polar_denominator(res)) {
        Ok(_) => Ok(()),
        Err(Error::NotIntegerLinear(f)) => Err(Error::NoTelescoper(format!("factor {f} is not integer-linear"))),
        Err(e) => Err(e),
    }
}

/// Least-order operator whose image of `f * H0` lies in the selected
/// coordinates' kernel.
fn search(module: &HyperModule, f: &RatNK, coords: Coords<'_>, bound: usize) -> Option<(OreOp, Vec<Residual>)> {
    let basis = module.reducer().wk_basis().to_vec();
    let mut seen: Vec<Residual> = Vec::new();
    for res in module.shifts(f).take(bound + 1) {
        seen.push(res);
        if let Some(op) = dependence(&seen, &basis, coords) {
            return Some((op, seen));
        }
    }
    None
}

/// Canonical minimal telescoper of the multiplier `f` of `H0`.
pub fn minimal_telescoper_of(module: &HyperModule, f: &RatNK) -> Result<OreOp> {
    require_telescoper(&module.reduce(f))?;
    match search(module, f, Coords::All, ORDER_BOUND) {
        Some((op, _)) => Ok(op.canonical()),
        None => Err(Error::NoTelescoper(format!("none up to order {ORDER_BOUND}"))),
    }
}

pub fn minimal_telescoper(h: &HyperTerm) -> Result<OreOp> {
    let module = HyperModule::new(h)?;
    minimal_telescoper_of(&module, module.shell())
}

/// A minimal prescoper together with the `W_K`-part of its image.
#[derive(Clone, Debug)]
pub struct PrescoperResult {
    pub op: OreOp,
    pub p: KPoly,
    pub v: KPoly,
}

impl PrescoperResult {
    /// `p/v` as a rational function.
    pub fn residual(&self) -> RatNK {
        RatNK::new(self.p.clone(), self.v.clone())
    }
}

fn prescoper_result(module: &HyperModule, f: &RatNK, op: OreOp) -> PrescoperResult {
    let res = module.reduce(&module.apply(&op, f));
    debug_assert!(!res.has_polar_part(), "prescoper image lies in N");
    PrescoperResult { op, p: res.p, v: module.v().clone() }
}

/// Monic minimal prescoper of the multiplier `f` by the dependence method.
pub fn minimal_prescoper_of(module: &HyperModule, f: &RatNK) -> Result<PrescoperResult> {
    require_telescoper(&module.reduce(f))?;
    match search(module, f, Coords::Polar, ORDER_BOUND) {
        Some((op, _)) => Ok(prescoper_result(module, f, op)),
        None => Err(Error::NoTelescoper(format!("no prescoper up to order {ORDER_BOUND}"))),
    }
}

pub fn minimal_prescoper(h: &HyperTerm) -> Result<PrescoperResult> {
    let module = HyperModule::new(h)?;
    minimal_prescoper_of(&module, module.shell())
}

/// Key of a target under the integer-linear grouping.
fn group_key(t: &KPoly) -> Option<(i64, i64, QPoly)> {
    let (groups, rest) = split_integer_linear(t);
    if rest.degree() > 0 || groups.len() != 1 {
        return None;
    }
    let g = &groups[0];
    Some((g.m, g.l, z_normal(&g.poly)))
}

/// The polar part of the residual of `f`, split by integer-linear group.
pub fn polar_groups(module: &HyperModule, f: &RatNK) -> Result<Vec<RatNK>> {
    let res = module.reduce(f);
    let mut groups: BTreeMap<String, RatNK> = BTreeMap::new();
    for part in &res.parts {
        let (m, l, p) = group_key(&part.target)
            .ok_or_else(|| Error::NoTelescoper(format!("target {} is not integer-linear", crate::algebra::kpoly::primitive_nk(&part.target))))?;
        let key = format!("{m}:{l}:{:?}", p.coeffs());
        let term = RatNK::new(part.num.clone(), part.target.pow(part.mult));
        let e = groups.entry(key).or_insert_with(RatNK::zero);
        *e = e.add(&term);
    }
    Ok(groups.into_values().collect())
}

/// Prescoper as the LCLM of the prescopers of the integer-linear groups.
pub fn prescoper_by_groups(module: &HyperModule, f: &RatNK) -> Result<PrescoperResult> {
    let mut acc = OreOp::one();
    for g in polar_groups(module, f)? {
        let r = minimal_prescoper_of(module, &g)?;
        acc = acc.lclm(&r.op)?;
    }
    Ok(prescoper_result(module, f, monic(&acc)))
}

/// Parts of `R` supported on the exponents `i mod l`.
pub fn exponent_separation(r: &OreOp, l: usize) -> Vec<OreOp> {
    assert!(l > 0, "separation modulus must be positive");
    (0..l)
        .map(|i| {
            let c: Vec<RatN> =
                r.coeffs().iter().enumerate().map(|(d, c)| if d % l == i { c.clone() } else { RatN::zero() }).collect();
            OreOp::new(c)
        })
        .collect()
}

#[cfg(test)]
mod tests;
