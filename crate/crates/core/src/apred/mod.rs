//! Rational normal forms and the modified Abramov–Petkovšek reduction.
//!
//! A multiplier `f` stands for the term `f * H0` with `S_k(H0)/H0 = K = u/v`.
//! Reduction writes `f = K*S_k(r) - r + a/b + p/v` with `b` shift-free and
//! strongly prime with `K`, and `p` in the monomial complement `W_K`.

mod complement;

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};

use crate::algebra::factor::{dispersion_set, pieces, shift_equivalence};
use crate::algebra::kpoly::{gcd_k, integer_form, primitive_nk, shift_k};
use crate::algebra::{Field, KPoly, PolyNK, Rat, RatN, RatNK};
use crate::{Error, Result};

pub use complement::PhiImage;

/// `g_k = S_k(S)/S * K` with `K` shift-reduced.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalNormalForm {
    pub kernel: RatNK,
    pub shell: RatNK,
}

/// Kernel and shell of a nonzero rational function.
pub fn rational_normal_form(gk: &RatNK) -> RationalNormalForm {
    assert!(!gk.is_zero(), "rational normal form of zero");
    let lc = gk.num().lc();
    let mut a = gk.num().monic();
    let mut b = gk.den().clone();
    let mut shell = RatNK::one();
    loop {
        let ds: Vec<i64> = dispersion_set(&a, &b).into_iter().filter(|&j| j != 0).collect();
        let Some(&j) = ds.first() else { break };
        let g = gcd_k(&a, &shift_k(&b, j));
        if j > 0 {
            for i in 1..=j {
                shell = shell.mul(&RatNK::from_poly(shift_k(&g, -i)));
            }
            a = a.div_exact(&g).expect("gcd divides");
            b = b.div_exact(&shift_k(&g, -j)).expect("shifted gcd divides");
        } else {
            for i in 0..-j {
                shell = shell.div(&RatNK::from_poly(shift_k(&g, i)));
            }
            a = a.div_exact(&g).expect("gcd divides");
            b = b.div_exact(&shift_k(&g, -j)).expect("shifted gcd divides");
        }
    }
    let kernel = RatNK::new(a.scale(&lc), b);
    RationalNormalForm { kernel, shell }
}

/// `gcd(p, S_k^{-i}(u)) = gcd(p, S_k^i(v)) = 1` for all `i >= 0`.
pub fn strongly_prime(p: &KPoly, kernel: &RatNK) -> bool {
    if p.degree() == 0 {
        return true;
    }
    let (u, v) = (kernel.num(), kernel.den());
    // gcd(p(k), u(k - i)) != 1 means -i lies in the dispersion set of (p, u)
    let bad_u = dispersion_set(p, u).into_iter().any(|j| j <= 0);
    let bad_v = dispersion_set(p, v).into_iter().any(|j| j >= 0);
    !(bad_u || bad_v)
}

#[derive(Clone, Debug)]
struct Orbit {
    rep: KPoly,
    u_pos: Vec<i64>,
    v_pos: Vec<i64>,
}

impl Orbit {
    fn target(&self) -> i64 {
        if let Some(m) = self.u_pos.iter().max() {
            m + 1
        } else if let Some(m) = self.v_pos.iter().min() {
            m - 1
        } else {
            0
        }
    }
}

/// Normalized member of the shift orbit of a monic `e`: its subleading
/// coefficient has polynomial constant term in `[0, deg e)`.
fn orbit_normal(e: &KPoly) -> KPoly {
    let d = e.degree() as i64;
    let c = e.coeff(e.degree() - 1).polynomial_constant_term();
    let j = -(c / Rat::from(d)).floor().to_i64().expect("small shift");
    shift_k(e, j)
}

fn refine(mut fam: Vec<KPoly>) -> Vec<KPoly> {
    'outer: loop {
        let mut uniq: Vec<KPoly> = Vec::new();
        for f in fam.drain(..) {
            if f.degree() > 0 && !uniq.contains(&f) {
                uniq.push(f);
            }
        }
        fam = uniq;
        for i in 0..fam.len() {
            for j in i..fam.len() {
                for s in dispersion_set(&fam[i], &fam[j]) {
                    if i == j && s == 0 {
                        continue;
                    }
                    let g = gcd_k(&fam[i], &shift_k(&fam[j], s)).monic();
                    let whole_i = g.degree() == fam[i].degree();
                    let whole_j = g.degree() == fam[j].degree();
                    if i != j && whole_i && whole_j {
                        continue;
                    }
                    let gj = shift_k(&g, -s);
                    let (fi, fj) = (fam[i].clone(), fam[j].clone());
                    let mut next: Vec<KPoly> = Vec::new();
                    for (k, f) in fam.iter().enumerate() {
                        if k != i && k != j {
                            next.push(f.clone());
                        }
                    }
                    if !whole_i || i == j {
                        next.push(g.clone());
                        next.push(fi.div_exact(&g).expect("gcd divides").monic());
                    } else {
                        next.push(fi);
                    }
                    if i != j {
                        if !whole_j {
                            next.push(gj.clone());
                            next.push(fj.div_exact(&gj).expect("shifted gcd divides").monic());
                        } else {
                            next.push(fj);
                        }
                    }
                    fam = next;
                    continue 'outer;
                }
            }
        }
        return fam;
    }
}

fn multiplicity(p: &KPoly, e: &KPoly) -> (u32, KPoly) {
    let mut m = 0;
    let mut rest = p.clone();
    while let Some(q) = {
        let (q, r) = rest.divrem(e);
        r.is_zero().then_some(q)
    } {
        rest = q;
        m += 1;
    }
    (m, rest)
}

/// One summand `num / T^mult` of the `a/b` part, `T` the orbit target.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarPart {
    pub target: KPoly,
    pub mult: u32,
    pub num: KPoly,
}

/// Residual of a multiplier: `a/b` split by orbit targets, `p` and the
/// certificate pieces.
#[derive(Clone, Debug)]
pub struct Residual {
    pub parts: Vec<PolarPart>,
    pub p: KPoly,
    cert_terms: Vec<(KPoly, KPoly)>,
}

impl Residual {
    pub fn ab(&self) -> RatNK {
        let mut acc = RatNK::zero();
        for part in &self.parts {
            acc = acc.add(&RatNK::new(part.num.clone(), part.target.pow(part.mult)));
        }
        acc
    }

    pub fn has_polar_part(&self) -> bool {
        !self.parts.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty() && self.p.is_zero()
    }

    /// The multiplier `a/b + p/v`.
    pub fn multiplier(&self, v: &KPoly) -> RatNK {
        self.ab().add(&RatNK::new(self.p.clone(), v.clone()))
    }

    /// `r` with `f = K*S_k(r) - r + a/b + p/v`.
    pub fn certificate(&self) -> RatNK {
        let mut acc = RatNK::zero();
        for (n, d) in &self.cert_terms {
            acc = acc.add(&RatNK::new(n.clone(), d.clone()));
        }
        acc
    }
}

/// Reduction engine for a fixed shift-reduced kernel.
#[derive(Debug)]
pub struct Reducer {
    kernel: RatNK,
    u: KPoly,
    v: KPoly,
    base: Vec<KPoly>,
    image: PhiImage,
}

impl Reducer {
    pub fn new(kernel: &RatNK) -> Result<Reducer> {
        if kernel.is_zero() {
            return Err(Error::ZeroTerm);
        }
        let den = kernel.den();
        let (coeffs, _) = integer_form(den);
        let mut v = KPoly::new(coeffs.into_iter().map(RatN::from_poly).collect());
        if v.lc().numer().lc().is_negative() {
            v = v.scale(&RatN::int(-1));
        }
        let u = kernel.num().scale(&v.lc().over(&den.lc()));
        let ds = dispersion_set(&u, &v);
        if !ds.is_empty() {
            return Err(Error::PreconditionViolated(format!("kernel {kernel} is not shift-reduced")));
        }
        let mut base: Vec<KPoly> = pieces(&u).into_iter().map(|(p, _)| p).collect();
        base.extend(pieces(&v).into_iter().map(|(p, _)| p));
        let base = refine(base);
        let image = PhiImage::new(&u, &v);
        Ok(Reducer { kernel: kernel.clone(), u, v, base, image })
    }

    pub fn kernel(&self) -> &RatNK {
        &self.kernel
    }

    pub fn u(&self) -> &KPoly {
        &self.u
    }

    pub fn v(&self) -> &KPoly {
        &self.v
    }

    /// Degrees of the complement monomials.
    pub fn wk_basis(&self) -> &[usize] {
        self.image.basis()
    }

    pub fn image(&self) -> &PhiImage {
        &self.image
    }

    fn orbits(&self, fam: &[KPoly]) -> Vec<(Orbit, Vec<(KPoly, i64)>)> {
        let mut out: Vec<(Orbit, Vec<(KPoly, i64)>)> = Vec::new();
        for e in fam {
            let found = out.iter().position(|(o, _)| shift_equivalence(&o.rep, e).is_some());
            let idx = match found {
                Some(i) => i,
                None => {
                    let rep = orbit_normal(e);
                    out.push((Orbit { rep, u_pos: Vec::new(), v_pos: Vec::new() }, Vec::new()));
                    out.len() - 1
                }
            };
            let pos = shift_equivalence(&out[idx].0.rep, e).expect("same orbit");
            if self.u.rem(e).is_zero() {
                out[idx].0.u_pos.push(pos);
            }
            if self.v.rem(e).is_zero() {
                out[idx].0.v_pos.push(pos);
            }
            out[idx].1.push((e.clone(), pos));
        }
        out
    }

    /// Modified Abramov–Petkovšek reduction of the multiplier `f`.
    pub fn reduce(&self, f: &RatNK) -> Residual {
        let den = f.den();
        let mut fam = self.base.clone();
        fam.extend(pieces(den).into_iter().map(|(p, _)| p));
        let fam = refine(fam);
        let orbits = self.orbits(&fam);

        let (poly, rem) = f.num().divrem(den);
        let mut p_num = poly.mul_ref(&self.v);
        let mut cert: Vec<(KPoly, KPoly)> = Vec::new();
        let mut at_target: BTreeMap<usize, Vec<(u32, KPoly)>> = BTreeMap::new();
        let mut targets: Vec<KPoly> = Vec::new();

        // split rem/den over the family members dividing den
        let mut rest = den.clone();
        let mut members: Vec<(usize, KPoly, i64, u32)> = Vec::new();
        for (oi, (_, ms)) in orbits.iter().enumerate() {
            for (e, pos) in ms {
                let (m, r) = multiplicity(&rest, e);
                if m > 0 {
                    rest = r;
                    members.push((oi, e.clone(), *pos, m));
                }
            }
        }
        debug_assert!(rest.degree() == 0, "family covers the denominator");
        for (oi, e, pos, m) in members {
            let em = e.pow(m);
            let co = den.div_exact(&em).expect("power divides");
            let inv = co.inv_mod(&em).expect("coprime cofactor");
            let mut c = rem.mul_ref(&inv).rem(&em);
            let orbit = &orbits[oi].0;
            let t = orbit.target();
            let mut cur = e;
            let mut at = pos;
            while at < t {
                // C/e^m -> A'/S_k(e)^m + X/v, certificate -C/e^m
                let up = shift_k(&cur, 1).pow(m);
                let usc = self.u.mul_ref(&shift_k(&c, 1));
                let vinv = self.v.rem(&up).inv_mod(&up).expect("v coprime to the orbit");
                let a2 = usc.mul_ref(&vinv).rem(&up);
                let x = usc.sub_ref(&a2.mul_ref(&self.v)).div_exact(&up).expect("exact split");
                p_num = p_num.add_ref(&x);
                cert.push((c.neg_ref(), cur.pow(m)));
                c = a2;
                cur = shift_k(&cur, 1);
                at += 1;
            }
            while at > t {
                // C/e^m -> c'/S_k^{-1}(e)^m + X/v, certificate c'/S_k^{-1}(e)^m
                let em = cur.pow(m);
                let uinv = self.u.rem(&em).inv_mod(&em).expect("u coprime to the orbit");
                let c2 = c.mul_ref(&self.v).mul_ref(&uinv).rem(&em);
                let x = c.mul_ref(&self.v).sub_ref(&self.u.mul_ref(&c2)).div_exact(&em).expect("exact split");
                p_num = p_num.add_ref(&x);
                let c1 = shift_k(&c2, -1);
                cur = shift_k(&cur, -1);
                cert.push((c1.clone(), cur.pow(m)));
                c = c1;
                at -= 1;
            }
            let ti = match targets.iter().position(|x| *x == cur) {
                Some(i) => i,
                None => {
                    targets.push(cur.clone());
                    targets.len() - 1
                }
            };
            at_target.entry(ti).or_default().push((m, c));
        }

        let mut parts = Vec::new();
        for (ti, terms) in at_target {
            let t = &targets[ti];
            let mm = terms.iter().map(|(m, _)| *m).max().expect("nonempty");
            let mut num = KPoly::zero();
            for (m, c) in terms {
                num = num.add_ref(&c.mul_ref(&t.pow(mm - m)));
            }
            let mut mult = mm;
            while mult > 0 && !num.is_zero() {
                let (q, r) = num.divrem(t);
                if !r.is_zero() {
                    break;
                }
                num = q;
                mult -= 1;
            }
            if !num.is_zero() && mult > 0 {
                parts.push(PolarPart { target: t.clone(), mult, num });
            }
        }
        parts.sort_by_key(|x| x.target.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

        let (w, p) = self.image.reduce(&p_num);
        if !w.is_zero() {
            cert.push((w, KPoly::one()));
        }
        Residual { parts, p, cert_terms: cert }
    }

    /// `f - (K*S_k(r) - r) - (a/b + p/v)`, zero for a correct reduction.
    pub fn defect(&self, f: &RatNK, res: &Residual) -> RatNK {
        let r = res.certificate();
        let delta = self.kernel.mul(&r.shift_k(1)).sub(&r);
        f.sub(&delta).sub(&res.multiplier(&self.v))
    }
}

/// The residual form of a multiplier as canonical strings.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualForm {
    pub r: RatNK,
    pub a: PolyNK,
    pub b: PolyNK,
    /// Polynomial in `k` over `Q(n)`.
    pub p: RatNK,
    pub v: PolyNK,
    pub kernel: RatNK,
}

impl ResidualForm {
    pub fn new(red: &Reducer, res: &Residual) -> ResidualForm {
        let ab = res.ab();
        let (a, b) = ab.integer_parts();
        ResidualForm {
            r: res.certificate(),
            a,
            b,
            p: RatNK::from_poly(res.p.clone()),
            v: primitive_nk(red.v()),
            kernel: red.kernel().clone(),
        }
    }

    pub fn is_hyper_summable(&self) -> bool {
        self.a.is_zero() && self.p.is_zero()
    }

    /// Field name and canonical text, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("r", self.r.to_string()),
            ("a", self.a.to_string()),
            ("b", self.b.to_string()),
            ("p", self.p.to_string()),
            ("v", self.v.to_string()),
            ("kernel", self.kernel.to_string()),
        ]
    }
}

/// `a = 0` and `p = 0`.
pub fn is_hyper_summable(res: &Residual) -> bool {
    res.is_zero()
}

#[cfg(test)]
mod tests;
