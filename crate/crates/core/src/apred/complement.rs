//! The map `phi_K(q) = u*S_k(q) - v*q`, an echelon basis of its image and
//! the monomial complement `W_K`.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_traits::ToPrimitive;

use crate::algebra::kpoly::shift_k;
use crate::algebra::{Field, KPoly, RatN};

#[derive(Debug)]
struct Echelon {
    /// leading degree -> (image element, preimage)
    rows: BTreeMap<usize, (KPoly, KPoly)>,
    next_j: usize,
}

/// Reduction modulo `im(phi_K)` onto the span of the complement monomials.
#[derive(Debug)]
pub struct PhiImage {
    u: KPoly,
    v: KPoly,
    /// `deg phi(k^j) = j + offset` for all `j` except `special`.
    offset: i64,
    special: Option<usize>,
    echelon: Mutex<Echelon>,
    basis: Vec<usize>,
}

impl PhiImage {
    pub fn new(u: &KPoly, v: &KPoly) -> PhiImage {
        let (du, dv) = (u.degree(), v.degree());
        let (offset, special) = if du != dv || u.lc() != v.lc() {
            (du.max(dv) as i64, None)
        } else if du == 0 {
            (-1, None)
        } else {
            let j0 = v.coeff(du - 1).minus(&u.coeff(du - 1)).over(&u.lc());
            let j0 = j0.as_integer().and_then(|j| j.to_usize());
            (du as i64 - 1, j0)
        };
        let mut me = PhiImage {
            u: u.clone(),
            v: v.clone(),
            offset,
            special,
            echelon: Mutex::new(Echelon { rows: BTreeMap::new(), next_j: 0 }),
            basis: Vec::new(),
        };
        let top_j = special.unwrap_or(0) + 2;
        let top_deg = (top_j as i64 + offset).max(0) as usize;
        me.extend_to(top_deg);
        let ech = me.echelon.lock().expect("echelon lock");
        me.basis = (0..=top_deg).filter(|d| !ech.rows.contains_key(d)).collect();
        drop(ech);
        me
    }

    pub fn phi(&self, q: &KPoly) -> KPoly {
        self.u.mul_ref(&shift_k(q, 1)).sub_ref(&self.v.mul_ref(q))
    }

    /// Degrees `i` of the complement monomials `k^i`.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Makes sure every image row with leading degree `<= deg` is known.
    fn extend_to(&self, deg: usize) {
        let need_j = (deg as i64 - self.offset + 1).max(0) as usize;
        let need_j = need_j.max(self.special.map_or(0, |j| j + 1));
        let mut ech = self.echelon.lock().expect("echelon lock");
        while ech.next_j <= need_j {
            let j = ech.next_j;
            let pre = KPoly::monomial(RatN::one(), j);
            let mut img = self.phi(&pre);
            let mut pre = pre;
            while !img.is_zero() {
                let d = img.degree();
                match ech.rows.get(&d) {
                    Some((row, rp)) => {
                        let c = img.lc().over(&row.lc());
                        img = img.sub_ref(&row.scale(&c));
                        pre = pre.sub_ref(&rp.scale(&c));
                    }
                    None => break,
                }
            }
            if !img.is_zero() {
                ech.rows.insert(img.degree(), (img, pre));
            }
            ech.next_j += 1;
        }
    }

    /// Splits `p = phi(w) + rest` with `rest` in the complement span.
    pub fn reduce(&self, p: &KPoly) -> (KPoly, KPoly) {
        if p.is_zero() {
            return (KPoly::zero(), KPoly::zero());
        }
        self.extend_to(p.degree());
        let ech = self.echelon.lock().expect("echelon lock");
        let mut p = p.clone();
        let mut w = KPoly::zero();
        let mut rest = KPoly::zero();
        while !p.is_zero() {
            let d = p.degree();
            match ech.rows.get(&d) {
                Some((row, pre)) => {
                    let c = p.lc().over(&row.lc());
                    p = p.sub_ref(&row.scale(&c));
                    w = w.add_ref(&pre.scale(&c));
                }
                None => {
                    let top = KPoly::monomial(p.lc(), d);
                    rest = rest.add_ref(&top);
                    p = p.sub_ref(&top);
                }
            }
        }
        (w, rest)
    }
}
