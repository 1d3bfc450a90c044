//! Shift-compatible linear maps of the kernel submodule.

use crate::algebra::linalg::Matrix;
use crate::algebra::roots::rational_roots;
use crate::algebra::{Field, KPoly, QPoly, Rat, RatN, RatNK, ZPoly};
use crate::telescope::HyperModule;
use crate::{Error, Result};

pub type MatN = Matrix<RatN>;

/// Row `i` holds the `W_K` coordinates of `S_n(k^{b_i}/v * H0)`.
pub fn sigma_matrix(module: &HyperModule) -> Result<MatN> {
    let basis = module.reducer().wk_basis().to_vec();
    let d = basis.len();
    let mut sigma = MatN::zeros(d, d);
    for (i, &bi) in basis.iter().enumerate() {
        let f = RatNK::new(KPoly::monomial(RatN::one(), bi), module.v().clone());
        let res = module.reduce(&module.shift_n(&f));
        if res.has_polar_part() {
            return Err(Error::NotStable(format!("S_n of basis element {i} leaves the kernel submodule")));
        }
        for (j, &bj) in basis.iter().enumerate() {
            sigma.set(i, j, res.p.coeff(bj));
        }
        if let Some(e) = (0..=res.p.degree()).find(|e| !res.p.coeff(*e).is_zero() && !basis.contains(e)) {
            return Err(Error::NotStable(format!("image of basis element {i} has a k^{e} term outside W_K")));
        }
    }
    Ok(sigma)
}

pub fn shift_matrix(m: &MatN, j: i64) -> MatN {
    m.map(|c| c.shift(j))
}

/// `Sigma * Phi - S_n(Phi) * Sigma`.
pub fn commutator(sigma: &MatN, phi: &MatN) -> MatN {
    sigma.mul(phi).sub(&shift_matrix(phi, 1).mul(sigma))
}

fn denominator_lcm(m: &MatN) -> ZPoly {
    let mut l = ZPoly::one();
    for row in m.to_rows() {
        for c in row {
            let g = l.gcd(c.denom());
            l = l.mul(&c.denom().div_exact(&g).expect("gcd divides"));
        }
    }
    l
}

/// Defaults for the ansatz: numerator degree `3 + max deg` of the entries
/// of `Sigma`, denominator the lcm of its denominators shifted back by one.
pub fn default_ansatz(sigma: &MatN) -> (usize, ZPoly) {
    let deg = sigma.to_rows().iter().flatten().map(|c| c.numer().degree()).max().unwrap_or(0);
    let den = denominator_lcm(sigma).shift(&(-1).into()).primitive();
    (deg + 3, den)
}

/// Basis over `Q` of all `Phi = P/den`, `deg P <= deg_bound` entrywise,
/// with `Sigma Phi = S_n(Phi) Sigma`.
pub fn find_automorphisms(sigma: &MatN, deg_bound: usize, den: &ZPoly) -> Result<Vec<MatN>> {
    if den.is_zero() {
        return Err(Error::InvalidInput("zero ansatz denominator".into()));
    }
    let d = sigma.rows();
    let lsig = sigma.scale(&RatN::from_poly(denominator_lcm(sigma)));
    let den_n = RatN::from_poly(den.clone());
    let den_s = den_n.shift(1);
    // unknown (i, j, e) is the coefficient of n^e in entry (i, j) of P
    let unknowns: Vec<(usize, usize, usize)> =
        (0..d).flat_map(|i| (0..d).flat_map(move |j| (0..=deg_bound).map(move |e| (i, j, e)))).collect();
    let lsig_deg = lsig.to_rows().iter().flatten().map(|c| c.numer().degree()).max().unwrap_or(0);
    let stride = lsig_deg + deg_bound + den.degree() + 1;
    let mut m = Matrix::<Rat>::zeros(d * d * stride, unknowns.len());
    for (col, &(i, j, e)) in unknowns.iter().enumerate() {
        let mut p = MatN::zeros(d, d);
        p.set(i, j, RatN::from_poly(ZPoly::var().pow(e as u32)));
        // L Sigma P S_n(den) - S_n(P) den L Sigma, polynomial in n
        let img = lsig.mul(&p).scale(&den_s).sub(&shift_matrix(&p, 1).mul(&lsig).scale(&den_n));
        for (slot, c) in img.to_rows().into_iter().flatten().enumerate() {
            debug_assert!(c.is_polynomial());
            let z = c.numer();
            for t in 0..=z.degree() {
                m.set(slot * stride + t, col, Rat::from_int(z.coeff(t)));
            }
        }
    }
    let mut out = Vec::new();
    for sol in m.nullspace() {
        let mut phi = MatN::zeros(d, d);
        for (x, &(i, j, e)) in sol.iter().zip(&unknowns) {
            if !x.is_zero() {
                let cur = phi.get(i, j).clone();
                phi.set(i, j, cur.plus(&RatN::from_rat(x).times(&RatN::var().pow(e as i64))));
            }
        }
        out.push(phi.scale(&den_n.inv()));
    }
    Ok(out)
}

/// Eigenvalue and projector `prod_{mu != lambda} (Phi - mu)/(lambda - mu)`.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub eigenvalue: Rat,
    pub projector: MatN,
}

/// Minimal polynomial of `phi` over `Q(n)`, monic, lowest degree first.
pub fn minimal_polynomial(phi: &MatN) -> Vec<RatN> {
    let d = phi.rows();
    let mut powers = vec![MatN::identity(d)];
    loop {
        let k = powers.len();
        let mut m = MatN::zeros(d * d, k);
        for (c, p) in powers.iter().enumerate() {
            for (r, x) in p.to_rows().into_iter().flatten().enumerate() {
                m.set(r, c, x);
            }
        }
        if let Some(sol) = m.nullspace().into_iter().next() {
            let lc = sol.last().expect("nonempty").clone();
            return sol.iter().map(|c| c.over(&lc)).collect();
        }
        let next = powers.last().expect("nonempty").mul(phi);
        powers.push(next);
    }
}

/// Eigenspace projectors of a semisimple `phi` with rational eigenvalues.
pub fn eigenspace_split(phi: &MatN) -> Result<Vec<Eigenspace>> {
    let mp = minimal_polynomial(phi);
    let mut q = Vec::with_capacity(mp.len());
    for c in &mp {
        q.push(c.as_constant().ok_or_else(|| Error::NonRationalSpectrum("minimal polynomial depends on n".into()))?);
    }
    let q = QPoly::new(q);
    let roots = rational_roots(&q);
    if roots.len() != q.degree() {
        return Err(Error::NonRationalSpectrum(format!("minimal polynomial of degree {} has {} distinct rational roots", q.degree(), roots.len())));
    }
    let d = phi.rows();
    let id = MatN::identity(d);
    let mut out = Vec::with_capacity(roots.len());
    for (a, la) in roots.iter().enumerate() {
        let mut p = id.clone();
        for (b, mu) in roots.iter().enumerate() {
            if a != b {
                let f = phi.sub(&id.scale(&RatN::from_rat(mu))).scale(&RatN::from_rat(&la.minus(mu).inv()));
                p = p.mul(&f);
            }
        }
        out.push(Eigenspace { eigenvalue: la.clone(), projector: p });
    }
    Ok(out)
}
