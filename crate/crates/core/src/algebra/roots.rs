//! Univariate root finding over `Q`, resultants and interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Field, Poly, QPoly, Rat};

/// Resultant of two polynomials over a field by the Euclidean scheme.
pub fn resultant<F: Field>(a: &Poly<F>, b: &Poly<F>) -> F {
    if a.is_zero() || b.is_zero() {
        return F::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = F::one();
    loop {
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc.times(&pow_field(&b.lc(), da));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return F::zero();
        }
        let dr = r.degree();
        if (da * db) % 2 == 1 {
            acc = acc.negated();
        }
        acc = acc.times(&pow_field(&b.lc(), da - dr));
        a = b;
        b = r;
    }
}

fn pow_field<F: Field>(x: &F, e: usize) -> F {
    let mut acc = F::one();
    for _ in 0..e {
        acc = acc.times(x);
    }
    acc
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> QPoly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = QPoly::zero();
    for i in (0..n).rev() {
        acc = acc.mul_ref(&QPoly::linear(-xs[i].clone())).add_ref(&QPoly::constant(dd[i].clone()));
    }
    acc
}

/// Integer coefficients of a nonzero rational polynomial, content removed
/// and leading coefficient positive.
pub fn integer_coeffs(f: &QPoly) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in f.coeffs() {
        l = l.lcm(c.denom());
    }
    let mut v: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        if v.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        for c in &mut v {
            *c = &*c / &g;
        }
    }
    v
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn derivative(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (1009u64..200_000).step_by(2).filter(|&p| (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0))
}

fn reduce_mod(c: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = c.iter().map(|a| a.mod_floor(&pb).to_u64().expect("residue fits")).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let inv = powmod(*b.last().expect("nonzero divisor"), p - 2, p);
    while r.len() >= b.len() {
        let c = mulmod(*r.last().expect("nonempty"), inv, p);
        let off = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[off + i] = (r[off + i] + p - mulmod(c, *bi, p)) % p;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn gcd_is_one_mod(a: &[u64], b: &[u64], p: u64) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Integer roots of a nonzero polynomial with rational coefficients.
///
/// Roots are found modulo a small prime of good reduction, lifted by Newton
/// iteration beyond the Cauchy bound and confirmed exactly.
pub fn integer_roots(f: &QPoly) -> Vec<BigInt> {
    if f.is_zero() || f.is_constant() {
        return Vec::new();
    }
    let sf = f.div_exact(&f.gcd(&f.derivative())).expect("gcd divides");
    let mut c = integer_coeffs(&sf);
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(BigInt::zero());
        c.remove(0);
    }
    if c.len() <= 1 {
        return roots;
    }
    if c.len() == 2 {
        let (q, r) = (-&c[0]).div_rem(&c[1]);
        if r.is_zero() {
            roots.push(q);
        }
        roots.sort();
        return roots;
    }
    let lc = c.last().expect("nonconstant").abs();
    let bound = c.iter().map(|a| a.abs()).max().expect("nonempty") / &lc + 2;
    let dc = derivative(&c);
    for p in small_primes() {
        let fp = reduce_mod(&c, p);
        if fp.len() != c.len() {
            continue;
        }
        let dp = reduce_mod(&dc, p);
        if dp.is_empty() || !gcd_is_one_mod(&fp, &dp, p) {
            continue;
        }
        let pb = BigInt::from(p);
        for r0 in 0..p {
            let mut acc = 0u64;
            for a in fp.iter().rev() {
                acc = (mulmod(acc, r0, p) + a) % p;
            }
            if acc != 0 {
                continue;
            }
            let mut x = BigInt::from(r0);
            let mut m = pb.clone();
            while m <= &bound * 2 {
                m = &m * &m;
                let fx = eval_mod(&c, &x, &m);
                let dx = eval_mod(&dc, &x, &m);
                let inv = mod_inverse(&dx, &m).expect("simple root modulo a good prime");
                x = (&x - fx * inv).mod_floor(&m);
            }
            let half = &m / 2;
            let cand = if x > half { &x - &m } else { x };
            if cand.abs() <= bound && eval_int(&c, &cand).is_zero() {
                roots.push(cand);
            }
        }
        roots.sort();
        roots.dedup();
        return roots;
    }
    panic!("no prime of good reduction found");
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Rational roots of a nonzero polynomial with rational coefficients.
pub fn rational_roots(f: &QPoly) -> Vec<Rat> {
    if f.is_zero() || f.is_constant() {
        return Vec::new();
    }
    let sf = f.div_exact(&f.gcd(&f.derivative())).expect("gcd divides");
    let c = integer_coeffs(&sf);
    let d = c.len() - 1;
    let lc = c[d].clone();
    // y = lc * x turns the polynomial monic with integer coefficients.
    let mut monic = vec![BigInt::one()];
    let mut lp = BigInt::one();
    for i in (0..d).rev() {
        monic.push(&c[i] * &lp);
        lp = &lp * &lc;
    }
    monic.reverse();
    let g = QPoly::new(monic.into_iter().map(Rat::from_int).collect());
    let mut out: Vec<Rat> = integer_roots(&g).into_iter().map(|y| Rat::new(y, lc.clone())).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> QPoly {
        QPoly::new(c.iter().map(|&x| Rat::from(x)).collect())
    }

    #[test]
    fn integer_roots_of_products() {
        // (x - 3)(x + 7)(x - 1000003)(2x + 1)
        let f = qp(&[-3, 1]).mul_ref(&qp(&[7, 1])).mul_ref(&qp(&[-1000003, 1])).mul_ref(&qp(&[1, 2]));
        let r = integer_roots(&f);
        assert_eq!(r, vec![BigInt::from(-7), BigInt::from(3), BigInt::from(1000003)]);
        let rr = rational_roots(&f);
        assert_eq!(rr.len(), 4);
        assert!(rr.contains(&Rat::frac(-1, 2)));
    }

    #[test]
    fn repeated_and_zero_roots() {
        let f = qp(&[0, 0, 1]).mul_ref(&qp(&[5, 1]).pow(3));
        assert_eq!(integer_roots(&f), vec![BigInt::from(-5), BigInt::from(0)]);
        assert!(integer_roots(&qp(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn resultant_matches_root_product() {
        // res(x^2 - 1, x - 2) = (1 - 2)(-1 - 2) up to sign convention = 3
        let r = resultant(&qp(&[-1, 0, 1]), &qp(&[-2, 1]));
        assert_eq!(r, Rat::from(3));
        assert!(resultant(&qp(&[-1, 1]), &qp(&[-1, 0, 1])).is_zero());
    }

    #[test]
    fn interpolation_round_trip() {
        let f = qp(&[4, -3, 0, 2]);
        let xs: Vec<Rat> = (0..4).map(Rat::from).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }
}
