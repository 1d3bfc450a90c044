//! Multi-modular recovery of a one-dimensional kernel over `Q(n)`:
//! kernels at points modulo word-size primes, rational function
//! reconstruction in `n`, Chinese remaindering and rational number
//! reconstruction of the coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::Matrix;
use super::{Field, Rat, RatN, ZPoly};

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for b in BASES {
        let mut x = pow(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut c = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while c > 2 {
            c -= 2;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    })
}

fn big_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
struct PolyP(Vec<u64>);

impl PolyP {
    fn trim(mut v: Vec<u64>) -> PolyP {
        while v.last() == Some(&0) {
            v.pop();
        }
        PolyP(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn eval(&self, x: u64, p: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| add(mul(acc, x, p), c, p))
    }

    fn sub_mul(&self, q: &PolyP, t: &PolyP, p: u64) -> PolyP {
        // self - q*t
        let mut out = self.0.clone();
        if !q.is_zero() && !t.is_zero() {
            out.resize(out.len().max(q.0.len() + t.0.len() - 1), 0);
            for (i, &a) in q.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in t.0.iter().enumerate() {
                    out[i + j] = sub(out[i + j], mul(a, b, p), p);
                }
            }
        }
        PolyP::trim(out)
    }

    fn divrem(&self, d: &PolyP, p: u64) -> (PolyP, PolyP) {
        let mut r = self.0.clone();
        let dd = d.degree();
        if r.len() < d.0.len() {
            return (PolyP(Vec::new()), self.clone());
        }
        let li = inv(*d.0.last().expect("nonzero divisor"), p);
        let mut q = vec![0; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = mul(r[i + dd], li, p);
            q[i] = c;
            if c != 0 {
                for (j, &b) in d.0.iter().enumerate() {
                    r[i + j] = sub(r[i + j], mul(c, b, p), p);
                }
            }
        }
        r.truncate(dd);
        (PolyP::trim(q), PolyP::trim(r))
    }

    fn scale(&self, c: u64, p: u64) -> PolyP {
        PolyP::trim(self.0.iter().map(|&a| mul(a, c, p)).collect())
    }
}

/// Inverses of all entries (nonzero) with a single exponentiation.
fn batch_inv(v: &[u64], p: u64) -> Vec<u64> {
    let mut prefix = Vec::with_capacity(v.len());
    let mut acc = 1;
    for &a in v {
        prefix.push(acc);
        acc = mul(acc, a, p);
    }
    let mut inv_acc = inv(acc, p);
    let mut out = vec![0; v.len()];
    for i in (0..v.len()).rev() {
        out[i] = mul(inv_acc, prefix[i], p);
        inv_acc = mul(inv_acc, v[i], p);
    }
    out
}

fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> PolyP {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        let gaps: Vec<u64> = (j..n).map(|i| sub(xs[i], xs[i - j], p)).collect();
        let gi = batch_inv(&gaps, p);
        for i in (j..n).rev() {
            dd[i] = mul(sub(dd[i], dd[i - 1], p), gi[i - j], p);
        }
    }
    let mut acc: Vec<u64> = Vec::new();
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + dd[i]
        let mut next = vec![0; acc.len() + 1];
        for (k, &a) in acc.iter().enumerate() {
            next[k + 1] = add(next[k + 1], a, p);
            next[k] = sub(next[k], mul(a, xs[i], p), p);
        }
        next[0] = add(next[0], dd[i], p);
        acc = next;
    }
    PolyP::trim(acc)
}

/// `(N, D)` with `D` monic, `deg N < m/2`, agreeing with the samples.
fn reconstruct(xs: &[u64], ys: &[u64], p: u64) -> Option<(PolyP, PolyP)> {
    let m = xs.len();
    let mut r0 = PolyP(vec![1]);
    for &x in xs {
        let mut next = vec![0; r0.0.len() + 1];
        for (k, &a) in r0.0.iter().enumerate() {
            next[k + 1] = add(next[k + 1], a, p);
            next[k] = sub(next[k], mul(a, x, p), p);
        }
        r0 = PolyP::trim(next);
    }
    let mut r1 = interpolate(xs, ys, p);
    let (mut t0, mut t1) = (PolyP(Vec::new()), PolyP(vec![1]));
    while !r1.is_zero() && 2 * r1.degree() >= m {
        let (q, r) = r0.divrem(&r1, p);
        let t = t0.sub_mul(&q, &t1, p);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() {
        return None;
    }
    let li = inv(*t1.0.last().expect("nonzero"), p);
    // a zero numerator is normalized to denominator 1
    if r1.is_zero() {
        return Some((r1, PolyP(vec![1])));
    }
    Some((r1.scale(li, p), t1.scale(li, p)))
}

fn reduce_zpoly(z: &ZPoly, p: u64) -> PolyP {
    PolyP::trim(z.coeffs().iter().map(|c| big_mod(c, p)).collect())
}

/// Entries of the matrix reduced modulo `p`; `None` if a denominator
/// vanishes identically.
fn reduce_matrix(m: &Matrix<RatN>, p: u64) -> Option<Vec<Vec<(PolyP, PolyP)>>> {
    let mut out = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for c in m.row(r) {
            let den = reduce_zpoly(c.denom(), p);
            if den.is_zero() || den.degree() != c.denom().degree() {
                return None;
            }
            row.push((reduce_zpoly(c.numer(), p), den));
        }
        out.push(row);
    }
    Some(out)
}

/// Kernel of the specialized matrix normalized at `pivot`, when it is
/// one-dimensional.
fn kernel_at(m: &[Vec<(PolyP, PolyP)>], cols: usize, x: u64, pivot: usize, p: u64) -> Option<Vec<u64>> {
    let mut nums = Vec::with_capacity(m.len() * cols);
    let mut dens = Vec::with_capacity(m.len() * cols);
    for (num, den) in m.iter().flatten() {
        let d = den.eval(x, p);
        if d == 0 {
            return None;
        }
        nums.push(num.eval(x, p));
        dens.push(d);
    }
    let di = batch_inv(&dens, p);
    let a_flat: Vec<u64> = nums.iter().zip(&di).map(|(&a, &b)| mul(a, b, p)).collect();
    let mut a: Vec<Vec<u64>> = a_flat.chunks(cols).map(|c| c.to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(pr, rank);
        let iv = inv(a[rank][c], p);
        for x in &mut a[rank][c..cols] {
            *x = mul(*x, iv, p);
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x = sub(*x, mul(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    if rank + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![0; cols];
    v[free] = 1;
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = sub(0, a[r][free], p);
    }
    if v[pivot] == 0 {
        return None;
    }
    let iv = inv(v[pivot], p);
    Some(v.into_iter().map(|c| mul(c, iv, p)).collect())
}

/// Reconstructed components modulo `p`, with at least `points` samples.
fn image_mod(m: &[Vec<(PolyP, PolyP)>], cols: usize, pivot: usize, p: u64, shape: Option<&[(usize, usize)]>) -> Option<Vec<(PolyP, PolyP)>> {
    let mut xs: Vec<u64> = Vec::new();
    let mut ys: Vec<Vec<u64>> = Vec::new();
    let mut x = 1000u64;
    let mut want = match shape {
        Some(s) => s.iter().map(|(a, b)| a.max(b) * 2 + 2).max().unwrap_or(1),
        None => 8,
    };
    loop {
        while xs.len() < want + 2 {
            x += 1;
            if let Some(v) = kernel_at(m, cols, x, pivot, p) {
                xs.push(x);
                ys.push(v);
            }
            if x > 1000 + 4 * (want as u64 + 2) + 64 {
                return None;
            }
        }
        let mut out = Vec::with_capacity(cols);
        let mut ok = true;
        for j in 0..cols {
            let col: Vec<u64> = ys.iter().map(|y| y[j]).collect();
            match reconstruct(&xs[..want], &col[..want], p) {
                Some((num, den))
                    if (want..want + 2).all(|i| {
                        let d = den.eval(xs[i], p);
                        d != 0 && mul(num.eval(xs[i], p), inv(d, p), p) == col[i]
                    }) =>
                {
                    out.push((num, den))
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(out);
        }
        if shape.is_some() || want >= MAX_POINTS {
            return None;
        }
        want *= 2;
    }
}

const MAX_POINTS: usize = 8192;
const MAX_PRIMES: usize = 4000;

/// Rational number with `r = a/b mod m`, `|a|, |b| <= sqrt(m/2)`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

/// Kernel vector of a matrix over `Q(n)` with one-dimensional kernel,
/// normalized to 1 at `pivot`. The result still needs exact verification.
pub fn kernel_vector(m: &Matrix<RatN>, pivot: usize) -> Option<Vec<RatN>> {
    let cols = m.cols();
    let mut shape: Option<Vec<(usize, usize)>> = None;
    let mut modulus = BigInt::one();
    // per component: residues of numerator and denominator coefficients
    let mut acc: Vec<(Vec<BigInt>, Vec<BigInt>)> = Vec::new();
    let mut last: Option<Vec<RatN>> = None;
    let (mut good, mut since) = (0usize, 0usize);
    for (used, p) in primes().enumerate() {
        if used >= MAX_PRIMES {
            return None;
        }
        let Some(red) = reduce_matrix(m, p) else { continue };
        let Some(img) = image_mod(&red, cols, pivot, p, shape.as_deref()) else { continue };
        let this: Vec<(usize, usize)> = img.iter().map(|(a, b)| (a.0.len(), b.0.len())).collect();
        let total = |s: &[(usize, usize)]| s.iter().map(|(a, b)| a + b).sum::<usize>();
        match &shape {
            // a larger image means the earlier primes were unlucky
            Some(s) if *s != this && total(&this) <= total(s) => continue,
            Some(s) if *s == this => {}
            _ => {
                shape = Some(this);
                acc = img.iter().map(|(a, b)| (vec![BigInt::zero(); a.0.len()], vec![BigInt::zero(); b.0.len()])).collect();
                modulus = BigInt::one();
                last = None;
                good = 0;
                since = 0;
            }
        }
        // CRT: x = x + M * ((r - x) * M^{-1} mod p)
        good += 1;
        let pb = BigInt::from(p);
        let minv = inv(big_mod(&modulus, p), p);
        for ((an, ad), (rn, rd)) in acc.iter_mut().zip(&img) {
            for (x, &r) in an.iter_mut().zip(&rn.0).chain(ad.iter_mut().zip(&rd.0)) {
                let d = mul(sub(r, big_mod(x, p), p), minv, p);
                *x += &modulus * BigInt::from(d);
            }
        }
        modulus *= &pb;
        since += 1;
        if since < 1.max(good / 4) {
            continue;
        }
        since = 0;
        let cand: Option<Vec<RatN>> = acc
            .iter()
            .map(|(an, ad)| {
                let num: Option<Vec<Rat>> = an.iter().map(|x| rational_reconstruct(x, &modulus)).collect();
                let den: Option<Vec<Rat>> = ad.iter().map(|x| rational_reconstruct(x, &modulus)).collect();
                Some(ratn_of(&num?, &den?))
            })
            .collect();
        if let Some(c) = cand {
            if last.as_ref() == Some(&c) {
                return Some(c);
            }
            last = Some(c);
        }
    }
    None
}

fn ratn_of(num: &[Rat], den: &[Rat]) -> RatN {
    if num.is_empty() {
        return RatN::zero();
    }
    let mut l = BigInt::one();
    for c in num.iter().chain(den) {
        l = l.lcm(c.denom());
    }
    let z = |v: &[Rat]| ZPoly::new(v.iter().map(|c| c.numer() * (&l / c.denom())).collect());
    RatN::new(z(num), z(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_ratfunc;

    fn rn(s: &str) -> RatN {
        parse_ratfunc(s).unwrap().as_ratn().unwrap()
    }

    #[test]
    fn primality() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.iter().all(|&p| is_prime(p) && p < 1 << 62));
        assert!(!is_prime(1 << 61));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn recovers_a_kernel() {
        let m = Matrix::from_rows(vec![
            vec![rn("n+1"), rn("3/(2*n-5)"), rn("-(n^2+7)/11")],
            vec![rn("1/(n+4)"), rn("n^3"), rn("2")],
        ]);
        let e = kernel_vector(&m, 2).unwrap();
        assert!(e[2].is_one());
        for r in 0..2 {
            let s = m.row(r).iter().zip(&e).fold(RatN::zero(), |a, (x, y)| a.plus(&x.times(y)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rational_numbers_come_back() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let want = Rat::new(BigInt::from(-1234), BigInt::from(5678));
        let r = (want.numer() * want.denom().modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(rational_reconstruct(&r, &m), Some(want));
        assert_eq!(rational_reconstruct(&BigInt::from(3), &m), Some(Rat::from(3)));
    }
}
