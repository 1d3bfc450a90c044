//! Dense linear algebra over an exact field.

use super::{Field, Rat, RatN, ZPoly};
use crate::parallel::par_map;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<G: Field>(&self, f: impl FnMut(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).plus(&a.times(b));
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Row-vector times matrix.
    pub fn left_apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = F::zero();
                for (i, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc.plus(&x.times(self.get(i, j)));
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv();
            for j in c..self.cols {
                let v = self.get(r, j).times(&inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).minus(&f.times(rv));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).negated();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.negated();
            }
            let pv = m.get(c, c).clone();
            det = det.times(&pv);
            let inv = pv.inv();
            for i in c + 1..n {
                let f = m.get(i, c).times(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).minus(&f.times(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

impl Matrix<RatN> {
    fn specialized(&self, n0: &Rat) -> Option<Matrix<Rat>> {
        let data: Option<Vec<Rat>> = self.data.iter().map(|c| c.eval(n0)).collect();
        Some(Matrix { rows: self.rows, cols: self.cols, data: data? })
    }

    /// Nullspace over `Q(n)`. A specialization of `n` gives the rank from
    /// below; a one-dimensional kernel is then read off maximal minors of
    /// independent rows, computed fraction-free over `Z[n]`.
    pub fn nullspace_qn(&self) -> Vec<Vec<RatN>> {
        if self.rows == 0 {
            return (0..self.cols)
                .map(|j| (0..self.cols).map(|i| if i == j { RatN::one() } else { RatN::zero() }).collect())
                .collect();
        }
        let Some(spec) = SPECIAL.iter().find_map(|&n0| self.specialized(&Rat::from(n0))) else {
            return self.nullspace();
        };
        let mut t = spec.transpose();
        let rows = t.rref();
        if rows.len() == self.cols {
            return Vec::new();
        }
        if rows.len() + 1 != self.cols {
            return self.nullspace();
        }
        let null = spec.nullspace();
        let pivot = null[0].iter().rposition(|c| !c.is_zero()).expect("nonzero kernel vector");
        let sub: Vec<Vec<ZPoly>> = rows.iter().map(|&r| cleared_row(self.row(r))).collect();
        let height = sub.iter().flatten().map(|z| z.degree()).max().unwrap_or(0);
        let candidate = if height > CRAMER_DEGREE { super::modular::kernel_vector(self, pivot) } else { None };
        let e = candidate.unwrap_or_else(|| cramer(&sub));
        if e.iter().any(|c| !c.is_zero()) && self.annihilates(&e) {
            vec![e]
        } else {
            self.nullspace()
        }
    }

    /// Exact check of `self * e = 0` with denominators cleared.
    fn annihilates(&self, e: &[RatN]) -> bool {
        let ez = cleared_row(e);
        (0..self.rows).all(|r| {
            let row = cleared_row(self.row(r));
            let mut acc = ZPoly::zero();
            for (x, c) in row.iter().zip(&ez) {
                if !x.is_zero() && !c.is_zero() {
                    acc = acc.add(&x.mul(c));
                }
            }
            acc.is_zero()
        })
    }
}

const CRAMER_DEGREE: usize = 24;

/// Kernel of a full-rank `r x (r+1)` system by signed maximal minors.
fn cramer(sub: &[Vec<ZPoly>]) -> Vec<RatN> {
    let cols: Vec<usize> = (0..sub.len() + 1).collect();
    let minors = par_map(&cols, |&j| {
        let m: Vec<Vec<ZPoly>> =
            sub.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        bareiss_det(m)
    });
    minors
        .into_iter()
        .enumerate()
        .map(|(j, d)| {
            let v = RatN::from_poly(d);
            if j % 2 == 1 {
                v.negated()
            } else {
                v
            }
        })
        .collect()
}

const SPECIAL: [i64; 4] = [1009, 2003, 3001, 4007];

fn cleared_row(row: &[RatN]) -> Vec<ZPoly> {
    let mut l = ZPoly::one();
    for c in row {
        let g = l.gcd(c.denom());
        l = l.mul(&c.denom().div_exact(&g).expect("gcd divides"));
    }
    row.iter().map(|c| c.numer().mul(&l).div_exact(c.denom()).expect("lcm clears")).collect()
}

/// Fraction-free determinant over `Z[n]`.
fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = ZPoly::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return ZPoly::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = !sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = m[i][j].mul(&m[c][c]).sub(&m[i][c].mul(&m[c][j]));
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][c] = ZPoly::zero();
        }
        prev = m[c][c].clone();
    }
    let d = if n == 0 { ZPoly::one() } else { m[n - 1][n - 1].clone() };
    if sign { d.neg() } else { d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rat;

    fn q(v: i64) -> Rat {
        Rat::from(v)
    }

    #[test]
    fn nullspace_and_det() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let r = m.mul(&Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect()));
            assert!(r.is_zero());
        }
        let s = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(7), q(4)]]);
        assert_eq!(s.det(), q(1));
    }
}
