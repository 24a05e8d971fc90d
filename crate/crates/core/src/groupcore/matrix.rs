use std::fmt;

use num_traits::Zero;

use super::scalar::{rat_to_string, Rat, Scalar};
use crate::error::{Error, Result};

/// Square matrix over an exact scalar, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    n: usize,
    e: Vec<S>,
}

pub type QMat = Mat<Rat>;

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| rat_to_string(self.get(i, j).value())).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, e: vec![S::szero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i * n + i] = S::sone();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                e.push(f(i, j));
            }
        }
        Mat { n, e }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(Mat { n, e: rows.into_iter().flatten().collect() })
    }

    pub fn diag(d: &[S]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i * n + i] = d[i].clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.e[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.e[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.e
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|i| self.e[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        debug_assert_eq!(n, o.n);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<S> = None;
                for k in 0..n {
                    let a = &self.e[i * n + k];
                    let b = &o.e[k * n + j];
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    let p = a.mul(b);
                    acc = Some(match acc {
                        None => p,
                        Some(x) => x.add(&p),
                    });
                }
                out.push(acc.unwrap_or_else(S::szero));
            }
        }
        Mat { n, e: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat { n: self.n, e: self.e.iter().zip(&o.e).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Mat { n: self.n, e: self.e.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Product of a sequence of matrices; the identity for an empty slice.
    pub fn product(ms: &[Mat<S>], n: usize) -> Self {
        let mut it = ms.iter();
        match it.next() {
            None => Self::identity(n),
            Some(first) => it.fold(first.clone(), |acc, m| acc.mul(m)),
        }
    }

    /// Constant parts of the entries.
    pub fn values(&self) -> QMat {
        Mat { n: self.n, e: self.e.iter().map(|x| x.value().clone()).collect() }
    }

    pub fn lift(m: &QMat) -> Self {
        Mat { n: m.n, e: m.e.iter().map(|x| S::from_rat(x.clone())).collect() }
    }

    pub fn exact_eq(&self, o: &Self) -> bool {
        self.n == o.n && self.e.iter().zip(&o.e).all(|(a, b)| a.exact_eq(b))
    }

    /// Inverse by Gauss-Jordan elimination, pivoting on nonzero values.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).value_is_zero()).ok_or(Error::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.e.swap(piv * n + j, col * n + j);
                    inv.e.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv().ok_or(Error::Singular)?;
            for j in 0..n {
                let x = a.get(col, j).mul(&p);
                a.set(col, j, x);
                let y = inv.get(col, j).mul(&p);
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_exact_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, x);
                    let y = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(r, j, y);
                }
            }
        }
        Ok(inv)
    }

    /// Determinant of the leading k×k block by elimination with row pivoting.
    pub fn leading_minor(&self, k: usize) -> S {
        let mut a: Vec<Vec<S>> = (0..k).map(|i| (0..k).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut det = S::sone();
        for col in 0..k {
            let Some(piv) = (col..k).find(|&r| !a[r][col].value_is_zero()) else {
                // value part of the minor vanishes; fall back to exact cofactor expansion
                return cofactor_det(&(0..k).map(|i| (0..k).map(|j| self.get(i, j).clone()).collect()).collect::<Vec<_>>());
            };
            if piv != col {
                a.swap(piv, col);
                det = det.neg();
            }
            det = det.mul(&a[col][col]);
            let p = a[col][col].inv().expect("nonzero pivot");
            for r in col + 1..k {
                if a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].mul(&p);
                for j in col..k {
                    let x = a[r][j].sub(&f.mul(&a[col][j]));
                    a[r][j] = x;
                }
            }
        }
        det
    }

    pub fn det(&self) -> S {
        self.leading_minor(self.n)
    }

    pub fn is_upper(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_exact_zero()))
    }

    pub fn is_lower(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_exact_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_upper() && self.is_lower()
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).exact_eq(&S::sone()))
    }

    pub fn is_unit_upper(&self) -> bool {
        self.is_upper() && self.has_unit_diagonal()
    }

    pub fn is_unit_lower(&self) -> bool {
        self.is_lower() && self.has_unit_diagonal()
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_diagonal() && self.has_unit_diagonal()
    }

    /// Strictly lower part plus identity.
    pub fn unit_lower_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.get(i, j).clone(),
            std::cmp::Ordering::Equal => S::sone(),
            std::cmp::Ordering::Less => S::szero(),
        })
    }
}

/// Determinant by Laplace expansion; only used when elimination stalls on a
/// vanishing value, which happens for jets sitting on a degenerate locus.
fn cofactor_det<S: Scalar>(a: &[Vec<S>]) -> S {
    let k = a.len();
    if k == 0 {
        return S::sone();
    }
    if k == 1 {
        return a[0][0].clone();
    }
    let mut acc = S::szero();
    for j in 0..k {
        if a[0][j].is_exact_zero() {
            continue;
        }
        let sub: Vec<Vec<S>> = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = a[0][j].mul(&cofactor_det(&sub));
        acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

impl QMat {
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        Mat::from_fn(n, |i, j| Rat::from_integer(rows[i][j].into()))
    }

    /// Rank of a square rational matrix.
    pub fn rank(&self) -> usize {
        RMat::from_square(self).rank()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }
}

/// Rectangular rational matrix for linear algebra on bivectors and Jacobians.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<Rat>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat { rows, cols, e: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_square(m: &QMat) -> Self {
        RMat { rows: m.n, cols: m.n, e: m.e.clone() }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.e[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.e[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = RMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &RMat) -> RMat {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = RMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| x.is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.at(i, j) == &-self.at(j, i)))
    }

    pub fn sub(&self, o: &RMat) -> RMat {
        RMat { rows: self.rows, cols: self.cols, e: self.e.iter().zip(&o.e).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, r: &Rat) -> RMat {
        RMat { rows: self.rows, cols: self.cols, e: self.e.iter().map(|a| a * r).collect() }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RMat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..a.cols {
                    a.e.swap(p * a.cols + j, row * a.cols + j);
                }
            }
            let inv = a.at(row, col).recip();
            for j in 0..a.cols {
                let v = a.at(row, j) * &inv;
                *a.at_mut(row, j) = v;
            }
            for r in 0..a.rows {
                if r == row || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..a.cols {
                    let v = a.at(r, j) - &f * a.at(row, j);
                    *a.at_mut(r, j) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {x : A x = 0}, as columns of the result.
    pub fn null_space(&self) -> RMat {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = RMat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            *out.at_mut(f, k) = Rat::from_integer(1.into());
            for (i, &p) in piv.iter().enumerate() {
                *out.at_mut(p, k) = -r.at(i, f).clone();
            }
        }
        out
    }
}
