//! Truncated multivariate Taylor polynomials with rational coefficients.
//!
//! A `Jet` of degree 2 in `k` directions stores
//! `v + sum_i d1[i] x_i + sum_{i<=j} d2[(i,j)] x_i x_j`.
//! Empty coefficient vectors stand for zero, which keeps constants cheap.

use num_traits::Zero;

use super::scalar::{Rat, Scalar};

#[derive(Clone, Debug)]
pub struct Jet {
    pub v: Rat,
    pub d1: Vec<Rat>,
    /// packed upper triangle, row-major over i <= j
    pub d2: Vec<Rat>,
    /// truncation degree, 1 or 2; constants carry 2
    pub deg: u8,
}

/// Offset of (i, j), i <= j, in the packed upper triangle of a k×k array.
#[inline]
pub fn tri_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < k);
    i * k - i * (i + 1) / 2 + j
}

impl Jet {
    pub fn constant(v: Rat) -> Self {
        Jet { v, d1: Vec::new(), d2: Vec::new(), deg: 2 }
    }

    /// The coordinate function `v + x_i` in `k` directions.
    pub fn var(v: Rat, i: usize, k: usize, deg: u8) -> Self {
        let mut d1 = vec![Rat::zero(); k];
        d1[i] = Rat::from_integer(1.into());
        Jet { v, d1, d2: Vec::new(), deg }
    }

    /// `v + sum_i lin[i] x_i`.
    pub fn affine(v: Rat, lin: Vec<Rat>, deg: u8) -> Self {
        Jet { v, d1: lin, d2: Vec::new(), deg }
    }

    pub fn k(&self) -> usize {
        self.d1.len()
    }

    pub fn d1_at(&self, i: usize) -> Rat {
        self.d1.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of `x_i x_j` (as stored, i.e. the monomial coefficient).
    pub fn d2_at(&self, i: usize, j: usize) -> Rat {
        if self.d2.is_empty() {
            return Rat::zero();
        }
        let k = self.k();
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.d2[tri_index(k, a, b)].clone()
    }

    fn kk(a: &Jet, b: &Jet) -> usize {
        a.d1.len().max(b.d1.len())
    }
}

fn add_vec(a: &[Rat], b: &[Rat], sub: bool) -> Vec<Rat> {
    if b.is_empty() {
        return a.to_vec();
    }
    if a.is_empty() {
        return if sub { b.iter().map(|x| -x).collect() } else { b.to_vec() };
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| if sub { x - y } else { x + y })
        .collect()
}

fn scale_vec(a: &[Rat], s: &Rat) -> Vec<Rat> {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * s).collect()
}

/// Packed product `sym(a ⊗ b)` as monomial coefficients of (a·x)(b·x).
fn outer(a: &[Rat], b: &[Rat], k: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); k * (k + 1) / 2];
    let nz_a: Vec<usize> = (0..k).filter(|&i| !a[i].is_zero()).collect();
    let nz_b: Vec<usize> = (0..k).filter(|&i| !b[i].is_zero()).collect();
    for &i in &nz_a {
        for &j in &nz_b {
            let p = &a[i] * &b[j];
            let (x, y) = if i <= j { (i, j) } else { (j, i) };
            out[tri_index(k, x, y)] += p;
        }
    }
    out
}

impl Scalar for Jet {
    fn from_rat(r: Rat) -> Self {
        Jet::constant(r)
    }
    fn value(&self) -> &Rat {
        &self.v
    }
    fn is_exact_zero(&self) -> bool {
        self.v.is_zero() && self.d1.iter().all(|x| x.is_zero()) && self.d2.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        let deg = self.deg.min(o.deg);
        Jet {
            v: &self.v + &o.v,
            d1: add_vec(&self.d1, &o.d1, false),
            d2: if deg >= 2 { add_vec(&self.d2, &o.d2, false) } else { Vec::new() },
            deg,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        let deg = self.deg.min(o.deg);
        Jet {
            v: &self.v - &o.v,
            d1: add_vec(&self.d1, &o.d1, true),
            d2: if deg >= 2 { add_vec(&self.d2, &o.d2, true) } else { Vec::new() },
            deg,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let deg = self.deg.min(o.deg);
        let k = Jet::kk(self, o);
        let v = &self.v * &o.v;
        let d1 = add_vec(&scale_vec(&self.d1, &o.v), &scale_vec(&o.d1, &self.v), false);
        let d2 = if deg >= 2 && k > 0 {
            let mut d2 = add_vec(&scale_vec(&self.d2, &o.v), &scale_vec(&o.d2, &self.v), false);
            if !self.d1.is_empty() && !o.d1.is_empty() {
                d2 = add_vec(&d2, &outer(&self.d1, &o.d1, k), false);
            }
            d2
        } else {
            Vec::new()
        };
        Jet { v, d1, d2, deg }
    }
    fn neg(&self) -> Self {
        Jet {
            v: -&self.v,
            d1: self.d1.iter().map(|x| -x).collect(),
            d2: self.d2.iter().map(|x| -x).collect(),
            deg: self.deg,
        }
    }
    fn scale(&self, r: &Rat) -> Self {
        Jet { v: &self.v * r, d1: scale_vec(&self.d1, r), d2: scale_vec(&self.d2, r), deg: self.deg }
    }
    fn inv(&self) -> Option<Self> {
        if self.v.is_zero() {
            return None;
        }
        // 1/(v + L + Q) = 1/v - (L + Q)/v^2 + L^2/v^3
        let iv = self.v.recip();
        let iv2 = &iv * &iv;
        let k = self.k();
        let d1 = scale_vec(&self.d1, &-&iv2);
        let d2 = if self.deg >= 2 && k > 0 {
            let mut d2 = scale_vec(&self.d2, &-&iv2);
            let sq = outer(&self.d1, &self.d1, k);
            d2 = add_vec(&d2, &scale_vec(&sq, &(&iv2 * &iv)), false);
            d2
        } else {
            Vec::new()
        };
        Some(Jet { v: iv, d1, d2, deg: self.deg })
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.exact_eq(other)
    }
}
