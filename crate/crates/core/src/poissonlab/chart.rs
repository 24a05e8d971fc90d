//! Charts on products of configuration spaces.
//!
//! A point is stored as a tuple of matrices, one per slot. A chart is
//! centered at a base tuple and reads coordinates off successive Gauss
//! factorizations, so it accepts any representative of a point near the
//! base and works over jets.

use std::ops::Range;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::groupcore::{gauss, Jet, Mat, QMat, Rat, Scalar};

/// What the last slot of a positive factor is divided by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// nothing: `G x_B ... x_B G`
    Group,
    /// `B`: the flag space `F_n`
    Flags,
    /// `N`: decorated flags in the last slot
    Decorated,
}

/// One factor of a product space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `G x_B ... x_B G` with `arity` slots and the given tail.
    Pos { arity: usize, tail: Tail },
    /// `G x_{B_-} ... x_{B_-} G`.
    Neg { arity: usize },
    /// `G` in matrix-entry coordinates: every entry but the last one.
    Entries,
    /// The maximal torus, as diagonal matrices.
    Torus,
}

impl Factor {
    pub fn slots(&self) -> usize {
        match self {
            Factor::Pos { arity, .. } | Factor::Neg { arity } => *arity,
            Factor::Entries | Factor::Torus => 1,
        }
    }

    /// Dimension for matrices of size n.
    pub fn dim(&self, n: usize) -> usize {
        let p = n * (n - 1) / 2;
        let r = n - 1;
        match self {
            Factor::Pos { arity, tail } => {
                (arity - 1) * p
                    + match tail {
                        Tail::Group => n * n - 1,
                        Tail::Flags => p,
                        Tail::Decorated => p + r,
                    }
            }
            Factor::Neg { arity } => (arity - 1) * p + n * n - 1,
            Factor::Entries => n * n - 1,
            Factor::Torus => r,
        }
    }
}

pub fn pos(arity: usize) -> Factor {
    Factor::Pos { arity, tail: Tail::Group }
}

pub fn flags(arity: usize) -> Factor {
    Factor::Pos { arity, tail: Tail::Flags }
}

pub fn neg(arity: usize) -> Factor {
    Factor::Neg { arity }
}

pub fn total_slots(factors: &[Factor]) -> usize {
    factors.iter().map(|f| f.slots()).sum()
}

/// A chart on a product space, centered at a base representative.
#[derive(Clone, Debug)]
pub struct Chart {
    pub name: String,
    pub size: usize,
    pub factors: Vec<Factor>,
    pub base: Vec<QMat>,
}

fn lower_entries<S: Scalar>(m: &Mat<S>, out: &mut Vec<S>) {
    let n = m.size();
    for i in 0..n {
        for j in 0..i {
            out.push(m.get(i, j).clone());
        }
    }
}

fn upper_entries<S: Scalar>(m: &Mat<S>, out: &mut Vec<S>) {
    let n = m.size();
    for i in 0..n {
        for j in i + 1..n {
            out.push(m.get(i, j).clone());
        }
    }
}

fn take<'a, S: Scalar>(z: &'a [S], k: &mut usize, len: usize) -> &'a [S] {
    let s = &z[*k..*k + len];
    *k += len;
    s
}

fn unit_lower<S: Scalar>(n: usize, z: &[S]) -> Mat<S> {
    let mut m = Mat::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in 0..i {
            m.set(i, j, z[k].clone());
            k += 1;
        }
    }
    m
}

fn unit_upper<S: Scalar>(n: usize, z: &[S]) -> Mat<S> {
    let mut m = Mat::identity(n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, z[k].clone());
            k += 1;
        }
    }
    m
}

/// `diag(1 + z_1, ..., 1 + z_r, 1 / prod)`.
fn torus_from<S: Scalar>(z: &[S]) -> Result<Mat<S>> {
    let d: Vec<S> = z.iter().map(|x| x.add(&S::sone())).collect();
    torus_diag(&d)
}

/// `diag(y_1, ..., y_r, 1 / prod y)`.
pub fn torus_diag<S: Scalar>(y: &[S]) -> Result<Mat<S>> {
    let mut d = y.to_vec();
    let prod = d.iter().fold(S::sone(), |acc, x| acc.mul(x));
    d.push(prod.inv().ok_or_else(|| Error::NotInChartDomain("torus coordinate -1".into()))?);
    Ok(Mat::diag(&d))
}

fn gauss_in_chart<S: Scalar>(h: &Mat<S>, slot: usize) -> Result<crate::groupcore::Gauss<S>> {
    gauss(h).map_err(|_| Error::NotInChartDomain(format!("slot {} leaves the Gauss cell", slot + 1)))
}

impl Chart {
    pub fn centered(name: &str, factors: &[Factor], base: &[QMat]) -> Result<Self> {
        if total_slots(factors) != base.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} slots for {} matrices",
                total_slots(factors),
                base.len()
            )));
        }
        let size = base[0].size();
        Ok(Chart { name: name.to_string(), size, factors: factors.to_vec(), base: base.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim(self.size)).sum()
    }

    pub fn slots(&self) -> usize {
        self.base.len()
    }

    /// Slot range of each factor.
    pub fn slot_ranges(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut acc = 0;
        for f in &self.factors {
            out.push(acc..acc + f.slots());
            acc += f.slots();
        }
        out
    }

    fn base_inv(&self, slot: usize) -> Result<QMat> {
        self.base[slot].inverse()
    }

    /// Coordinates of any representative near the base.
    pub fn coords<S: Scalar>(&self, rep: &[Mat<S>]) -> Result<Vec<S>> {
        if rep.len() != self.slots() {
            return Err(Error::DimensionMismatch(format!("{} slots, chart has {}", rep.len(), self.slots())));
        }
        let n = self.size;
        let mut out = Vec::with_capacity(self.dim());
        for (f, range) in self.factors.iter().zip(self.slot_ranges()) {
            match *f {
                Factor::Pos { arity, tail } => {
                    let mut b = Mat::<S>::identity(n);
                    for k in 0..arity {
                        let slot = range.start + k;
                        let h = Mat::lift(&self.base_inv(slot)?).mul(&b).mul(&rep[slot]);
                        let gs = gauss_in_chart(&h, slot)?;
                        lower_entries(&gs.l, &mut out);
                        if k + 1 == arity {
                            match tail {
                                Tail::Group => {
                                    push_torus(&gs.d, &mut out);
                                    upper_entries(&gs.u, &mut out);
                                }
                                Tail::Flags => {}
                                Tail::Decorated => push_torus(&gs.d, &mut out),
                            }
                        }
                        b = gs.upper_part();
                    }
                }
                Factor::Neg { arity } => {
                    let mut blocks: Vec<Vec<S>> = vec![Vec::new(); arity];
                    let mut beta = Mat::<S>::identity(n);
                    for k in (0..arity).rev() {
                        let slot = range.start + k;
                        let h = rep[slot].mul(&beta).mul(&Mat::lift(&self.base_inv(slot)?));
                        let gs = gauss_in_chart(&h, slot)?;
                        if k == 0 {
                            lower_entries(&gs.l, &mut blocks[k]);
                            push_torus(&gs.d, &mut blocks[k]);
                        }
                        upper_entries(&gs.u, &mut blocks[k]);
                        beta = gs.lower_part();
                    }
                    out.extend(blocks.into_iter().flatten());
                }
                Factor::Entries => {
                    let slot = range.start;
                    let g0 = &self.base[slot];
                    for i in 0..n {
                        for j in 0..n {
                            if i == n - 1 && j == n - 1 {
                                continue;
                            }
                            out.push(rep[slot].get(i, j).sub(&S::from_rat(g0.get(i, j).clone())));
                        }
                    }
                }
                Factor::Torus => {
                    let slot = range.start;
                    for a in 0..n - 1 {
                        let t0 = self.base[slot].get(a, a).clone();
                        out.push(rep[slot].get(a, a).scale(&t0.recip()).sub(&S::sone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Representative with the given coordinates; `param(0)` is the base.
    pub fn param<S: Scalar>(&self, z: &[S]) -> Result<Vec<Mat<S>>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{} coordinates, chart has {}", z.len(), self.dim())));
        }
        let n = self.size;
        let p = n * (n - 1) / 2;
        let r = n - 1;
        let mut k = 0;
        let mut out = Vec::with_capacity(self.slots());
        for (f, range) in self.factors.iter().zip(self.slot_ranges()) {
            match *f {
                Factor::Pos { arity, tail } => {
                    for i in 0..arity {
                        let g0 = Mat::lift(&self.base[range.start + i]);
                        let l = unit_lower(n, take(z, &mut k, p));
                        let m = if i + 1 == arity {
                            match tail {
                                Tail::Group => {
                                    let t = torus_from(take(z, &mut k, r))?;
                                    let u = unit_upper(n, take(z, &mut k, p));
                                    l.mul(&t).mul(&u)
                                }
                                Tail::Flags => l,
                                Tail::Decorated => l.mul(&torus_from(take(z, &mut k, r))?),
                            }
                        } else {
                            l
                        };
                        out.push(g0.mul(&m));
                    }
                }
                Factor::Neg { arity } => {
                    for i in 0..arity {
                        let g0 = Mat::lift(&self.base[range.start + i]);
                        let m = if i == 0 {
                            let l = unit_lower(n, take(z, &mut k, p));
                            let t = torus_from(take(z, &mut k, r))?;
                            let u = unit_upper(n, take(z, &mut k, p));
                            l.mul(&t).mul(&u)
                        } else {
                            unit_upper(n, take(z, &mut k, p))
                        };
                        out.push(m.mul(&g0));
                    }
                }
                Factor::Entries => {
                    let g0 = &self.base[range.start];
                    let zs = take(z, &mut k, n * n - 1);
                    let mut g = Mat::<S>::zeros(n);
                    let mut q = 0;
                    for i in 0..n {
                        for j in 0..n {
                            if i == n - 1 && j == n - 1 {
                                continue;
                            }
                            g.set(i, j, zs[q].add(&S::from_rat(g0.get(i, j).clone())));
                            q += 1;
                        }
                    }
                    // det is affine in the last entry: det = g_nn · M + R
                    let rest = g.det();
                    let minor = g.leading_minor(n - 1);
                    let last = S::sone()
                        .sub(&rest)
                        .div(&minor)
                        .ok_or_else(|| Error::NotInChartDomain("leading minor vanishes".into()))?;
                    g.set(n - 1, n - 1, last);
                    out.push(g);
                }
                Factor::Torus => {
                    let t0 = Mat::lift(&self.base[range.start]);
                    out.push(t0.mul(&torus_from(take(z, &mut k, r))?));
                }
            }
        }
        Ok(out)
    }

    /// True when the representative lies in the chart domain.
    pub fn contains(&self, rep: &[QMat]) -> bool {
        self.coords(rep).is_ok()
    }
}

fn push_torus<S: Scalar>(d: &[S], out: &mut Vec<S>) {
    for x in &d[..d.len() - 1] {
        out.push(x.sub(&S::sone()));
    }
}

/// Constant jets.
pub fn lift_rep(rep: &[QMat]) -> Vec<Mat<Jet>> {
    rep.iter().map(Mat::lift).collect()
}

pub fn values(rep: &[Mat<Jet>]) -> Vec<QMat> {
    rep.iter().map(|m| m.values()).collect()
}

/// Parametrization of a submanifold (or of an open set) by rational
/// coordinates, landing in representatives of an ambient product space.
#[derive(Clone)]
pub struct SubChart {
    pub name: String,
    pub dim: usize,
    pub ambient: Vec<Factor>,
    param: Arc<dyn Fn(&[Jet]) -> Result<Vec<Mat<Jet>>> + Send + Sync>,
}

impl std::fmt::Debug for SubChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SubChart({}, dim {})", self.name, self.dim)
    }
}

impl SubChart {
    pub fn new(
        name: &str,
        dim: usize,
        ambient: &[Factor],
        param: impl Fn(&[Jet]) -> Result<Vec<Mat<Jet>>> + Send + Sync + 'static,
    ) -> Self {
        SubChart { name: name.to_string(), dim, ambient: ambient.to_vec(), param: Arc::new(param) }
    }

    /// The chart itself, seen as a parametrization of an open set.
    pub fn from_chart(chart: &Chart) -> Self {
        let c = chart.clone();
        SubChart::new(&chart.name, chart.dim(), &chart.factors, move |z| c.param(z))
    }

    pub fn param_jets(&self, z: &[Jet]) -> Result<Vec<Mat<Jet>>> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("{} coordinates, chart has {}", z.len(), self.dim)));
        }
        (self.param)(z)
    }

    pub fn reps(&self, z: &[Rat]) -> Result<Vec<QMat>> {
        let zs: Vec<Jet> = z.iter().cloned().map(Jet::constant).collect();
        Ok(values(&self.param_jets(&zs)?))
    }

    /// Ambient chart centered at the image of z.
    pub fn ambient_at(&self, z: &[Rat]) -> Result<Chart> {
        Chart::centered(&format!("{} (ambient)", self.name), &self.ambient, &self.reps(z)?)
    }
}

/// Twist a representative by elements of the structure groups: for a
/// positive factor `(g_1 b_1, b_1^{-1} g_2 b_2, ...)`, for a negative factor
/// `(g_1 c_1, c_1^{-1} g_2 c_2, ...)` with `c_i` lower triangular. The last
/// slot is twisted only when its tail is divided out.
pub fn twist(factors: &[Factor], rep: &[QMat], upper: &[QMat], lower: &[QMat]) -> Result<Vec<QMat>> {
    let mut out = rep.to_vec();
    let mut start = 0;
    for f in factors {
        match *f {
            Factor::Pos { arity, tail } => {
                let twists = if tail == Tail::Group { arity - 1 } else { arity };
                for k in 0..twists {
                    let b = &upper[(start + k) % upper.len()];
                    let b = match (k + 1 == arity, tail) {
                        (true, Tail::Decorated) => unipotent_part(b),
                        _ => b.clone(),
                    };
                    out[start + k] = out[start + k].mul(&b);
                    if k + 1 < arity {
                        out[start + k + 1] = b.inverse()?.mul(&out[start + k + 1]);
                    }
                }
            }
            Factor::Neg { arity } => {
                for k in 0..arity - 1 {
                    let c = &lower[(start + k) % lower.len()];
                    out[start + k] = out[start + k].mul(c);
                    out[start + k + 1] = c.inverse()?.mul(&out[start + k + 1]);
                }
            }
            Factor::Entries | Factor::Torus => {}
        }
        start += f.slots();
    }
    Ok(out)
}

fn unipotent_part(b: &QMat) -> QMat {
    let n = b.size();
    let d = b.diagonal();
    Mat::from_fn(n, |i, j| if i == j { Rat::one() } else { b.get(i, j) / &d[i] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::Scalar;
    use crate::sample::Sampler;

    fn roundtrip(factors: &[Factor], s: &mut Sampler, n: usize) {
        let slots = total_slots(factors);
        let mut base: Vec<QMat> = (0..slots).map(|_| s.generic(n)).collect();
        let mut at = 0;
        for f in factors {
            match f {
                Factor::Torus => base[at] = s.torus(n - 1).to_matrix(),
                Factor::Entries => {
                    while base[at].leading_minor(n - 1) == Rat::szero() {
                        base[at] = s.generic(n);
                    }
                }
                _ => {}
            }
            at += f.slots();
        }
        let c = Chart::centered("t", factors, &base).unwrap();
        let zero = vec![Rat::szero(); c.dim()];
        let at0 = c.param(&zero).unwrap();
        assert_eq!(at0, base);
        assert!(c.coords(&base).unwrap().iter().all(|x| x == &Rat::szero()));
        let z: Vec<Rat> = (0..c.dim()).map(|_| s.rat() / Rat::from_integer(7.into())).collect();
        let rep = c.param(&z).unwrap();
        assert_eq!(c.coords(&rep).unwrap(), z);
        // any other representative of the same point has the same coordinates
        let ups: Vec<QMat> = (0..slots).map(|_| s.borel(n)).collect();
        let lows: Vec<QMat> = (0..slots).map(|_| s.borel_minus(n)).collect();
        let tw = twist(factors, &rep, &ups, &lows).unwrap();
        assert_eq!(c.coords(&tw).unwrap(), z);
    }

    #[test]
    fn param_and_coords_are_inverse() {
        let mut s = Sampler::new(5);
        for n in 2..=3 {
            roundtrip(&[pos(1)], &mut s, n);
            roundtrip(&[pos(3)], &mut s, n);
            roundtrip(&[flags(2), Factor::Torus], &mut s, n);
            roundtrip(&[Factor::Pos { arity: 2, tail: Tail::Decorated }], &mut s, n);
            roundtrip(&[pos(2), neg(2)], &mut s, n);
            roundtrip(&[Factor::Entries], &mut s, n);
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(flags(2).dim(3), 6);
        assert_eq!(pos(2).dim(3), 11);
        assert_eq!(neg(1).dim(2), 3);
        assert_eq!(Factor::Pos { arity: 1, tail: Tail::Decorated }.dim(3), 5);
    }
}
