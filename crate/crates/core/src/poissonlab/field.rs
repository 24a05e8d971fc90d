//! Bivector fields written as finite sums `sum c · V_a ∧ V_b` of vector
//! fields induced by infinitesimal translations of representative slots.
//!
//! `Side::Left` pushes `g -> (I + s x) g`, the right-invariant field `x^R`;
//! `Side::Right` pushes `g -> g (I + s x)`, the left-invariant field `x^L`.
//! Such fields descend to the quotients whenever the total bivector does,
//! and the chart reads off the descended values directly.

use num_traits::{One, Zero};

use super::chart::{total_slots, Factor};
use super::lie::{dual_bases, e_neg, e_pos, positive_roots, torus_casimir};
use crate::error::{Error, Result};
use crate::groupcore::{QMat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Infinitesimal translation of one slot by a Lie algebra element.
#[derive(Clone, Debug, PartialEq)]
pub struct Push {
    pub slot: usize,
    pub side: Side,
    pub x: QMat,
}

/// A vector field: the pushes act simultaneously.
pub type Flow = Vec<Push>;

pub fn push(slot: usize, side: Side, x: QMat) -> Flow {
    vec![Push { slot, side, x }]
}

pub fn left(slot: usize, x: QMat) -> Flow {
    push(slot, Side::Left, x)
}

pub fn right(slot: usize, x: QMat) -> Flow {
    push(slot, Side::Right, x)
}

/// A bivector field on a product space of representatives.
#[derive(Clone, Debug)]
pub struct Field {
    pub name: String,
    pub size: usize,
    pub factors: Vec<Factor>,
    pub flows: Vec<Flow>,
    pub terms: Vec<(Rat, usize, usize)>,
}

impl Field {
    pub fn zero(name: &str, size: usize, factors: &[Factor]) -> Self {
        Field { name: name.to_string(), size, factors: factors.to_vec(), flows: Vec::new(), terms: Vec::new() }
    }

    pub fn slots(&self) -> usize {
        total_slots(&self.factors)
    }

    fn intern(&mut self, f: Flow) -> usize {
        if let Some(i) = self.flows.iter().position(|g| *g == f) {
            return i;
        }
        self.flows.push(f);
        self.flows.len() - 1
    }

    /// Add `c · a ∧ b`.
    pub fn wedge(&mut self, c: Rat, a: Flow, b: Flow) {
        if c.is_zero() || a.is_empty() || b.is_empty() {
            return;
        }
        let ia = self.intern(a);
        let ib = self.intern(b);
        self.terms.push((c, ia, ib));
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn scaled(mut self, c: &Rat) -> Self {
        for t in &mut self.terms {
            t.0 = &t.0 * c;
        }
        self
    }

    /// Sum of two fields on the same space.
    pub fn plus(mut self, o: &Field) -> Result<Self> {
        if self.factors != o.factors || self.size != o.size {
            return Err(Error::DimensionMismatch(format!("adding {} to {}", o.name, self.name)));
        }
        for (c, a, b) in &o.terms {
            self.wedge(c.clone(), o.flows[*a].clone(), o.flows[*b].clone());
        }
        Ok(self)
    }

    /// `(self, 0) + (0, o)` on the product space.
    pub fn product(&self, o: &Field) -> Result<Self> {
        if self.size != o.size {
            return Err(Error::DimensionMismatch("matrix sizes differ".into()));
        }
        let shift = self.slots();
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        let mut out = Field { factors, ..self.clone() };
        out.name = format!("({}, {})", self.name, o.name);
        for (c, a, b) in &o.terms {
            out.wedge(c.clone(), shifted(&o.flows[*a], shift), shifted(&o.flows[*b], shift));
        }
        Ok(out)
    }
}

pub fn shifted(f: &Flow, by: usize) -> Flow {
    f.iter().map(|p| Push { slot: p.slot + by, ..p.clone() }).collect()
}

/// Sum of flows with the same slot structure, e.g. a diagonal action.
pub fn join(fs: &[Flow]) -> Flow {
    fs.iter().flatten().cloned().collect()
}

pub fn scale_flow(f: &Flow, c: &Rat) -> Flow {
    f.iter().map(|p| Push { x: p.x.scale(c), ..p.clone() }).collect()
}

/// `pi_st = Lambda^L - Lambda^R` on one slot, `Lambda = sum E_{-a} ∧ E_a`.
fn add_pi_st(f: &mut Field, slot: usize, sign: &Rat) {
    let n = f.size;
    for a in positive_roots(n) {
        f.wedge(sign.clone(), right(slot, e_neg(n, a)), right(slot, e_pos(n, a)));
        f.wedge(-sign.clone(), left(slot, e_neg(n, a)), left(slot, e_pos(n, a)));
    }
}

/// The product of `pi_st` over every group slot: `pi_st` on `G`, and after
/// projection `pi_n`, the tilde version on `G x_B ... x_B G`, its
/// `B_-` counterpart, and zero on torus factors.
pub fn standard(size: usize, factors: &[Factor]) -> Field {
    let mut f = Field::zero("pi_st", size, factors);
    let mut slot = 0;
    let one = Rat::one();
    for fac in factors {
        if *fac != Factor::Torus {
            for k in 0..fac.slots() {
                add_pi_st(&mut f, slot + k, &one);
            }
        }
        slot += fac.slots();
    }
    f
}

/// `pi_st` on a single group factor.
pub fn pi_st(size: usize, factor: Factor) -> Field {
    standard(size, &[factor])
}

/// `Lambda^L + Lambda^R`: not multiplicative, used as a negative control.
pub fn lambda_sum(size: usize, factor: Factor) -> Field {
    let mut f = Field::zero("Lambda^L + Lambda^R", size, &[factor]);
    for a in positive_roots(size) {
        f.wedge(Rat::one(), right(0, e_neg(size, a)), right(0, e_pos(size, a)));
        f.wedge(Rat::one(), left(0, e_neg(size, a)), left(0, e_pos(size, a)));
    }
    f
}

/// Mixed product `(pi_X, 0) + (0, pi_Y) - sum rho(xi_i^*) ∧ lambda(xi_i)`
/// over the dual bases `xi_i = x_i` of `b_-` and `xi_i^* = x^i` of `b`.
/// `rho` and `lambda` give the induced flows in the slots of X and Y.
pub fn mixed(
    x: &Field,
    y: &Field,
    rho: impl Fn(&QMat) -> Flow,
    lambda: impl Fn(&QMat) -> Flow,
) -> Result<Field> {
    let mut out = x.product(y)?;
    let shift = x.slots();
    for (xi, xi_star) in dual_bases(x.size) {
        out.wedge(-Rat::one(), rho(&xi_star), shifted(&lambda(&xi), shift));
    }
    Ok(out.named(&format!("{} x {}", x.name, y.name)))
}

/// `pi_m ⋈ pi_n` (and `pi_m ⋈ pi_st`): the right action `rho_m` of `B`
/// on the first slot of X, `b^{-1} g`, against left translation of the
/// first slot of Y.
pub fn bowtie(size: usize, x: Factor, y: Factor) -> Result<Field> {
    let fx = pi_st(size, x);
    let fy = pi_st(size, y);
    Ok(mixed(&fx, &fy, |v| left(0, v.scale(&-Rat::one())), |v| left(0, v.clone()))?.named("bowtie"))
}

/// T-extension `pi + sum_i (sigma(h_i), 0) ∧ (0, h_i^R)` onto a new torus
/// factor; `sigma(h)` is the flow of the torus action on the base.
pub fn t_extension(base: &Field, sigma: impl Fn(&QMat) -> Flow) -> Result<Field> {
    let n = base.size;
    let torus = Field::zero("0", n, &[Factor::Torus]);
    let mut out = base.product(&torus)?;
    let t_slot = base.slots();
    for (c, ha, hb) in torus_casimir(n) {
        out.wedge(c, sigma(&ha), left(t_slot, hb));
    }
    Ok(out.named(&format!("{} ⋈ 0", base.name)))
}

/// `pi_n ⋈ 0` on `F_n x T`, through the left action on the first slot.
pub fn bowtie_zero(size: usize, fac: Factor) -> Result<Field> {
    t_extension(&pi_st(size, fac), |h| left(0, h.clone()))
}

/// The mixed product on `B^n` (flag variety factors):
/// `(pi_1, ..., pi_1) + sum_{j<k} sum_i (x^i)_j ∧ (x_i)_k`, left pushes.
pub fn opi(size: usize, n: usize) -> Field {
    let factors = vec![Factor::Pos { arity: 1, tail: super::chart::Tail::Flags }; n];
    let mut f = standard(size, &factors).named("opi");
    for j in 0..n {
        for k in j + 1..n {
            for (lo, up) in dual_bases(size) {
                f.wedge(Rat::one(), left(j, up), left(k, lo));
            }
        }
    }
    f
}

/// `pi~_{m,n}` on `F~_m x F~_{-n}`: the mixed product for the actions
/// `(b_1, b_2): [g] -> [b_1^{-1} g_1, ..., g_m b_2]` and
/// `(c_1, c_2): [k] -> [c_1 k_1, ..., k_n c_2]`.
pub fn tpi_mn(size: usize, m: usize, n: usize) -> Result<Field> {
    let fx = pi_st(size, Factor::Pos { arity: m, tail: super::chart::Tail::Group });
    let fy = pi_st(size, Factor::Neg { arity: n });
    let mut out = fx.product(&fy)?;
    let y0 = m;
    let ylast = m + n - 1;
    for (lo, up) in dual_bases(size) {
        out.wedge(-Rat::one(), left(0, up.scale(&-Rat::one())), left(y0, lo.clone()));
        out.wedge(-Rat::one(), right(m - 1, up), right(ylast, lo));
    }
    Ok(out.named(&format!("pi~_({},{})", m, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_merges_flows() {
        let f = standard(3, &[Factor::Entries]);
        // six root vectors, each pushed on two sides
        assert_eq!(f.flows.len(), 12);
        assert_eq!(f.terms.len(), 6);
    }

    #[test]
    fn product_shifts_slots() {
        let a = pi_st(2, Factor::Entries);
        let p = a.product(&a).unwrap();
        assert!(p.flows.iter().any(|fl| fl[0].slot == 1));
        assert_eq!(p.terms.len(), 2 * a.terms.len());
    }
}
