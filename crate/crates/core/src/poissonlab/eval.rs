//! Exact evaluation of bivector fields in charts and the verifiers built on
//! it: Poisson maps, coisotropy, multiplicativity, Jacobi and rank.

use std::sync::Arc;

use num_traits::Zero;

use super::chart::{lift_rep, values, Chart, Factor, SubChart};
use super::field::{Field, Flow, Side};
use super::lie::one_plus;
use crate::error::{Error, Result};
use crate::groupcore::{Jet, Mat, QMat, RMat, Rat, Scalar};

/// A bivector at a point, in the coordinates of a chart.
#[derive(Clone, Debug)]
pub struct Bivector {
    pub chart: Chart,
    pub point: Vec<Rat>,
    pub matrix: RMat,
}

impl Bivector {
    pub fn rank(&self) -> usize {
        bivector_rank(self)
    }
}

pub fn bivector_rank(bv: &Bivector) -> usize {
    bv.matrix.rank()
}

fn check_factors(chart_factors: &[Factor], field: &Field) -> Result<()> {
    if chart_factors != field.factors.as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "field {} lives on {:?}, chart on {:?}",
            field.name, field.factors, chart_factors
        )));
    }
    Ok(())
}

/// Apply every flow with its own infinitesimal parameter `x_{offset + a}`.
fn apply_flows(rep: &mut [Mat<Jet>], flows: &[Flow], k: usize, deg: u8) {
    for (a, flow) in flows.iter().enumerate() {
        let s = Jet::var(Rat::zero(), a, k, deg);
        for p in flow {
            let m = one_plus(&p.x, &s);
            rep[p.slot] = match p.side {
                Side::Left => m.mul(&rep[p.slot]),
                Side::Right => rep[p.slot].mul(&m),
            };
        }
    }
}

/// `sum c (V_a V_b^T - V_b V_a^T)` with `v[a][j]` the j-th component of flow a.
fn assemble(field: &Field, v: &[Vec<Rat>], d: usize) -> RMat {
    let mut pi = RMat::zeros(d, d);
    for (c, a, b) in &field.terms {
        for i in 0..d {
            let (va, vb) = (&v[*a][i], &v[*b][i]);
            if va.is_zero() && vb.is_zero() {
                continue;
            }
            for j in 0..d {
                let x = c * (va * &v[*b][j] - vb * &v[*a][j]);
                if !x.is_zero() {
                    *pi.at_mut(i, j) += x;
                }
            }
        }
    }
    pi
}

/// The bivector of `field` at the point represented by `rep`.
pub fn evaluate(chart: &Chart, field: &Field, rep: &[QMat]) -> Result<Bivector> {
    check_factors(&chart.factors, field)?;
    let point = chart.coords(rep)?;
    let k = field.flows.len();
    let mut r = lift_rep(rep);
    apply_flows(&mut r, &field.flows, k, 1);
    let c = chart.coords(&r)?;
    let v: Vec<Vec<Rat>> = (0..k).map(|a| c.iter().map(|x| x.d1_at(a)).collect()).collect();
    let matrix = assemble(field, &v, chart.dim());
    Ok(Bivector { chart: chart.clone(), point, matrix })
}

/// Evaluate at a representative in a chart centered there.
pub fn evaluate_at(name: &str, field: &Field, rep: &[QMat]) -> Result<Bivector> {
    let chart = Chart::centered(name, &field.factors, rep)?;
    evaluate(&chart, field, rep)
}

/// A function of representatives, evaluable on jets.
pub type RepFn = Arc<dyn Fn(&[Mat<Jet>]) -> Result<Jet> + Send + Sync>;

/// Brackets `{f_i, f_j}` of the given functions at `rep`.
pub fn brackets(field: &Field, rep: &[QMat], fns: &[RepFn]) -> Result<RMat> {
    let k = field.flows.len();
    let mut r = lift_rep(rep);
    apply_flows(&mut r, &field.flows, k, 1);
    let vals = fns.iter().map(|f| f(&r)).collect::<Result<Vec<_>>>()?;
    let v: Vec<Vec<Rat>> = (0..k).map(|a| vals.iter().map(|x| x.d1_at(a)).collect()).collect();
    Ok(assemble(field, &v, fns.len()))
}

/// Brackets of functions on `G` under `pi_st`.
pub fn pi_st_brackets(g: &QMat, fns: &[RepFn]) -> Result<RMat> {
    let f = super::field::pi_st(g.size(), Factor::Entries);
    brackets(&f, std::slice::from_ref(g), fns)
}

/// `pi_st` at g in the matrix-entry chart.
pub fn pi_st(g: &QMat) -> Result<Bivector> {
    let f = super::field::pi_st(g.size(), Factor::Entries);
    evaluate_at("matrix entries", &f, std::slice::from_ref(g))
}

/// The matrix entry `g_ij` of a slot, as a bracket functional.
pub fn entry(slot: usize, i: usize, j: usize) -> RepFn {
    Arc::new(move |r: &[Mat<Jet>]| Ok(r[slot].get(i, j).clone()))
}

/// A bivector pulled back to a sub-chart, with first derivatives when asked.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub pi: RMat,
    /// `dpi[q]` is the derivative along the q-th coordinate
    pub dpi: Vec<RMat>,
    /// Jacobian of the parametrization into the ambient chart
    pub jacobian: RMat,
    pub ambient: RMat,
}

struct AmbientJets {
    /// coordinate jets in `k + m` directions: flows first, then positions
    c: Vec<Jet>,
    k: usize,
    m: usize,
}

fn ambient_jets(sub: &SubChart, field: &Field, z0: &[Rat], deg: u8) -> Result<(Chart, AmbientJets)> {
    if sub.ambient != field.factors {
        return Err(Error::DimensionMismatch(format!("{} is not on the ambient space of {}", field.name, sub.name)));
    }
    let amb = sub.ambient_at(z0)?;
    let k = field.flows.len();
    let m = sub.dim;
    let kk = k + m;
    let z: Vec<Jet> = (0..m).map(|q| Jet::var(z0[q].clone(), k + q, kk, deg)).collect();
    let mut r = sub.param_jets(&z)?;
    apply_flows(&mut r, &field.flows, kk, deg);
    let c = amb.coords(&r)?;
    Ok((amb, AmbientJets { c, k, m }))
}

fn jets_matrix(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Jet) -> Vec<Vec<Jet>> {
    (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect()
}

/// Pull `field` back along the sub-chart at `z0`, checking that it is
/// tangent to the image. With `derivatives`, also return `d pi` in the
/// sub-chart coordinates.
pub fn restrict(sub: &SubChart, field: &Field, z0: &[Rat], derivatives: bool) -> Result<Restricted> {
    let deg = if derivatives { 2 } else { 1 };
    let (amb, aj) = ambient_jets(sub, field, z0, deg)?;
    let (k, m, d) = (aj.k, aj.m, amb.dim());
    let two = Rat::from_integer(2.into());
    // position-dependent jets in m directions, degree 1
    let a = jets_matrix(d, m, |j, l| {
        let c = &aj.c[j];
        let lin = if derivatives {
            (0..m).map(|q| if q == l { c.d2_at(k + l, k + q) * &two } else { c.d2_at(k + l, k + q) }).collect()
        } else {
            Vec::new()
        };
        Jet::affine(c.d1_at(k + l), lin, 1)
    });
    let v = jets_matrix(k, d, |fl, j| {
        let c = &aj.c[j];
        let lin = if derivatives { (0..m).map(|q| c.d2_at(fl, k + q)).collect() } else { Vec::new() };
        Jet::affine(c.d1_at(fl), lin, 1)
    });
    let mut pi_amb = vec![vec![Jet::constant(Rat::zero()); d]; d];
    for (c, fa, fb) in &field.terms {
        for i in 0..d {
            let (va, vb) = (&v[*fa][i], &v[*fb][i]);
            if is_null(va) && is_null(vb) {
                continue;
            }
            for j in 0..d {
                let x = va.mul(&v[*fb][j]).sub(&vb.mul(&v[*fa][j])).scale(c);
                pi_amb[i][j] = pi_amb[i][j].add(&x);
            }
        }
    }
    let a0 = to_rmat(&a);
    let (_, piv) = a0.transpose().rref();
    if piv.len() < m {
        return Err(Error::ConstraintViolated(format!("{} is not an immersion at this point", sub.name)));
    }
    let ap = Mat::from_fn(m, |i, j| a[piv[i]][j].clone());
    let pp = Mat::from_fn(m, |i, j| pi_amb[piv[i]][piv[j]].clone());
    let api = ap.inverse()?;
    let pi_sub = api.mul(&pp).mul(&api.transpose());
    let pi_sub_rows: Vec<Vec<Jet>> = (0..m).map(|i| (0..m).map(|j| pi_sub.get(i, j).clone()).collect()).collect();
    let ps = to_rmat(&pi_sub_rows);
    let ambient = to_rmat(&pi_amb);
    if a0.mul(&ps).mul(&a0.transpose()) != ambient {
        return Err(Error::ConstraintViolated(format!("{} is not tangent to {}", field.name, sub.name)));
    }
    let dpi = if derivatives {
        (0..m)
            .map(|q| {
                let mut r = RMat::zeros(m, m);
                for i in 0..m {
                    for j in 0..m {
                        *r.at_mut(i, j) = pi_sub.get(i, j).d1_at(q);
                    }
                }
                r
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Restricted { pi: ps, dpi, jacobian: a0, ambient })
}

fn is_null(x: &Jet) -> bool {
    x.v.is_zero() && x.d1.iter().all(|c| c.is_zero())
}

fn to_rmat(rows: &[Vec<Jet>]) -> RMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    let mut out = RMat::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            *out.at_mut(i, j) = rows[i][j].v.clone();
        }
    }
    out
}

/// Nonzero components `sum_l (pi_il d_l pi_jk + pi_jl d_l pi_ki + pi_kl d_l pi_ij)`
/// of the Schouten bracket `[pi, pi]`, for `i < j < k`.
pub fn jacobi_components(pi: &RMat, dpi: &[RMat]) -> Vec<((usize, usize, usize), Rat)> {
    let d = pi.rows;
    let term = |i: usize, j: usize, k: usize| -> Rat {
        (0..d).fold(Rat::zero(), |acc, l| {
            let p = pi.at(i, l);
            if p.is_zero() {
                acc
            } else {
                acc + p * dpi[l].at(j, k)
            }
        })
    };
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let s = term(i, j, k) + term(j, k, i) + term(k, i, j);
                if !s.is_zero() {
                    out.push(((i, j, k), s));
                }
            }
        }
    }
    out
}

/// True when the Schouten bracket of the restricted field vanishes at `z0`.
pub fn jacobi_check(sub: &SubChart, field: &Field, z0: &[Rat]) -> Result<bool> {
    let r = restrict(sub, field, z0, true)?;
    Ok(jacobi_components(&r.pi, &r.dpi).is_empty())
}

/// A map of representatives between product spaces, evaluable on jets.
#[derive(Clone)]
pub struct PoissonMap {
    pub name: String,
    pub src: Vec<Factor>,
    pub tgt: Vec<Factor>,
    f: Arc<dyn Fn(&[Mat<Jet>]) -> Result<Vec<Mat<Jet>>> + Send + Sync>,
}

impl std::fmt::Debug for PoissonMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PoissonMap({})", self.name)
    }
}

impl PoissonMap {
    pub fn new(
        name: &str,
        src: &[Factor],
        tgt: &[Factor],
        f: impl Fn(&[Mat<Jet>]) -> Result<Vec<Mat<Jet>>> + Send + Sync + 'static,
    ) -> Self {
        PoissonMap { name: name.to_string(), src: src.to_vec(), tgt: tgt.to_vec(), f: Arc::new(f) }
    }

    pub fn identity(factors: &[Factor]) -> Self {
        PoissonMap::new("id", factors, factors, |r| Ok(r.to_vec()))
    }

    pub fn apply_jets(&self, rep: &[Mat<Jet>]) -> Result<Vec<Mat<Jet>>> {
        (self.f)(rep)
    }

    pub fn apply(&self, rep: &[QMat]) -> Result<Vec<QMat>> {
        Ok(values(&self.apply_jets(&lift_rep(rep))?))
    }

    /// `o ∘ self`.
    pub fn then(&self, o: &PoissonMap) -> Result<PoissonMap> {
        if self.tgt != o.src {
            return Err(Error::DimensionMismatch(format!("{} does not feed {}", self.name, o.name)));
        }
        let (a, b) = (self.f.clone(), o.f.clone());
        Ok(PoissonMap {
            name: format!("{} ∘ {}", o.name, self.name),
            src: self.src.clone(),
            tgt: o.tgt.clone(),
            f: Arc::new(move |r| b(&a(r)?)),
        })
    }

    /// Post-compose with a left translation of one output slot, used to
    /// build deliberately wrong maps.
    pub fn corrupted(&self, name: &str, slot: usize, g: QMat) -> PoissonMap {
        let a = self.f.clone();
        PoissonMap {
            name: name.to_string(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            f: Arc::new(move |r| {
                let mut out = a(r)?;
                out[slot] = Mat::lift(&g).mul(&out[slot]);
                Ok(out)
            }),
        }
    }
}

/// `D psi · pi_src · D psi^T - pi_tgt(psi(rep))` in charts centered at
/// `rep` and at its image.
pub fn poisson_map_defect(map: &PoissonMap, src: &Field, tgt: &Field, rep: &[QMat]) -> Result<RMat> {
    check_factors(&map.src, src)?;
    check_factors(&map.tgt, tgt)?;
    let sc = Chart::centered("source", &map.src, rep)?;
    let d = sc.dim();
    let z: Vec<Jet> = (0..d).map(|i| Jet::var(Rat::zero(), i, d, 1)).collect();
    let img = map.apply_jets(&sc.param(&z)?)?;
    let img0 = values(&img);
    let tc = Chart::centered("target", &map.tgt, &img0)?;
    let c = tc.coords(&img)?;
    let mut jac = RMat::zeros(c.len(), d);
    for (i, x) in c.iter().enumerate() {
        for j in 0..d {
            *jac.at_mut(i, j) = x.d1_at(j);
        }
    }
    let ps = evaluate(&sc, src, rep)?.matrix;
    let pt = evaluate(&tc, tgt, &img0)?.matrix;
    Ok(jac.mul(&ps).mul(&jac.transpose()).sub(&pt))
}

pub fn is_poisson_map(map: &PoissonMap, src: &Field, tgt: &Field, rep: &[QMat]) -> Result<bool> {
    Ok(poisson_map_defect(map, src, tgt, rep)?.is_zero())
}

/// `pi^#` of the conormal space at `z0` lies in the tangent space.
pub fn is_coisotropic(sub: &SubChart, field: &Field, z0: &[Rat]) -> Result<bool> {
    let (amb, aj) = ambient_jets(sub, field, z0, 1)?;
    let (k, m, d) = (aj.k, aj.m, amb.dim());
    let mut a = RMat::zeros(d, m);
    for j in 0..d {
        for l in 0..m {
            *a.at_mut(j, l) = aj.c[j].d1_at(k + l);
        }
    }
    let v: Vec<Vec<Rat>> = (0..k).map(|fl| aj.c.iter().map(|x| x.d1_at(fl)).collect()).collect();
    let pi = assemble(field, &v, d);
    let ann = a.transpose().null_space();
    let image = pi.mul(&ann);
    let mut aug = RMat::zeros(d, m + image.cols);
    for i in 0..d {
        for j in 0..m {
            *aug.at_mut(i, j) = a.at(i, j).clone();
        }
        for j in 0..image.cols {
            *aug.at_mut(i, m + j) = image.at(i, j).clone();
        }
    }
    Ok(aug.rank() == a.rank())
}

/// Multiplication `G x G -> G` as a map of representatives.
pub fn multiplication() -> PoissonMap {
    PoissonMap::new("multiply", &[Factor::Entries, Factor::Entries], &[Factor::Entries], |r| {
        Ok(vec![r[0].mul(&r[1])])
    })
}

/// Is multiplication Poisson from `(G x G, pi x pi)` to `(G, pi)` at (g, h)?
pub fn multiplicativity_with(field: &Field, g: &QMat, h: &QMat) -> Result<bool> {
    let src = field.product(field)?;
    is_poisson_map(&multiplication(), &src, field, &[g.clone(), h.clone()])
}

pub fn multiplicativity_check(g: &QMat, h: &QMat) -> Result<bool> {
    multiplicativity_with(&super::field::pi_st(g.size(), Factor::Entries), g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::{frac, rat};
    use crate::poissonlab::field;
    use crate::sample::Sampler;

    fn entries_g(n: usize) -> Vec<RepFn> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                out.push(entry(0, i, j));
            }
        }
        out
    }

    /// Sklyanin bracket on SL(2), written out by hand from the definition.
    fn sklyanin(g: &QMat) -> RMat {
        let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
        let mut m = RMat::zeros(4, 4);
        let mut set = |i: usize, j: usize, v: Rat| {
            *m.at_mut(j, i) = -v.clone();
            *m.at_mut(i, j) = v;
        };
        set(0, 1, a * b);
        set(0, 2, a * c);
        set(0, 3, rat(2) * b * c);
        set(1, 2, rat(0));
        set(1, 3, b * d);
        set(2, 3, c * d);
        m
    }

    #[test]
    fn sklyanin_bracket_in_rank_one() {
        let mut s = Sampler::new(1);
        for _ in 0..20 {
            let g = s.group(2);
            assert_eq!(pi_st_brackets(&g, &entries_g(2)).unwrap(), sklyanin(&g));
        }
    }

    #[test]
    fn pi_st_vanishes_on_the_torus() {
        let mut s = Sampler::new(2);
        for n in 2..=4 {
            let t = s.torus(n - 1).to_matrix();
            assert!(pi_st(&t).unwrap().matrix.is_zero());
            assert!(pi_st_brackets(&t, &entries_g(n)).unwrap().is_zero());
        }
        assert_eq!(bivector_rank(&pi_st(&QMat::identity(3)).unwrap()), 0);
    }

    #[test]
    fn multiplicativity_and_control() {
        let mut s = Sampler::new(3);
        let e = QMat::identity(2);
        assert!(multiplicativity_check(&e, &e).unwrap());
        let mut ok = 0;
        let mut control_fails = 0;
        while ok < 10 {
            let (g, h) = (s.generic(2), s.generic(2));
            match multiplicativity_check(&g, &h) {
                Ok(true) => ok += 1,
                Ok(false) => panic!("pi_st not multiplicative at {:?} {:?}", g, h),
                Err(_) => continue,
            }
            let bad = field::lambda_sum(2, Factor::Entries);
            if !multiplicativity_with(&bad, &g, &h).unwrap() {
                control_fails += 1;
            }
        }
        assert!(control_fails > 0);
    }

    #[test]
    fn identity_map_is_poisson() {
        let g = QMat::from_i64(&[&[2, 1], &[3, 2]]);
        let f = field::pi_st(2, Factor::Entries);
        assert!(is_poisson_map(&PoissonMap::identity(&[Factor::Entries]), &f, &f, &[g]).unwrap());
    }

    #[test]
    fn constant_bivector_satisfies_jacobi() {
        let mut pi = RMat::zeros(3, 3);
        *pi.at_mut(0, 1) = frac(1, 2);
        *pi.at_mut(1, 0) = frac(-1, 2);
        let dpi = vec![RMat::zeros(3, 3); 3];
        assert!(jacobi_components(&pi, &dpi).is_empty());
    }

    #[test]
    fn jacobi_for_pi_st_in_entries() {
        let mut s = Sampler::new(4);
        let f = field::pi_st(3, Factor::Entries);
        let mut done = 0;
        while done < 2 {
            let g = s.generic(3);
            let Ok(chart) = Chart::centered("entries", &[Factor::Entries], std::slice::from_ref(&g)) else { continue };
            if chart.param(&vec![Rat::zero(); 8]).is_err() {
                continue;
            }
            let sub = SubChart::from_chart(&chart);
            assert!(jacobi_check(&sub, &f, &vec![Rat::zero(); 8]).unwrap());
            done += 1;
        }
    }

    #[test]
    fn jacobi_detects_a_non_poisson_bivector() {
        // Lambda^L alone: [Lambda, Lambda] is a nonzero invariant 3-vector
        let n = 2;
        let mut f = Field::zero("Lambda^L", n, &[Factor::Entries]);
        for a in crate::poissonlab::lie::positive_roots(n) {
            f.wedge(
                rat(1),
                field::right(0, crate::poissonlab::lie::e_neg(n, a)),
                field::right(0, crate::poissonlab::lie::e_pos(n, a)),
            );
        }
        let g = QMat::from_i64(&[&[2, 1], &[3, 2]]);
        let chart = Chart::centered("entries", &[Factor::Entries], &[g]).unwrap();
        let sub = SubChart::from_chart(&chart);
        assert!(!jacobi_check(&sub, &f, &[rat(0), rat(0), rat(0)]).unwrap());
    }
}
