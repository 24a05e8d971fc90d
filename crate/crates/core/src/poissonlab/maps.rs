//! The maps between configuration spaces whose Poisson property is
//! verified, with their source and target bivector fields, and samplers for
//! the submanifolds they live on.

use num_traits::One;

use super::chart::{flags, neg, pos, torus_diag, Factor, SubChart, Tail};
use super::eval::PoissonMap;
use super::field::{self, left, Field};
use super::lie::dual_bases;
use crate::cells::factor_chain_neg;
use crate::error::{Error, Result};
use crate::groupcore::{bruhat_cell_neg, gauss, one_param, wbar, Jet, Mat, QMat, Rat, Scalar, Sign};
use crate::rootdata::WeylElt;
use crate::sample::Sampler;

/// A map together with the fields it is claimed to intertwine.
#[derive(Clone, Debug)]
pub struct Claim {
    pub map: PoissonMap,
    pub src: Field,
    pub tgt: Field,
}

fn prod(ms: &[Mat<Jet>]) -> Mat<Jet> {
    let n = ms[0].size();
    ms.iter().fold(Mat::identity(n), |acc, m| acc.mul(m))
}

fn torus_of(g: &Mat<Jet>) -> Result<Mat<Jet>> {
    Ok(gauss(g)?.torus_matrix())
}

fn inv(g: &Mat<Jet>) -> Result<Mat<Jet>> {
    g.inverse()
}

/// `x_{-alpha_1}(1)`, used to corrupt maps. (In rank one, translating by
/// `x_{alpha_1}(1)` happens to preserve the decorated mixed product.)
pub fn kick(size: usize) -> QMat {
    one_param(size, Sign::Neg, 0, &Rat::one())
}

/// `Theta_n: F_n -> B^n`, `[g] -> (g_1 B, g_1 g_2 B, ...)`.
pub fn theta_n(size: usize, n: usize) -> Claim {
    let map = PoissonMap::new("Theta_n", &[flags(n)], &vec![flags(1); n], |r| {
        let mut acc = r[0].clone();
        let mut out = vec![acc.clone()];
        for g in &r[1..] {
            acc = acc.mul(g);
            out.push(acc.clone());
        }
        Ok(out)
    });
    Claim { map, src: field::pi_st(size, flags(n)), tgt: field::opi(size, n) }
}

/// `Theta_{m,n}: F_{m+n} -> F_m x F_n`.
pub fn theta_mn(size: usize, m: usize, n: usize) -> Result<Claim> {
    let map = PoissonMap::new("Theta_mn", &[flags(m + n)], &[flags(m), flags(n)], move |r| {
        let mut out = r[..m].to_vec();
        out.push(prod(&r[..=m]));
        out.extend_from_slice(&r[m + 1..]);
        Ok(out)
    });
    Ok(Claim { map, src: field::pi_st(size, flags(m + n)), tgt: field::bowtie(size, flags(m), flags(n))? })
}

/// `Theta~_n: F~_n -> F_{n-1} x G`, `[g] -> ([g_1, ..., g_{n-1}], g_1 ... g_n)`.
pub fn theta_tilde(size: usize, n: usize) -> Result<Claim> {
    if n < 2 {
        return Err(Error::DimensionMismatch("Theta~_n needs n >= 2".into()));
    }
    let map = PoissonMap::new("Theta~_n", &[pos(n)], &[flags(n - 1), pos(1)], move |r| {
        let mut out = r[..n - 1].to_vec();
        out.push(prod(r));
        Ok(out)
    });
    Ok(Claim { map, src: field::pi_st(size, pos(n)), tgt: field::bowtie(size, flags(n - 1), pos(1))? })
}

/// `I_X: X x B_- -> (X x F_1) x T` for `X = F_m`, `(x, b) -> (x, b B, [b]_0)`.
pub fn i_x(size: usize, m: usize) -> Result<Claim> {
    let map = PoissonMap::new("I_X", &[flags(m), pos(1)], &[flags(m), flags(1), Factor::Torus], move |r| {
        let mut out = r.to_vec();
        out.push(torus_of(&r[m])?);
        Ok(out)
    });
    let base = field::bowtie(size, flags(m), flags(1))?;
    let tgt = field::t_extension(&base, |h| field::join(&[left(0, h.clone()), left(m, h.clone())]))?;
    Ok(Claim { map, src: field::bowtie(size, flags(m), pos(1))?, tgt })
}

/// `J_n: Gamma_n -> F_n x T`, `[g] -> ([g], [g_1 ... g_n]_0)`.
pub fn j_n(size: usize, n: usize) -> Result<Claim> {
    let map = PoissonMap::new("J_n", &[pos(n)], &[flags(n), Factor::Torus], |r| {
        let mut out = r.to_vec();
        out.push(torus_of(&prod(r))?);
        Ok(out)
    });
    Ok(Claim { map, src: field::pi_st(size, pos(n)), tgt: field::bowtie_zero(size, flags(n))? })
}

/// `J_n` with the torus component squared: a map that must fail.
pub fn j_n_squared(size: usize, n: usize) -> Result<Claim> {
    let mut c = j_n(size, n)?;
    c.map = PoissonMap::new("J_n (t squared)", &[pos(n)], &[flags(n), Factor::Torus], |r| {
        let mut out = r.to_vec();
        let t = torus_of(&prod(r))?;
        out.push(t.mul(&t));
        Ok(out)
    });
    Ok(c)
}

/// `E_{m, vdot}: F~_m x (B_- v B_-) -> F~_{m+n}`,
/// `([g], [b_- c_1, c_2, ..., c_n]) -> [g_1, ..., g_m, c_n^{-1}, ..., c_1^{-1}]`.
pub fn e_map(size: usize, m: usize, vreps: &[QMat]) -> Result<Claim> {
    let n = vreps.len();
    let reps = vreps.to_vec();
    let map = PoissonMap::new("E_m,v", &[pos(m), neg(n)], &[pos(m + n)], move |r| {
        let chain = factor_chain_neg(&r[m..], Some(&reps))?;
        let mut out = r[..m].to_vec();
        for c in chain.c.iter().rev() {
            out.push(inv(c)?);
        }
        Ok(out)
    });
    Ok(Claim { map, src: field::tpi_mn(size, m, n)?, tgt: field::pi_st(size, pos(m + n)) })
}

/// `J_{n, vdot}: F~_n -> F_{n+1} x T`, `[g] -> ([g, vdot^{-1}], [g_1 ... g_n vdot^{-1}]_0)`.
pub fn j_nv(size: usize, n: usize, vdot: &QMat) -> Result<Claim> {
    let vi = vdot.inverse()?;
    let map = PoissonMap::new("J_n,v", &[pos(n)], &[flags(n + 1), Factor::Torus], move |r| {
        let vi = Mat::lift(&vi);
        let mut out = r.to_vec();
        out.push(vi.clone());
        out.push(torus_of(&prod(r).mul(&vi))?);
        Ok(out)
    });
    Ok(Claim { map, src: field::pi_st(size, pos(n)), tgt: field::bowtie_zero(size, flags(n + 1))? })
}

/// `F~_n -> G_{n,1}`, `[g] -> ([g], g_1 ... g_n)`.
pub fn fnn1(size: usize, n: usize) -> Result<Claim> {
    let map = PoissonMap::new("F~_n -> G_n,1", &[pos(n)], &[pos(n), neg(1)], |r| {
        let mut out = r.to_vec();
        out.push(prod(r));
        Ok(out)
    });
    Ok(Claim { map, src: field::pi_st(size, pos(n)), tgt: field::tpi_mn(size, n, 1)? })
}

/// `pi^_2` written as a two-fold mixed product on `B x G/N`, against the
/// projection of `pi_st x pi_st` from `G x_B G/N` under `(g_1, g_1 g_2)`.
pub fn hpi_mix(size: usize) -> Result<Claim> {
    let dec = |a| Factor::Pos { arity: a, tail: Tail::Decorated };
    let map = PoissonMap::new("Theta^_2", &[dec(2)], &[flags(1), dec(1)], |r| Ok(vec![r[0].clone(), r[0].mul(&r[1])]));
    let mut tgt = field::pi_st(size, flags(1)).product(&field::pi_st(size, dec(1)))?;
    for (lo, up) in dual_bases(size) {
        tgt.wedge(Rat::one(), left(0, up), left(1, lo));
    }
    Ok(Claim { map, src: field::pi_st(size, dec(2)), tgt: tgt.named("opi_1 x pi^_1") })
}

/// Multiplication `(G x G, pi_st x pi_st) -> (G, pi_st)`.
pub fn multiply(size: usize) -> Result<Claim> {
    let f = field::pi_st(size, Factor::Entries);
    Ok(Claim { map: super::eval::multiplication(), src: f.product(&f)?, tgt: f })
}

impl Claim {
    /// The same claim for a map whose first output slot is translated by
    /// `x_{-alpha_1}(1)`.
    pub fn corrupted(&self) -> Claim {
        self.corrupted_at(0)
    }

    pub fn corrupted_at(&self, slot: usize) -> Claim {
        let size = self.src.size;
        Claim { map: self.map.corrupted(&format!("{} (corrupted)", self.map.name), slot, kick(size)), ..self.clone() }
    }

    pub fn holds_at(&self, rep: &[QMat]) -> Result<bool> {
        super::eval::is_poisson_map(&self.map, &self.src, &self.tgt, rep)
    }
}

/// Random lower triangular element of `SL(n)`.
pub fn random_bminus(s: &mut Sampler, size: usize) -> QMat {
    s.borel_minus(size)
}

/// `k` group elements with product in `B_-`: a point of `Gamma_k`.
pub fn sample_gamma(s: &mut Sampler, size: usize, k: usize) -> Vec<QMat> {
    let mut out = s.tuple(size, k - 1);
    let p = Mat::product(&out, size);
    out.push(p.inverse().expect("invertible").mul(&random_bminus(s, size)));
    out
}

/// A point of `G_{m,n}` (`g_1 ... g_m = k_1 ... k_n`) and dotted
/// representatives of the `B_-` cells of its second component.
pub fn sample_gmn(s: &mut Sampler, size: usize, m: usize, n: usize) -> (Vec<QMat>, Vec<QMat>) {
    let gs = s.tuple(size, m);
    let mut ks = s.tuple(size, n - 1);
    let rest = Mat::product(&ks, size).inverse().expect("invertible").mul(&Mat::product(&gs, size));
    ks.push(rest);
    let chain = factor_chain_neg(&ks, None).expect("B_- factorization exists");
    let vreps = chain.v.iter().map(|v| wbar::<Rat>(v).mul(&s.torus(size - 1).to_matrix())).collect();
    let mut rep = gs;
    rep.extend(ks);
    (rep, vreps)
}

/// A point of `F~_n` with its `B_-` cell and a dotted representative.
pub fn sample_tfn_with_v(s: &mut Sampler, size: usize, n: usize) -> (Vec<QMat>, WeylElt, QMat) {
    let rep = s.tuple(size, n);
    let v = bruhat_cell_neg(&Mat::product(&rep, size));
    let vdot = wbar::<Rat>(&v).mul(&s.torus(size - 1).to_matrix());
    (rep, v, vdot)
}

/// Parametrization of the graph of multiplication of `Gamma_{2n}` around a
/// composable pair `(a, b)` with `b` starting with `a_{2n}^{-1}, ..., a_{n+1}^{-1}`.
/// Returns the sub-chart and the corrupted version.
pub fn multiplication_graph(a0: &[QMat], b0: &[QMat], corrupt: bool) -> Result<SubChart> {
    let k = a0.len();
    let half = k / 2;
    let size = a0[0].size();
    let p = size * (size - 1) / 2;
    let r = size - 1;
    let dim = 3 * half * p + 2 * r;
    let pa = Mat::product(a0, size);
    let pb = Mat::product(b0, size);
    let (a0, b0) = (a0.to_vec(), b0.to_vec());
    let kicker = kick(size);
    let ambient = vec![pos(k); 3];
    Ok(SubChart::new("graph of multiplication", dim, &ambient, move |z| {
        let mut at = 0;
        let mut take = |len: usize| {
            let s = &z[at..at + len];
            at += len;
            s.to_vec()
        };
        let unit_lower = |v: &[Jet]| {
            let mut m = Mat::<Jet>::identity(size);
            let mut q = 0;
            for i in 0..size {
                for j in 0..i {
                    m.set(i, j, v[q].clone());
                    q += 1;
                }
            }
            m
        };
        let close = |gs: &[Mat<Jet>], p0: &QMat, l: Mat<Jet>, d: Mat<Jet>| -> Result<Mat<Jet>> {
            Ok(prod(gs).inverse()?.mul(&Mat::lift(p0)).mul(&l).mul(&d))
        };
        let ones = |v: Vec<Jet>| -> Vec<Jet> { v.iter().map(|x| x.add(&Jet::sone())).collect() };
        let mut a: Vec<Mat<Jet>> = Vec::with_capacity(k);
        for g in &a0[..k - 1] {
            a.push(Mat::lift(g).mul(&unit_lower(&take(p))));
        }
        let l = unit_lower(&take(p));
        let d = torus_diag(&ones(take(r)))?;
        let last = close(&a, &pa, l, d)?;
        a.push(last);
        let mut b: Vec<Mat<Jet>> = Vec::with_capacity(k);
        for i in 0..half {
            b.push(a[k - 1 - i].inverse()?);
        }
        for g in &b0[half..k - 1] {
            b.push(Mat::lift(g).mul(&unit_lower(&take(p))));
        }
        let l = unit_lower(&take(p));
        let d = torus_diag(&ones(take(r)))?;
        let last = close(&b, &pb, l, d)?;
        b.push(last);
        let mut c: Vec<Mat<Jet>> = a[..half].to_vec();
        c.extend_from_slice(&b[half..]);
        if corrupt {
            c[0] = Mat::lift(&kicker).mul(&c[0]);
        }
        let mut out = a;
        out.extend(b);
        out.extend(c);
        Ok(out)
    }))
}

/// `pi x pi x (-pi)` on `F~_k^3`.
pub fn graph_field(size: usize, k: usize) -> Result<Field> {
    let f = field::pi_st(size, pos(k));
    f.product(&f)?.product(&f.clone().scaled(&-Rat::one()))
}

/// A composable pair of points of `Gamma_{2n}` in the form used by
/// [`multiplication_graph`].
pub fn sample_composable(s: &mut Sampler, size: usize, half: usize) -> (Vec<QMat>, Vec<QMat>) {
    let a = sample_gamma(s, size, 2 * half);
    let mut b: Vec<QMat> = a[half..].iter().rev().map(|g| g.inverse().expect("invertible")).collect();
    b.extend(s.tuple(size, half - 1));
    let p = Mat::product(&b, size);
    b.push(p.inverse().expect("invertible").mul(&random_bminus(s, size)));
    (a, b)
}

/// Bott-Samelson points of `O^w` times a torus element, as a sub-chart of
/// `F_n x T`.
pub fn bs_torus_chart(ws: &[WeylElt]) -> SubChart {
    let chart = crate::cells::BSChart::new(ws);
    let size = ws[0].rank() + 1;
    let len = chart.len();
    let n = ws.len();
    SubChart::new("BS x T", len + size - 1, &[flags(n), Factor::Torus], move |z| {
        let mut out = crate::cells::bs_param_reps(&chart, &z[..len]);
        out.push(torus_diag(&z[len..])?);
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poissonlab::eval::{is_coisotropic, poisson_map_defect};

    fn check(c: &Claim, rep: &[QMat]) {
        let d = poisson_map_defect(&c.map, &c.src, &c.tgt, rep).unwrap();
        assert!(d.is_zero(), "{} fails: {:?}", c.map.name, d);
        assert!(!c.corrupted().holds_at(rep).unwrap(), "corrupted {} passes", c.map.name);
    }

    #[test]
    fn theta_maps() {
        let mut s = Sampler::new(21);
        for size in 2..=3 {
            for n in 2..=3 {
                let rep = s.tuple(size, n);
                check(&theta_n(size, n), &rep);
                check(&theta_tilde(size, n).unwrap(), &rep);
            }
            for (m, n) in [(1, 1), (1, 2), (2, 1)] {
                check(&theta_mn(size, m, n).unwrap(), &s.tuple(size, m + n));
            }
        }
    }

    #[test]
    fn lemma_xb() {
        let mut s = Sampler::new(22);
        for size in 2..=3 {
            for m in 1..=2 {
                let mut rep = s.tuple(size, m);
                rep.push(random_bminus(&mut s, size));
                check(&i_x(size, m).unwrap(), &rep);
            }
        }
    }

    #[test]
    fn j_n_is_poisson_and_t_squared_is_not() {
        let mut s = Sampler::new(23);
        for size in 2..=3 {
            for n in 1..=2 {
                let rep = sample_gamma(&mut s, size, n);
                check(&j_n(size, n).unwrap(), &rep);
                assert!(!j_n_squared(size, n).unwrap().holds_at(&rep).unwrap());
            }
        }
    }

    #[test]
    fn e_map_and_its_composite_with_j() {
        let mut s = Sampler::new(24);
        for size in 2..=3 {
            for (m, n) in [(1, 1), (2, 1)] {
                let (rep, vreps) = sample_gmn(&mut s, size, m, n);
                let e = e_map(size, m, &vreps).unwrap();
                check(&e, &rep);
                let j = j_n(size, m + n).unwrap();
                let k = Claim { map: e.map.then(&j.map).unwrap(), src: e.src.clone(), tgt: j.tgt.clone() };
                check(&k, &rep);
            }
        }
    }

    #[test]
    fn j_nv_and_fnn1() {
        let mut s = Sampler::new(25);
        for size in 2..=3 {
            for n in 1..=2 {
                let (rep, _, vdot) = sample_tfn_with_v(&mut s, size, n);
                check(&j_nv(size, n, &vdot).unwrap(), &rep);
                check(&fnn1(size, n).unwrap(), &rep);
            }
        }
    }

    #[test]
    fn decorated_mixed_product() {
        let mut s = Sampler::new(26);
        for size in 2..=3 {
            check(&hpi_mix(size).unwrap(), &s.tuple(size, 2));
        }
    }

    #[test]
    fn multiplication_graph_is_coisotropic() {
        let mut s = Sampler::new(27);
        for (size, half) in [(2, 1), (2, 2), (3, 1)] {
            let (a, b) = sample_composable(&mut s, size, half);
            let f = graph_field(size, 2 * half).unwrap();
            let g = multiplication_graph(&a, &b, false).unwrap();
            let z0 = vec![Rat::from_integer(0.into()); g.dim];
            assert!(is_coisotropic(&g, &f, &z0).unwrap());
            let bad = multiplication_graph(&a, &b, true).unwrap();
            assert!(!is_coisotropic(&bad, &f, &z0).unwrap());
        }
    }
}

#[cfg(test)]
mod leaf_tests {
    use super::*;
    use crate::leaves::{leaf_dim, leaf_dim_uv};
    use crate::poissonlab::eval::{evaluate_at, jacobi_check};
    use crate::poissonlab::Chart;

    fn bs_point(s: &mut Sampler, ws: &[WeylElt]) -> Option<Vec<Rat>> {
        let chart = crate::cells::BSChart::new(ws);
        let z = s.rats(chart.len());
        let reps = crate::cells::bs_param_reps::<Rat>(&chart, &z);
        let p = Mat::product(&reps, ws[0].rank() + 1);
        gauss(&p).ok()?;
        let mut out = z;
        out.extend(s.nonzero_rats(ws[0].rank()));
        Some(out)
    }

    #[test]
    fn jacobi_for_pi_n_bowtie_zero_in_bs_torus_chart() {
        let mut s = Sampler::new(31);
        let w = vec![WeylElt::from_word(2, &[0, 1]).unwrap(), WeylElt::from_word(2, &[1]).unwrap()];
        let sub = bs_torus_chart(&w);
        let f = field::bowtie_zero(3, flags(2)).unwrap();
        let mut done = 0;
        while done < 2 {
            let Some(z) = bs_point(&mut s, &w) else { continue };
            assert!(jacobi_check(&sub, &f, &z).unwrap());
            done += 1;
        }
    }

    #[test]
    fn jacobi_for_tpi_11() {
        let mut s = Sampler::new(32);
        for size in 2..=3 {
            let f = field::tpi_mn(size, 1, 1).unwrap();
            let rep = s.tuple(size, 2);
            let chart = Chart::centered("F~_1 x F~_-1", &f.factors, &rep).unwrap();
            let sub = SubChart::from_chart(&chart);
            assert!(jacobi_check(&sub, &f, &vec![Rat::from_integer(0.into()); chart.dim()]).unwrap());
        }
    }

    #[test]
    fn leaf_ranks_in_a2() {
        let mut s = Sampler::new(33);
        let f1 = field::bowtie_zero(3, flags(1)).unwrap();
        for w in WeylElt::all(2) {
            let ws = vec![w];
            let Some(z) = bs_point(&mut s, &ws) else { continue };
            let rep = bs_torus_chart(&ws).reps(&z).unwrap();
            assert_eq!(evaluate_at("F_1 x T", &f1, &rep).unwrap().rank(), leaf_dim(&ws), "{:?}", ws);
        }
    }

    #[test]
    fn tpi_11_rank_on_double_bruhat_cells() {
        let mut s = Sampler::new(34);
        let f = field::tpi_mn(3, 1, 1).unwrap();
        for _ in 0..6 {
            let g = s.group(3);
            let u = crate::groupcore::bruhat_cell(&g);
            let v = bruhat_cell_neg(&g);
            let bv = evaluate_at("F~_1 x F~_-1", &f, &[g.clone(), g.clone()]).unwrap();
            assert_eq!(bv.rank(), leaf_dim_uv(&[u], &[v]));
        }
    }
}
