//! Generalized Schubert cells in the configuration spaces `F_n`, canonical
//! forms, Bott-Samelson and Lusztig charts, the inverse parameter problem
//! and the torus-valued map `tau`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groupcore::{
    bruhat_cell, bruhat_cell_neg, factor_neg_with, factor_pos_with, gauss, in_c_cell, one_param, principal_minor, sbar,
    wbar, wbar_word, Mat, QMat, Rat, Scalar, Sign, TorusElt,
};
use crate::rootdata::{RootSystem, WeylElt};

/// Canonical form of a point of `F_n`: the cell `w` and `c_i in C_{wbar_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FnPoint {
    pub w: Vec<WeylElt>,
    pub c: Vec<QMat>,
}

/// Canonical form of a point of the twisted space: `[c_1, ..., c_n b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TFnPoint {
    pub w: Vec<WeylElt>,
    pub c: Vec<QMat>,
    pub b: QMat,
}

/// Canonical form of a point of the negative twisted space:
/// `[b_- c_1, c_2, ..., c_n]` with `c_i in C_{wbar_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NegPoint {
    pub bm: QMat,
    pub v: Vec<WeylElt>,
    pub c: Vec<QMat>,
}

impl FnPoint {
    pub fn arity(&self) -> usize {
        self.c.len()
    }
    pub fn size(&self) -> usize {
        self.c[0].size()
    }
    pub fn rank(&self) -> usize {
        self.size() - 1
    }
    pub fn product(&self) -> QMat {
        Mat::product(&self.c, self.size())
    }
    /// Left torus action `h . [g_1, ..., g_n] = [h g_1, g_2, ...]`.
    pub fn act(&self, h: &TorusElt) -> FnPoint {
        let mut gs = self.c.clone();
        gs[0] = h.to_matrix().mul(&gs[0]);
        canonicalize_fn(&gs)
    }
    /// Left multiplication of the first entry by any group element.
    pub fn left_mul(&self, g: &QMat) -> FnPoint {
        let mut gs = self.c.clone();
        gs[0] = g.mul(&gs[0]);
        canonicalize_fn(&gs)
    }
}

impl TFnPoint {
    pub fn arity(&self) -> usize {
        self.c.len()
    }
    /// Representative `(c_1, ..., c_{n-1}, c_n b)`.
    pub fn rep(&self) -> Vec<QMat> {
        let mut r = self.c.clone();
        let last = r.last_mut().expect("nonempty");
        *last = last.mul(&self.b);
        r
    }
    pub fn product(&self) -> QMat {
        Mat::product(&self.c, self.b.size()).mul(&self.b)
    }
    pub fn flags(&self) -> FnPoint {
        FnPoint { w: self.w.clone(), c: self.c.clone() }
    }
}

impl NegPoint {
    pub fn rep(&self) -> Vec<QMat> {
        let mut r = self.c.clone();
        r[0] = self.bm.mul(&r[0]);
        r
    }
    pub fn product(&self) -> QMat {
        self.bm.mul(&Mat::product(&self.c, self.bm.size()))
    }
}

/// Output of an iterated positive factorization.
#[derive(Clone, Debug)]
pub struct PosChain<S: Scalar> {
    pub w: Vec<WeylElt>,
    pub c: Vec<Mat<S>>,
    pub b: Mat<S>,
}

/// Iterate `g_1 = c_1 b_1, b_1 g_2 = c_2 b_2, ...`. With `reps`, the i-th
/// factor uses that representative and the detected cell must match it.
pub fn factor_chain_pos<S: Scalar>(gs: &[Mat<S>], reps: Option<&[QMat]>) -> Result<PosChain<S>> {
    let n = gs[0].size();
    let mut b = Mat::<S>::identity(n);
    let mut w = Vec::with_capacity(gs.len());
    let mut c = Vec::with_capacity(gs.len());
    for (i, g) in gs.iter().enumerate() {
        let h = b.mul(g);
        let wi = bruhat_cell(&h.values());
        let (ci, bi) = match reps {
            Some(r) => {
                if bruhat_cell(&r[i]) != wi {
                    return Err(Error::WrongCell(format!("entry {} lies in cell {:?}", i + 1, wi)));
                }
                factor_pos_with(&h, &r[i])?
            }
            None => factor_pos_with(&h, &wbar(&wi))?,
        };
        w.push(wi);
        c.push(ci);
        b = bi;
    }
    Ok(PosChain { w, c, b })
}

/// Output of an iterated negative factorization.
#[derive(Clone, Debug)]
pub struct NegChain<S: Scalar> {
    pub bm: Mat<S>,
    pub v: Vec<WeylElt>,
    pub c: Vec<Mat<S>>,
}

/// Iterate from the right: `k_n = beta_n c_n`, `k_{n-1} beta_n = beta_{n-1} c_{n-1}`, ...
pub fn factor_chain_neg<S: Scalar>(ks: &[Mat<S>], reps: Option<&[QMat]>) -> Result<NegChain<S>> {
    let n = ks[0].size();
    let mut beta = Mat::<S>::identity(n);
    let len = ks.len();
    let mut v = vec![WeylElt::identity(n - 1); len];
    let mut c: Vec<Mat<S>> = vec![Mat::identity(n); len];
    for i in (0..len).rev() {
        let h = ks[i].mul(&beta);
        let vi = bruhat_cell_neg(&h.values());
        let (bi, ci) = match reps {
            Some(r) => {
                if bruhat_cell_neg(&r[i]) != vi {
                    return Err(Error::WrongCell(format!("entry {} lies in B_- cell {:?}", i + 1, vi)));
                }
                factor_neg_with(&h, &r[i])?
            }
            None => factor_neg_with(&h, &wbar(&vi))?,
        };
        v[i] = vi;
        c[i] = ci;
        beta = bi;
    }
    Ok(NegChain { bm: beta, v, c })
}

pub fn canonicalize_fn(gs: &[QMat]) -> FnPoint {
    let ch = factor_chain_pos(gs, None).expect("canonical factorization exists");
    FnPoint { w: ch.w, c: ch.c }
}

pub fn canonicalize_tfn(gs: &[QMat]) -> TFnPoint {
    let ch = factor_chain_pos(gs, None).expect("canonical factorization exists");
    TFnPoint { w: ch.w, c: ch.c, b: ch.b }
}

pub fn canonicalize_neg(ks: &[QMat]) -> NegPoint {
    let ch = factor_chain_neg(ks, None).expect("canonical factorization exists");
    NegPoint { bm: ch.bm, v: ch.v, c: ch.c }
}

/// Tits distance between two flags: the cell of `g_1^{-1} g_2`.
pub fn tits_distance(f1: &FnPoint, f2: &FnPoint) -> WeylElt {
    let g = f1.c[0].inverse().expect("invertible").mul(&f2.c[0]);
    bruhat_cell(&g)
}

/// Concatenated reduced words of a cell `w = (w_1, ..., w_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSChart {
    pub rank: usize,
    pub w: Vec<WeylElt>,
    pub blocks: Vec<Vec<usize>>,
}

impl BSChart {
    /// Chart built from the stored reduced words of each `w_i`.
    pub fn new(w: &[WeylElt]) -> Self {
        let rank = w[0].rank();
        BSChart { rank, w: w.to_vec(), blocks: w.iter().map(|x| x.word().to_vec()).collect() }
    }

    /// Chart from explicit words; each must be reduced.
    pub fn from_words(rank: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut w = Vec::with_capacity(blocks.len());
        for b in blocks {
            let x = WeylElt::from_word(rank, b)?;
            if x.length() != b.len() {
                return Err(Error::WrongCell(format!("word {b:?} is not reduced")));
            }
            w.push(x);
        }
        Ok(BSChart { rank, w, blocks: blocks.to_vec() })
    }

    pub fn letters(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block index of each letter.
    pub fn block_of(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(i, b)| std::iter::repeat_n(i, b.len())).collect()
    }

    /// Index of the first letter of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for b in &self.blocks {
            out.push(acc);
            acc += b.len();
        }
        out
    }

    fn n(&self) -> usize {
        self.rank + 1
    }
}

/// Bott-Samelson representatives `c_i = prod x_{alpha}(z) sbar_alpha` per block.
pub fn bs_param_reps<S: Scalar>(chart: &BSChart, z: &[S]) -> Vec<Mat<S>> {
    let n = chart.n();
    let mut k = 0;
    chart
        .blocks
        .iter()
        .map(|b| {
            let mut m = Mat::identity(n);
            for &a in b {
                m = m.mul(&one_param(n, Sign::Pos, a, &z[k])).mul(&sbar(n, a));
                k += 1;
            }
            m
        })
        .collect()
}

/// The Bott-Samelson point `q(z)`; the blocks are already canonical.
pub fn bs_param(chart: &BSChart, z: &[Rat]) -> FnPoint {
    FnPoint { w: chart.w.clone(), c: bs_param_reps(chart, z) }
}

/// Peel letters from canonical representatives `c_i in C_{wbar_i}`.
pub fn bs_coords_from<S: Scalar>(chart: &BSChart, cs: &[Mat<S>]) -> Vec<S> {
    let n = chart.n();
    let mut out = Vec::with_capacity(chart.len());
    for (bi, block) in chart.blocks.iter().enumerate() {
        let mut c = cs[bi].clone();
        for (li, &a) in block.iter().enumerate() {
            let rest = wbar_word::<Rat>(n, &block[li..]);
            let cw = c.mul(&Mat::lift(&rest.inverse().expect("invertible")));
            let z = cw.get(a, a + 1).clone();
            let s_inv: Mat<S> = Mat::lift(&sbar::<Rat>(n, a).inverse().expect("invertible"));
            c = s_inv.mul(&one_param(n, Sign::Pos, a, &z.neg())).mul(&c);
            out.push(z);
        }
    }
    out
}

pub fn bs_coords(p: &FnPoint, chart: &BSChart) -> Result<Vec<Rat>> {
    if p.w != chart.w {
        return Err(Error::WrongCell(format!("point in {:?}, chart for {:?}", p.w, chart.w)));
    }
    Ok(bs_coords_from(chart, &p.c))
}

/// Blocks `m_i = prod x_{-alpha}(eps)` of the Lusztig chart.
pub fn lusztig_blocks<S: Scalar>(chart: &BSChart, eps: &[S]) -> Vec<Mat<S>> {
    let n = chart.n();
    let mut k = 0;
    chart
        .blocks
        .iter()
        .map(|b| {
            let mut m = Mat::identity(n);
            for &a in b {
                m = m.mul(&one_param(n, Sign::Neg, a, &eps[k]));
                k += 1;
            }
            m
        })
        .collect()
}

pub fn lusztig_chart(chart: &BSChart, eps: &[Rat]) -> Result<FnPoint> {
    if let Some(index) = eps.iter().position(|e| e.is_zero()) {
        return Err(Error::ZeroParameter { index });
    }
    Ok(canonicalize_fn(&lusztig_blocks(chart, eps)))
}

/// All `phi_j` from Bott-Samelson coordinates and prefix minors.
pub fn phis(chart: &BSChart, p: &FnPoint) -> Result<Vec<Rat>> {
    let z = bs_coords(p, chart)?;
    let n = chart.n();
    let mut prefix = QMat::identity(n);
    let mut out = Vec::with_capacity(z.len());
    for (k, a) in chart.letters().into_iter().enumerate() {
        prefix = prefix.mul(&one_param(n, Sign::Pos, a, &z[k])).mul(&sbar(n, a));
        out.push(principal_minor(a, &prefix));
    }
    Ok(out)
}

pub fn phi(chart: &BSChart, j: usize, p: &FnPoint) -> Result<Rat> {
    Ok(phis(chart, p)?[j].clone())
}

/// `phi_j` through the generalized-minor formula: with `g_i = c_i wbar_i^{-1}`,
/// `phi_j = Delta^{omega}(c_1 ... c_{i-1} g_i vbar)` where `v` is the part of
/// block i up to letter j.
pub fn phi_by_minor(chart: &BSChart, j: usize, p: &FnPoint) -> Result<Rat> {
    if p.w != chart.w {
        return Err(Error::WrongCell("point not in chart cell".into()));
    }
    let n = chart.n();
    let bo = chart.block_of();
    let i = bo[j];
    let start = chart.block_starts()[i];
    let letters = chart.letters();
    let mut m = Mat::product(&p.c[..i], n);
    let gi = p.c[i].mul(&wbar::<Rat>(&chart.w[i]).inverse().expect("invertible"));
    m = m.mul(&gi).mul(&wbar_word(n, &letters[start..=j]));
    Ok(principal_minor(letters[j], &m))
}

/// The three cases of the exponent table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RCase {
    /// `alpha_i` occurs again strictly between i and j
    Repeated,
    /// last occurrence, `alpha_i != alpha_j`; exponent `-alpha_j(alpha_i^vee)`
    Other,
    /// last occurrence, `alpha_i = alpha_j`; exponent `-1`
    Same,
}

pub fn r_case(letters: &[usize], i: usize, j: usize) -> RCase {
    if letters[i + 1..j].contains(&letters[i]) {
        RCase::Repeated
    } else if letters[i] != letters[j] {
        RCase::Other
    } else {
        RCase::Same
    }
}

/// Exponent `r_{i,j}` for `i < j`.
pub fn r_exponent(rs: &RootSystem, letters: &[usize], i: usize, j: usize) -> i64 {
    match r_case(letters, i, j) {
        RCase::Repeated => 0,
        RCase::Other => -rs.cartan[letters[i]][letters[j]],
        RCase::Same => -1,
    }
}

/// Solve for the Lusztig parameters of a point from the `phi` minors.
pub fn invert_lusztig(chart: &BSChart, p: &FnPoint) -> Result<Vec<Rat>> {
    let ph = phis(chart, p)?;
    let zeros: Vec<usize> = ph.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect();
    if !zeros.is_empty() {
        return Err(Error::OutsideToricChart { indices: zeros });
    }
    let rs = RootSystem::new(chart.rank);
    let letters = chart.letters();
    Ok((0..letters.len())
        .map(|j| {
            let mut e = ph[j].recip();
            for i in 0..j {
                let r = r_exponent(&rs, &letters, i, j);
                if r != 0 {
                    e *= ph[i].powi(r).expect("nonzero phi");
                }
            }
            e
        })
        .collect())
}

/// Lusztig parameters for a single block from generalized minors of
/// `g in N_w` (the point `g wbar B`).
pub fn invert_lusztig_single(chart: &BSChart, g: &QMat) -> Result<Vec<Rat>> {
    if chart.blocks.len() != 1 {
        return Err(Error::DimensionMismatch("single-block chart expected".into()));
    }
    let rank = chart.rank;
    let rs = RootSystem::new(rank);
    let letters = chart.letters();
    let e = WeylElt::identity(rank);
    let minor = |k: usize, upto: usize| -> Rat {
        let v = WeylElt::from_word(rank, &letters[..upto]).expect("letters in range");
        crate::groupcore::generalized_minor(&e, &v, k, g)
    };
    let mut out = Vec::with_capacity(letters.len());
    for (j, &aj) in letters.iter().enumerate() {
        let mut num = Rat::one();
        for a in 0..rank {
            if a == aj {
                continue;
            }
            let ex = -rs.cartan[a][aj];
            if ex != 0 {
                let m = minor(a, j + 1);
                num *= m.powi(ex).ok_or(Error::OutsideToricChart { indices: vec![j] })?;
            }
        }
        let den = minor(aj, j + 1) * minor(aj, j);
        if den.is_zero() {
            return Err(Error::OutsideToricChart { indices: vec![j] });
        }
        out.push(num / den);
    }
    Ok(out)
}

/// Whether the product `c_1 ... c_n` lies in `B_- B`.
pub fn in_owe(p: &FnPoint) -> bool {
    gauss(&p.product()).is_ok()
}

/// `tau(p) = [c_1 ... c_n]_0` with the `wbar` representatives.
pub fn tau(p: &FnPoint) -> Result<TorusElt> {
    let g = gauss(&p.product()).map_err(|_| Error::NotInOpenLeaf)?;
    TorusElt::from_matrix(&g.torus_matrix())
}

/// Canonical representatives of p with respect to representatives `reps`.
pub fn dotted_reps(p: &FnPoint, reps: &[QMat]) -> Result<Vec<QMat>> {
    Ok(factor_chain_pos(&p.c, Some(reps))?.c)
}

/// `tau_{wdot}(p)` for arbitrary representatives of the cell.
pub fn tau_dotted(p: &FnPoint, reps: &[QMat]) -> Result<TorusElt> {
    let cs = dotted_reps(p, reps)?;
    let g = gauss(&Mat::product(&cs, p.size())).map_err(|_| Error::NotInOpenLeaf)?;
    TorusElt::from_matrix(&g.torus_matrix())
}

/// Whether every prefix product `c_1 ... c_i` lies in `B_- B`.
pub fn in_zero_chart(p: &FnPoint) -> bool {
    varsigma_factor(p).is_ok()
}

/// Recover `m_i in N_-` with `m_1 ... m_i = [c_1 ... c_i]_-`.
pub fn varsigma_factor(p: &FnPoint) -> Result<Vec<QMat>> {
    let n = p.size();
    let mut prefix = QMat::identity(n);
    let mut prev_inv = QMat::identity(n);
    let mut out = Vec::with_capacity(p.arity());
    for (i, c) in p.c.iter().enumerate() {
        prefix = prefix.mul(c);
        let l = gauss(&prefix).map_err(|_| Error::NotInZeroChart { prefix: i + 1 })?.l;
        out.push(prev_inv.mul(&l));
        prev_inv = l.inverse().expect("unitriangular");
    }
    Ok(out)
}

/// `[m_1, ..., m_n]` as a point of `F_n`.
pub fn varsigma(ms: &[QMat]) -> FnPoint {
    canonicalize_fn(ms)
}

/// `t_wdot` with `wdot_1 ... wdot_n = wbar_1 ... wbar_n t_wdot`.
pub fn t_dot(w: &[WeylElt], reps: &[QMat]) -> Result<TorusElt> {
    let n = reps[0].size();
    let bars: Vec<QMat> = w.iter().map(wbar).collect();
    let t = Mat::product(&bars, n).inverse()?.mul(&Mat::product(reps, n));
    TorusElt::from_matrix(&t).map_err(|_| Error::WrongCell("representatives do not match the cell".into()))
}

/// Representatives `wbar_i diag(t_i)`.
pub fn dotted(w: &[WeylElt], ts: &[TorusElt]) -> Vec<QMat> {
    w.iter().zip(ts).map(|(x, t)| wbar::<Rat>(x).mul(&t.to_matrix())).collect()
}

/// Check each `c_i` against the `C_{rep}` predicate.
pub fn check_canonical(c: &[QMat], reps: &[QMat]) -> bool {
    c.iter().zip(reps).all(|(ci, r)| in_c_cell(ci, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::{frac, rat, Sign};

    fn w(rank: usize, word: &[usize]) -> WeylElt {
        WeylElt::from_word(rank, word).unwrap()
    }

    #[test]
    fn identity_tuple_is_canonical() {
        let p = canonicalize_fn(&[QMat::identity(3), QMat::identity(3)]);
        assert!(p.w.iter().all(|x| x.is_identity()));
        assert!(p.c.iter().all(|c| c.is_identity()));
    }

    #[test]
    fn wbar_tuple_is_canonical() {
        let ws = vec![w(2, &[0, 1]), w(2, &[1])];
        let gs: Vec<QMat> = ws.iter().map(wbar).collect();
        let p = canonicalize_fn(&gs);
        assert_eq!(p.w, ws);
        assert_eq!(p.c, gs);
    }

    #[test]
    fn bs_param_a1() {
        let ch = BSChart::new(&[w(1, &[0])]);
        let p = bs_param(&ch, &[frac(3, 2)]);
        assert_eq!(p.c[0], QMat::from_rows(vec![vec![frac(3, 2), rat(-1)], vec![rat(1), rat(0)]]).unwrap());
        assert_eq!(phis(&ch, &p).unwrap(), vec![frac(3, 2)]);
    }

    #[test]
    fn bs_roundtrip() {
        let ch = BSChart::new(&[w(2, &[0, 1]), w(2, &[1, 0])]);
        let z = vec![frac(1, 2), rat(-3), frac(5, 7), rat(2)];
        let p = bs_param(&ch, &z);
        assert_eq!(canonicalize_fn(&p.c), p);
        assert_eq!(bs_coords(&p, &ch).unwrap(), z);
        let other = BSChart::new(&[w(2, &[0]), w(2, &[1, 0])]);
        assert!(matches!(bs_coords(&p, &other), Err(Error::WrongCell(_))));
    }

    #[test]
    fn lusztig_a1() {
        let ch = BSChart::new(&[w(1, &[0])]);
        let eps = frac(-2, 5);
        let p = lusztig_chart(&ch, std::slice::from_ref(&eps)).unwrap();
        let expect = one_param::<Rat>(2, Sign::Pos, 0, &eps.recip()).mul(&sbar(2, 0));
        assert_eq!(p.c[0], expect);
        assert_eq!(invert_lusztig(&ch, &p).unwrap(), vec![eps.clone()]);
        assert_eq!(tau(&p).unwrap().tau, vec![eps.recip()]);
        assert_eq!(lusztig_chart(&ch, &[rat(0)]).unwrap_err(), Error::ZeroParameter { index: 0 });
    }

    #[test]
    fn r_table_a2() {
        let rs = RootSystem::new(2);
        assert_eq!(r_exponent(&rs, &[0, 1], 0, 1), 1);
        assert_eq!(r_case(&[0, 1, 0], 0, 2), RCase::Same);
        assert_eq!(r_case(&[0, 0, 1], 0, 2), RCase::Repeated);
    }

    #[test]
    fn varsigma_single_block() {
        let ch = BSChart::new(&[w(2, &[0, 1, 0])]);
        let p = lusztig_chart(&ch, &[rat(2), frac(1, 3), rat(-1)]).unwrap();
        let ms = varsigma_factor(&p).unwrap();
        assert_eq!(ms[0], gauss(&p.c[0]).unwrap().l);
        assert_eq!(varsigma(&ms), p);
    }

    #[test]
    fn t_dot_examples() {
        let ws = vec![w(2, &[0]), w(2, &[1, 0])];
        let bars: Vec<QMat> = ws.iter().map(wbar).collect();
        assert!(t_dot(&ws, &bars).unwrap().is_identity());
        let t1 = TorusElt::new(vec![rat(2), frac(1, 3)]).unwrap();
        let reps = dotted(&ws[..1], std::slice::from_ref(&t1));
        assert_eq!(t_dot(&ws[..1], &reps).unwrap(), t1);
    }

    #[test]
    fn tits_distance_examples() {
        let f = canonicalize_fn(&[QMat::identity(3)]);
        assert!(tits_distance(&f, &f).is_identity());
        let u = w(2, &[1, 0]);
        let g = canonicalize_fn(&[wbar(&u)]);
        assert_eq!(tits_distance(&f, &g), u);
        assert_eq!(tits_distance(&g, &f), u.inverse());
    }

    fn a2_charts(max_len: usize) -> Vec<BSChart> {
        // all tuples of reduced words of A2 elements with total length <= max_len
        let mut out = Vec::new();
        let ws = WeylElt::all(2);
        for a in &ws {
            if a.length() <= max_len {
                out.push(BSChart::new(std::slice::from_ref(a)));
            }
            for b in &ws {
                if a.length() + b.length() <= max_len && a.length() + b.length() > 3 {
                    out.push(BSChart::new(&[a.clone(), b.clone()]));
                }
            }
        }
        out
    }

    #[test]
    fn lusztig_inversion_round_trip_a2() {
        let mut s = crate::sample::Sampler::new(41);
        for ch in a2_charts(6) {
            for _ in 0..5 {
                let eps = s.nonzero_rats(ch.len());
                let p = lusztig_chart(&ch, &eps).unwrap();
                assert!(phis(&ch, &p).unwrap().iter().all(|x| !x.is_zero()));
                assert_eq!(invert_lusztig(&ch, &p).unwrap(), eps, "{:?}", ch.w);
            }
        }
    }

    #[test]
    fn phi_formulas_agree() {
        let mut s = crate::sample::Sampler::new(42);
        for ch in a2_charts(4) {
            for _ in 0..3 {
                let p = bs_param(&ch, &s.rats(ch.len()));
                let ph = phis(&ch, &p).unwrap();
                for (j, x) in ph.iter().enumerate() {
                    assert_eq!(&phi_by_minor(&ch, j, &p).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn single_block_inversion_by_generalized_minors() {
        let mut s = crate::sample::Sampler::new(43);
        for word in [vec![0], vec![0, 1], vec![1, 0], vec![0, 1, 0]] {
            let ch = BSChart::new(&[w(2, &word)]);
            let eps = s.nonzero_rats(ch.len());
            let p = lusztig_chart(&ch, &eps).unwrap();
            let g = p.c[0].mul(&wbar::<Rat>(&ch.w[0]).inverse().unwrap());
            assert_eq!(invert_lusztig_single(&ch, &g).unwrap(), eps);
            assert_eq!(invert_lusztig(&ch, &p).unwrap(), eps);
        }
    }

    #[test]
    fn tau_equivariance() {
        let mut s = crate::sample::Sampler::new(44);
        for ch in a2_charts(4) {
            let wprod = ch.w.iter().skip(1).fold(ch.w[0].clone(), |a, b| a.mul(b).unwrap());
            let mut done = 0;
            while done < 5 {
                let p = bs_param(&ch, &s.rats(ch.len()));
                if !in_owe(&p) {
                    continue;
                }
                let h = s.torus(2);
                let lhs = tau(&p.act(&h)).unwrap();
                let rhs = h.mul(&h.inv().conj(&wprod)).mul(&tau(&p).unwrap());
                assert_eq!(lhs, rhs);
                done += 1;
            }
        }
    }

    #[test]
    fn canonical_form_ignores_borel_twists() {
        let mut s = crate::sample::Sampler::new(45);
        for n in 1..=3 {
            let gs = s.tuple(3, n);
            let p = canonicalize_fn(&gs);
            let mut tw = gs.clone();
            for i in 0..n {
                let b = s.borel(3);
                tw[i] = tw[i].mul(&b);
                if i + 1 < n {
                    tw[i + 1] = b.inverse().unwrap().mul(&tw[i + 1]);
                }
            }
            assert_eq!(canonicalize_fn(&tw), p);
            assert_eq!(canonicalize_fn(&p.c), p);
        }
    }
}
