//! Exact matrix realization of SL(r+1): one-parameter subgroups, the
//! representatives `sbar` and `wbar`, Gauss and Bruhat factorizations and
//! minors. Every factorization is generic over [`Scalar`], so it can be run
//! on jets to differentiate it. Cells are always read off the value parts.

pub mod jet;
pub mod matrix;
pub mod scalar;
pub mod torus;

use num_traits::{One, Zero};

pub use jet::Jet;
pub use matrix::{Mat, QMat, RMat};
pub use scalar::{frac, rat, rat_sqrt, rat_to_string, Rat, Scalar};
pub use torus::{torus_conjugate, TorusElt};

use crate::error::{Error, Result};
use crate::rootdata::WeylElt;

/// Sign of a one-parameter subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Pos,
    Neg,
}

/// Matrix unit `E_{ij}` in size n.
pub fn e_ij<S: Scalar>(n: usize, i: usize, j: usize) -> Mat<S> {
    let mut m = Mat::zeros(n);
    m.set(i, j, S::sone());
    m
}

/// Coroot `H_a = E_{aa} - E_{a+1,a+1}`.
pub fn h_a<S: Scalar>(n: usize, a: usize) -> Mat<S> {
    let mut m = Mat::zeros(n);
    m.set(a, a, S::sone());
    m.set(a + 1, a + 1, S::sone().neg());
    m
}

/// `x_{alpha_i}(z) = I + z E_{i,i+1}` or `x_{-alpha_i}(z) = I + z E_{i+1,i}`.
pub fn one_param<S: Scalar>(n: usize, sign: Sign, i: usize, z: &S) -> Mat<S> {
    let mut m = Mat::identity(n);
    match sign {
        Sign::Pos => m.set(i, i + 1, z.clone()),
        Sign::Neg => m.set(i + 1, i, z.clone()),
    }
    m
}

/// `sbar_alpha = x_alpha(-1) x_{-alpha}(1) x_alpha(-1)`.
pub fn sbar<S: Scalar>(n: usize, i: usize) -> Mat<S> {
    let m1 = S::sone().neg();
    let a = one_param(n, Sign::Pos, i, &m1);
    let b = one_param(n, Sign::Neg, i, &S::sone());
    a.mul(&b).mul(&a)
}

/// `wbar` along the stored reduced word.
pub fn wbar<S: Scalar>(w: &WeylElt) -> Mat<S> {
    wbar_word(w.rank() + 1, w.word())
}

/// Product of `sbar` along an explicit word.
pub fn wbar_word<S: Scalar>(n: usize, word: &[usize]) -> Mat<S> {
    let mut m = Mat::identity(n);
    for &i in word {
        m = m.mul(&sbar(n, i));
    }
    m
}

/// The representative `(wbar(w^{-1}))^{-1}`.
pub fn wdbar(w: &WeylElt) -> QMat {
    wbar::<Rat>(&w.inverse()).inverse().expect("invertible")
}

/// Check `x_{-a}(z) = x_a(1/z) sbar_a a^vee(z) x_a(1/z)` entrywise.
pub fn sl2_identity_check(n: usize, i: usize, z: &Rat) -> bool {
    if z.is_zero() {
        return false;
    }
    let zi = z.recip();
    let lhs = one_param(n, Sign::Neg, i, z);
    let rank = n - 1;
    let rhs = one_param(n, Sign::Pos, i, &zi)
        .mul(&sbar(n, i))
        .mul(&TorusElt::coroot(rank, i, z).to_matrix())
        .mul(&one_param(n, Sign::Pos, i, &zi));
    lhs == rhs
}

/// `Delta^{omega_{alpha_k}}(g)`: the leading (k+1)×(k+1) minor.
pub fn principal_minor<S: Scalar>(k: usize, g: &Mat<S>) -> S {
    g.leading_minor(k + 1)
}

/// `Delta_{u omega, v omega}(g) = Delta^{omega}(ubar^{-1} g vbar)`.
pub fn generalized_minor(u: &WeylElt, v: &WeylElt, k: usize, g: &QMat) -> Rat {
    let ui = wbar::<Rat>(u).inverse().expect("invertible");
    principal_minor(k, &ui.mul(g).mul(&wbar(v)))
}

/// Gauss factors `g = l · diag(d) · u`.
#[derive(Clone, Debug)]
pub struct Gauss<S: Scalar> {
    pub l: Mat<S>,
    pub d: Vec<S>,
    pub u: Mat<S>,
}

impl<S: Scalar> Gauss<S> {
    pub fn torus_matrix(&self) -> Mat<S> {
        Mat::diag(&self.d)
    }
    /// `[g]_{>=0} = [g]_0 [g]_+`.
    pub fn upper_part(&self) -> Mat<S> {
        self.torus_matrix().mul(&self.u)
    }
    /// `[g]_{<=0} = [g]_- [g]_0`.
    pub fn lower_part(&self) -> Mat<S> {
        self.l.mul(&self.torus_matrix())
    }
}

/// LDU factorization without pivoting; fails at the first vanishing pivot.
pub fn gauss<S: Scalar>(g: &Mat<S>) -> Result<Gauss<S>> {
    let n = g.size();
    let mut a = g.clone();
    let mut l = Mat::identity(n);
    let mut u = Mat::identity(n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let p = a.get(k, k).clone();
        let pinv = p.inv().ok_or(Error::NotInBigCell { alpha: k })?;
        for i in k + 1..n {
            l.set(i, k, a.get(i, k).mul(&pinv));
        }
        for j in k + 1..n {
            u.set(k, j, a.get(k, j).mul(&pinv));
        }
        for i in k + 1..n {
            if a.get(i, k).is_exact_zero() {
                continue;
            }
            let f = l.get(i, k).clone();
            for j in k + 1..n {
                let x = a.get(i, j).sub(&f.mul(a.get(k, j)));
                a.set(i, j, x);
            }
        }
        d.push(p);
    }
    Ok(Gauss { l, d, u })
}

/// Public Gauss decomposition on rationals: `(n_-, t, n_+)`.
pub fn gauss_decompose(g: &QMat) -> Result<(QMat, TorusElt, QMat)> {
    let gs = gauss(g)?;
    let t = TorusElt::from_matrix(&gs.torus_matrix())?;
    Ok((gs.l, t, gs.u))
}

/// Reversal permutation matrix (an involution).
fn reversal<S: Scalar>(n: usize) -> Mat<S> {
    Mat::from_fn(n, |i, j| if i + j == n - 1 { S::sone() } else { S::szero() })
}

/// Opposite Gauss factors `g = n_+ · diag(d) · n_-` for g in B B_-.
pub fn gauss_opposite<S: Scalar>(g: &Mat<S>) -> Result<Gauss<S>> {
    let n = g.size();
    let j = reversal::<S>(n);
    let gs = gauss(&j.mul(g).mul(&j))?;
    // J L J is upper, J U J is lower
    let mut d = gs.d.clone();
    d.reverse();
    Ok(Gauss { l: j.mul(&gs.l).mul(&j), d, u: j.mul(&gs.u).mul(&j) })
}

/// Bruhat cell of g in `B\G/B`, from ranks of lower-left submatrices.
pub fn bruhat_cell(g: &QMat) -> WeylElt {
    let n = g.size();
    // r[i][j] = rank of rows i..n, columns 0..j (exclusive), padded with zeros
    let mut r = vec![vec![0usize; n + 1]; n + 1];
    for i in 0..n {
        for j in 1..=n {
            let mut sub = RMat::zeros(n - i, j);
            for a in i..n {
                for b in 0..j {
                    *sub.at_mut(a - i, b) = g.get(a, b).clone();
                }
            }
            r[i][j] = sub.rank();
        }
    }
    let mut perm = vec![0usize; n];
    for j in 0..n {
        for i in 0..n {
            let v = r[i][j + 1] + r[i + 1][j] - r[i][j] - r[i + 1][j + 1];
            if v == 1 {
                perm[j] = i;
            }
        }
    }
    WeylElt::from_perm(perm).expect("rank profile of an invertible matrix is a permutation")
}

/// Bruhat cell of g in `B_-\G/B_-`.
pub fn bruhat_cell_neg(g: &QMat) -> WeylElt {
    let n = g.size();
    let j = reversal::<Rat>(n);
    let w0 = WeylElt::longest(n - 1);
    let c = bruhat_cell(&j.mul(g).mul(&j));
    w0.mul(&c).unwrap().mul(&w0).unwrap()
}

/// Positive Bruhat factorization `g = c b`, `c in C_{wbar}`, `b in B`.
#[derive(Clone, Debug)]
pub struct BruhatFactorization {
    pub u: WeylElt,
    pub c: QMat,
    pub b: QMat,
}

/// `g = c b` with `c = rep [rep^{-1} g]_-` and `b = [rep^{-1} g]_{>=0}`, for
/// any representative `rep` of the cell of g.
pub fn factor_pos_with<S: Scalar>(g: &Mat<S>, rep: &QMat) -> Result<(Mat<S>, Mat<S>)> {
    let ri = rep.inverse()?;
    let x = Mat::<S>::lift(&ri).mul(g);
    let gs = gauss(&x).map_err(|_| Error::WrongCell("representative does not match the Bruhat cell".into()))?;
    Ok((Mat::lift(rep).mul(&gs.l), gs.upper_part()))
}

/// `g = b_- c` with `b_- = [g rep^{-1}]_{<=0}` and `c = [g rep^{-1}]_+ rep`.
pub fn factor_neg_with<S: Scalar>(g: &Mat<S>, rep: &QMat) -> Result<(Mat<S>, Mat<S>)> {
    let ri = rep.inverse()?;
    let x = g.mul(&Mat::lift(&ri));
    let gs = gauss(&x).map_err(|_| Error::WrongCell("representative does not match the B_- Bruhat cell".into()))?;
    Ok((gs.lower_part(), gs.u.mul(&Mat::lift(rep))))
}

/// Detect the cell from values and factor with `wbar`.
pub fn factor_pos<S: Scalar>(g: &Mat<S>) -> Result<(WeylElt, Mat<S>, Mat<S>)> {
    let w = bruhat_cell(&g.values());
    let (c, b) = factor_pos_with(g, &wbar(&w))?;
    Ok((w, c, b))
}

/// Detect the `B_-` cell from values and factor with `wbar`.
pub fn factor_neg<S: Scalar>(g: &Mat<S>) -> Result<(Mat<S>, WeylElt, Mat<S>)> {
    let v = bruhat_cell_neg(&g.values());
    let (bm, c) = factor_neg_with(g, &wbar(&v))?;
    Ok((bm, v, c))
}

pub fn bruhat_factor_pos(g: &QMat) -> BruhatFactorization {
    let (u, c, b) = factor_pos(g).expect("every invertible matrix has a Bruhat factorization");
    BruhatFactorization { u, c, b }
}

pub fn bruhat_factor_neg(g: &QMat) -> (QMat, WeylElt, QMat) {
    factor_neg(g).expect("every invertible matrix has a B_- Bruhat factorization")
}

/// Membership in `C_rep = N rep ∩ rep N_-`.
pub fn in_c_cell(c: &QMat, rep: &QMat) -> bool {
    let ri = rep.inverse().expect("invertible");
    c.mul(&ri).is_unit_upper() && ri.mul(c).is_unit_lower()
}

/// Membership in B (upper triangular) for a matrix of determinant one.
pub fn in_b<S: Scalar>(g: &Mat<S>) -> bool {
    g.is_upper()
}

pub fn in_bminus<S: Scalar>(g: &Mat<S>) -> bool {
    g.is_lower()
}

/// Torus part of a triangular matrix.
pub fn torus_part(g: &QMat) -> TorusElt {
    TorusElt::from_matrix(&Mat::diag(&g.diagonal())).expect("triangular matrix of determinant one")
}

pub fn check_sl(g: &QMat) -> Result<()> {
    if g.det().is_one() {
        Ok(())
    } else {
        Err(Error::ConstraintViolated("determinant is not 1".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::WeylElt;

    fn q(rows: &[&[i64]]) -> QMat {
        QMat::from_i64(rows)
    }

    #[test]
    fn one_param_examples() {
        assert!(one_param::<Rat>(2, Sign::Pos, 0, &rat(0)).is_identity());
        assert_eq!(one_param::<Rat>(2, Sign::Pos, 0, &rat(3)), q(&[&[1, 3], &[0, 1]]));
        let a = one_param::<Rat>(3, Sign::Neg, 1, &frac(2, 3));
        let b = one_param::<Rat>(3, Sign::Neg, 1, &frac(-5, 7));
        assert_eq!(a.mul(&b), one_param(3, Sign::Neg, 1, &(frac(2, 3) + frac(-5, 7))));
    }

    #[test]
    fn sbar_examples() {
        let s: QMat = sbar(2, 0);
        assert_eq!(s, q(&[&[0, -1], &[1, 0]]));
        assert!(s.mul(&s).mul(&s).mul(&s).is_identity());
        let t = TorusElt::new(vec![frac(3, 2), rat(5)]).unwrap();
        let s3: QMat = sbar(3, 1);
        let c = s3.mul(&t.to_matrix()).mul(&s3.inverse().unwrap());
        assert!(c.is_diagonal());
    }

    #[test]
    fn wbar_longest_is_signed_antidiagonal() {
        let w0: QMat = wbar(&WeylElt::longest(2));
        for i in 0..3 {
            for j in 0..3 {
                let x = w0.get(i, j);
                if i + j == 2 {
                    assert!(x == &rat(1) || x == &rat(-1));
                } else {
                    assert!(x.is_zero());
                }
            }
        }
        assert_eq!(wbar_word::<Rat>(3, &[0, 1, 0]), wbar_word::<Rat>(3, &[1, 0, 1]));
    }

    #[test]
    fn permutation_convention() {
        // wbar(w) e_j = ± e_{w(j)}
        for w in WeylElt::all(3) {
            let m: QMat = wbar(&w);
            for j in 0..4 {
                assert!(!m.get(w.perm()[j], j).is_zero());
            }
        }
    }

    #[test]
    fn sl2_identity_values() {
        for z in [rat(1), rat(-2), frac(7, 3)] {
            assert!(sl2_identity_check(2, 0, &z));
            assert!(sl2_identity_check(4, 2, &z));
        }
    }

    #[test]
    fn gauss_examples() {
        let (l, t, u) = gauss_decompose(&QMat::identity(3)).unwrap();
        assert!(l.is_identity() && t.is_identity() && u.is_identity());
        assert_eq!(gauss_decompose(&q(&[&[0, -1], &[1, 0]])).unwrap_err(), Error::NotInBigCell { alpha: 0 });
        let (l, t, u) = gauss_decompose(&q(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(l, Mat::from_rows(vec![vec![rat(1), rat(0)], vec![frac(1, 2), rat(1)]]).unwrap());
        assert_eq!(t.tau, vec![rat(2)]);
        assert_eq!(u, Mat::from_rows(vec![vec![rat(1), frac(1, 2)], vec![rat(0), rat(1)]]).unwrap());
    }

    #[test]
    fn principal_minor_a1() {
        let g = q(&[&[2, 3], &[1, 2]]);
        assert_eq!(principal_minor(0, &g), rat(2));
        assert_eq!(principal_minor(0, &QMat::identity(2)), rat(1));
    }

    #[test]
    fn generalized_minor_a1() {
        let s = WeylElt::simple(1, 0);
        let e = WeylElt::identity(1);
        let g = one_param::<Rat>(2, Sign::Neg, 0, &frac(5, 3));
        // Delta^omega(sbar^{-1} g) picks the lower-left entry of g
        assert_eq!(generalized_minor(&s, &e, 0, &g), frac(5, 3));
        assert_eq!(generalized_minor(&e, &s, 0, &g), rat(0));
        // torus sandwich
        let u = WeylElt::simple(2, 1);
        let v = WeylElt::from_word(2, &[0, 1]).unwrap();
        let t = TorusElt::new(vec![frac(2, 5), rat(3)]).unwrap();
        let g = wbar::<Rat>(&u).mul(&t.to_matrix()).mul(&wbar::<Rat>(&v).inverse().unwrap());
        assert_eq!(generalized_minor(&u, &v, 1, &g), rat(3));
    }

    #[test]
    fn bruhat_cell_examples() {
        assert!(bruhat_cell(&QMat::identity(3)).is_identity());
        for w in WeylElt::all(3) {
            assert_eq!(bruhat_cell(&wbar(&w)), w);
            assert_eq!(bruhat_cell_neg(&wbar(&w)), w);
        }
        let g = one_param::<Rat>(3, Sign::Neg, 1, &rat(4)).mul(&one_param(3, Sign::Pos, 0, &rat(2)));
        assert_eq!(bruhat_cell(&g), WeylElt::simple(2, 1));
    }

    #[test]
    fn factor_examples() {
        let eps = frac(3, 4);
        let g = one_param::<Rat>(2, Sign::Neg, 0, &eps);
        let f = bruhat_factor_pos(&g);
        let ei = eps.recip();
        assert_eq!(f.c, one_param::<Rat>(2, Sign::Pos, 0, &ei).mul(&sbar(2, 0)));
        assert_eq!(f.b, TorusElt::coroot(1, 0, &eps).to_matrix().mul(&one_param(2, Sign::Pos, 0, &ei)));
        let b = q(&[&[2, 5], &[0, 1]]).mul(&Mat::diag(&[rat(1), frac(1, 2)]));
        let f = bruhat_factor_pos(&b);
        assert!(f.u.is_identity() && f.c.is_identity() && f.b == b);
        let (bm, v, c) = bruhat_factor_neg(&b.transpose());
        assert!(v.is_identity() && c.is_identity() && bm == b.transpose());
    }

    #[test]
    fn jets_differentiate_one_param() {
        // d/dz x_a(z0 + z) = E_{i,i+1}
        let z = Jet::var(frac(2, 3), 0, 1, 1);
        let m = one_param::<Jet>(3, Sign::Pos, 1, &z);
        assert_eq!(m.get(1, 2).d1_at(0), rat(1));
        assert_eq!(m.get(0, 1).d1_at(0), rat(0));
    }
}
