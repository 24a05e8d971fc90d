//! Root data of type A_r: the Cartan matrix, Weyl group elements as
//! permutations of {0..r}, the weight action on fundamental-weight
//! coordinates and integer kernels via Smith normal form.
//!
//! Simple roots are indexed 0..r. The simple reflection `s_i` swaps `i` and
//! `i+1`. Weights are written in the basis of fundamental weights, with
//! `omega_k = e_0 + ... + e_k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::groupcore::Rat;

/// The type A_r root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        let cartan = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        RootSystem { rank, cartan }
    }

    /// Simple root `alpha_j` in fundamental-weight coordinates (column j of A).
    pub fn simple_root(&self, j: usize) -> Vec<i64> {
        (0..self.rank).map(|i| self.cartan[i][j]).collect()
    }

    /// Positive roots `e_i - e_j`, `i < j`, as pairs of matrix indices.
    pub fn positive_roots(&self) -> Vec<(usize, usize)> {
        let n = self.rank + 1;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push((i, j));
            }
        }
        out
    }

    /// Inverse of the Cartan matrix over the rationals.
    pub fn cartan_inverse(&self) -> Vec<Vec<Rat>> {
        // closed form for type A: min(i,j)(r+1-max(i,j))/(r+1), 1-based
        let r = self.rank as i64;
        (1..=r)
            .map(|i| {
                (1..=r)
                    .map(|j| Rat::new((i.min(j) * (r + 1 - i.max(j))).into(), (r + 1).into()))
                    .collect()
            })
            .collect()
    }
}

/// A Weyl group element of type A_r.
///
/// `perm[j] = w(j)`; composition is `(uv)(j) = u(v(j))`. The stored word is
/// the lexicographically smallest reduced word and is recomputed on every
/// construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt {
    perm: Vec<usize>,
    word: Vec<usize>,
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            let s: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
            write!(f, "{}", s.join(""))
        }
    }
}

impl WeylElt {
    pub fn identity(rank: usize) -> Self {
        Self::from_perm((0..=rank).collect()).expect("identity permutation")
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        assert!(i < rank, "simple index out of range");
        let mut p: Vec<usize> = (0..=rank).collect();
        p.swap(i, i + 1);
        Self::from_perm(p).expect("transposition")
    }

    pub fn from_perm(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::DimensionMismatch("not a permutation".into()));
            }
            seen[p] = true;
        }
        let word = lex_reduced_word(&perm);
        Ok(WeylElt { perm, word })
    }

    /// The product `s_{a_1} s_{a_2} ... s_{a_k}` (need not be reduced).
    pub fn from_word(rank: usize, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(rank);
        for &i in word {
            if i >= rank {
                return Err(Error::DimensionMismatch(format!("letter {i} out of range")));
            }
            w = w.mul(&Self::simple(rank, i))?;
        }
        Ok(w)
    }

    pub fn longest(rank: usize) -> Self {
        Self::from_perm((0..=rank).rev().collect()).expect("reversal")
    }

    /// All elements of the Weyl group, in lexicographic order of permutations.
    pub fn all(rank: usize) -> Vec<WeylElt> {
        let mut out = Vec::new();
        let mut p: Vec<usize> = (0..=rank).collect();
        permutations(&mut p, 0, &mut out);
        out.sort();
        out.into_iter().map(|p| Self::from_perm(p).unwrap()).collect()
    }

    pub fn rank(&self) -> usize {
        self.perm.len() - 1
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn inversions(&self) -> usize {
        let n = self.perm.len();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.perm[i] > self.perm[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        Self::from_perm(inv).unwrap()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        let p = other.perm.iter().map(|&j| self.perm[j]).collect();
        Self::from_perm(p)
    }

    /// Product of a nonempty sequence.
    pub fn product(ws: &[WeylElt]) -> Result<Self> {
        let mut it = ws.iter();
        let mut acc = it.next().expect("nonempty sequence").clone();
        for w in it {
            acc = acc.mul(w)?;
        }
        Ok(acc)
    }

    /// Matrix of `w` acting on X*(T) in fundamental-weight coordinates;
    /// column k is the image of `omega_k`.
    pub fn weight_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut m = vec![vec![0i64; r]; r];
        for k in 0..r {
            let mut e = vec![0i64; r];
            e[k] = 1;
            let img = act_on_weight(self, &e);
            for i in 0..r {
                m[i][k] = img[i];
            }
        }
        m
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, out);
        p.swap(k, i);
    }
}

/// Lexicographically smallest reduced word: peel off the smallest left descent.
fn lex_reduced_word(perm: &[usize]) -> Vec<usize> {
    let n = perm.len();
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    loop {
        // i is a left descent iff w^{-1}(i) > w^{-1}(i+1)
        let mut inv = vec![0; n];
        for (j, &x) in p.iter().enumerate() {
            inv[x] = j;
        }
        let Some(i) = (0..n.saturating_sub(1)).find(|&i| inv[i] > inv[i + 1]) else {
            break;
        };
        word.push(i);
        // replace w by s_i w
        for x in p.iter_mut() {
            if *x == i {
                *x = i + 1;
            } else if *x == i + 1 {
                *x = i;
            }
        }
    }
    word
}

/// Weyl group product of two elements given as words.
pub fn weyl_mul(u: &WeylElt, v: &WeylElt) -> Result<WeylElt> {
    u.mul(v)
}

/// Apply `w` to a weight given in fundamental-weight coordinates.
pub fn act_on_weight(w: &WeylElt, lambda: &[i64]) -> Vec<i64> {
    let r = w.rank();
    assert_eq!(lambda.len(), r, "weight length must equal rank");
    // epsilon coordinates: a_j = sum_{k >= j} c_k, a_r = 0
    let mut a = vec![0i64; r + 1];
    for j in (0..r).rev() {
        a[j] = a[j + 1] + lambda[j];
    }
    let mut b = vec![0i64; r + 1];
    for j in 0..=r {
        b[w.perm[j]] = a[j];
    }
    (0..r).map(|k| b[k] - b[k + 1]).collect()
}

/// `supp(w)` and `supp°(w)` as sorted lists of simple indices.
pub fn supp_sets(ws: &[WeylElt]) -> (Vec<usize>, Vec<usize>) {
    let r = ws.first().map(|w| w.rank()).expect("nonempty sequence");
    let mut supp = Vec::new();
    let mut supp0 = Vec::new();
    for a in 0..r {
        let mut omega = vec![0i64; r];
        omega[a] = 1;
        if ws.iter().all(|w| act_on_weight(w, &omega) == omega) {
            supp0.push(a);
        } else {
            supp.push(a);
        }
    }
    (supp, supp0)
}

/// A saturated sublattice of Z^r given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub basis: Vec<Vec<i64>>,
    pub dim: usize,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Lattice { basis, dim }
    }

    /// Lattice spanned by some coordinate vectors.
    pub fn coordinate(dim: usize, idx: &[usize]) -> Self {
        let basis = idx
            .iter()
            .map(|&i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Lattice { basis, dim }
    }

    /// Image of the lattice under a linear map given by an integer matrix.
    pub fn transform(&self, m: &[Vec<i64>]) -> Lattice {
        let basis = self
            .basis
            .iter()
            .map(|v| (0..self.dim).map(|i| (0..self.dim).map(|j| m[i][j] * v[j]).sum()).collect())
            .collect();
        Lattice { basis, dim: self.dim }
    }
}

/// Smith normal form `U A V = D` of an integer matrix, all factors exact.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub rank: usize,
}

fn ident(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Compute the Smith normal form by alternating row and column gcd steps.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = ident(m);
    let mut v = ident(n);
    let mut t = 0;
    while t < m.min(n) {
        // choose the smallest nonzero entry in the remaining block as pivot
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if d[i][j] != 0 && piv.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs()) {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let q = d[i][t].div_euclid(d[t][t]);
                if q != 0 {
                    for j in 0..n {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..m {
                        u[i][j] -= q * u[t][j];
                    }
                }
                if d[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = d[t][j].div_euclid(d[t][t]);
                if q != 0 {
                    for i in 0..m {
                        d[i][j] -= q * d[i][t];
                    }
                    for i in 0..n {
                        v[i][j] -= q * v[i][t];
                    }
                }
                if d[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move a smaller remainder into the pivot position
            let mut best = (t, t);
            for i in t..m {
                if d[i][t] != 0 && d[i][t].abs() < d[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if d[t][j] != 0 && d[t][j].abs() < d[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap(t, best.0);
                u.swap(t, best.0);
            } else if best.1 != t {
                for row in d.iter_mut() {
                    row.swap(t, best.1);
                }
                for row in v.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        // divisibility of the remaining block
        let mut fixed = false;
        'outer: for i in t + 1..m {
            for j in t + 1..n {
                if d[i][j] % d[t][t] != 0 {
                    for k in 0..n {
                        d[t][k] += d[i][k];
                    }
                    for k in 0..m {
                        u[t][k] += u[i][k];
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if d[t][t] < 0 {
            for k in 0..n {
                d[t][k] = -d[t][k];
            }
            for k in 0..m {
                u[t][k] = -u[t][k];
            }
        }
        t += 1;
    }
    Smith { d, u, v, rank: t }
}

/// An integer matrix `R` with `a R = I`, when `a` has full row rank and
/// unit elementary divisors.
pub fn integer_right_inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let m = a.len();
    if m == 0 {
        return None;
    }
    let n = a[0].len();
    let s = smith_normal_form(a);
    if s.rank != m || (0..m).any(|i| s.d[i][i].abs() != 1) {
        return None;
    }
    // a = U^{-1} D V^{-1}, so R = V D^+ U with D^+ the transpose of D.
    let r = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let x: i128 = (0..m).map(|k| s.v[i][k] * s.d[k][k] * s.u[k][j]).sum();
                    i64::try_from(x).expect("right inverse entry overflow")
                })
                .collect()
        })
        .collect();
    Some(r)
}

/// Integer kernel of `a` (an m×n matrix) as a saturated lattice in Z^n.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Lattice {
    if a.is_empty() {
        return Lattice::full(n);
    }
    let s = smith_normal_form(a);
    let basis = (s.rank..n)
        .map(|j| (0..n).map(|i| i64::try_from(s.v[i][j]).expect("kernel entry overflow")).collect())
        .collect();
    Lattice { basis, dim: n }
}

/// Characters fixed by `w`: the kernel of `M_w - I` on X*(T).
pub fn fixed_character_lattice(w: &WeylElt) -> Lattice {
    let r = w.rank();
    let mut m = w.weight_matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1;
    }
    integer_kernel(&m, r)
}

/// Rank of an integer matrix over Q.
pub fn integer_rank(a: &[Vec<i64>]) -> usize {
    if a.is_empty() {
        0
    } else {
        smith_normal_form(a).rank
    }
}

/// Dimension of the image of `1 - w` on the Cartan subalgebra.
pub fn dim_image_one_minus(w: &WeylElt) -> usize {
    let mut m = w.weight_matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1;
    }
    integer_rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = b.len();
        let p = if n == 0 { 0 } else { b[0].len() };
        a.iter()
            .map(|r| (0..p).map(|j| (0..n).map(|k| r[k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn involution_and_braid() {
        let s1 = WeylElt::simple(2, 0);
        let s2 = WeylElt::simple(2, 1);
        assert!(s1.mul(&s1).unwrap().is_identity());
        let a = WeylElt::from_word(2, &[0, 1, 0]).unwrap();
        let b = WeylElt::from_word(2, &[1, 0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, WeylElt::longest(2));
        assert_eq!(s1.mul(&s2).unwrap().length(), 2);
    }

    #[test]
    fn word_is_reduced_and_multiplies_back() {
        for r in 1..=3 {
            for w in WeylElt::all(r) {
                assert_eq!(w.length(), w.inversions());
                assert_eq!(WeylElt::from_word(r, w.word()).unwrap(), w);
                assert_eq!(w.inverse().length(), w.length());
            }
        }
        assert_eq!(WeylElt::all(3).len(), 24);
    }

    #[test]
    fn weight_action_examples() {
        let s = WeylElt::simple(1, 0);
        assert_eq!(act_on_weight(&s, &[1]), vec![-1]);
        let s1 = WeylElt::simple(2, 0);
        assert_eq!(act_on_weight(&s1, &[0, 1]), vec![0, 1]);
        // s_a omega_a = omega_a - alpha_a
        let rs = RootSystem::new(3);
        for a in 0..3 {
            let s = WeylElt::simple(3, a);
            let mut om = vec![0; 3];
            om[a] = 1;
            let al = rs.simple_root(a);
            let expect: Vec<i64> = om.iter().zip(&al).map(|(x, y)| x - y).collect();
            assert_eq!(act_on_weight(&s, &om), expect);
        }
    }

    #[test]
    fn weight_action_is_a_homomorphism() {
        for u in WeylElt::all(3) {
            for v in WeylElt::all(3).iter().step_by(5) {
                let uv = u.mul(v).unwrap();
                let lam = vec![2, -1, 3];
                assert_eq!(act_on_weight(&uv, &lam), act_on_weight(&u, &act_on_weight(v, &lam)));
            }
        }
    }

    #[test]
    fn supp_examples() {
        let e = WeylElt::identity(2);
        assert_eq!(supp_sets(&[e]), (vec![], vec![0, 1]));
        let s1 = WeylElt::simple(2, 0);
        let s2 = WeylElt::simple(2, 1);
        assert_eq!(supp_sets(std::slice::from_ref(&s1)), (vec![0], vec![1]));
        assert_eq!(supp_sets(&[s1, s2]), (vec![0, 1], vec![]));
    }

    #[test]
    fn smith_reconstructs() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith_normal_form(&a);
        let a128: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        assert_eq!(mat_mul(&mat_mul(&s.u, &a128), &s.v), s.d);
        // invariant factors 2, 6, 12
        assert_eq!((s.d[0][0], s.d[1][1], s.d[2][2]), (2, 6, 12));
    }

    #[test]
    fn fixed_lattice_examples() {
        assert_eq!(fixed_character_lattice(&WeylElt::identity(2)).rank(), 2);
        assert_eq!(fixed_character_lattice(&WeylElt::simple(1, 0)).rank(), 0);
        let l = fixed_character_lattice(&WeylElt::simple(2, 0));
        assert_eq!(l.rank(), 1);
        let v = &l.basis[0];
        assert_eq!(v[0], 0);
        assert_eq!(v[1].abs(), 1);
    }

    #[test]
    fn fixed_rank_plus_image_is_rank() {
        for r in 2..=3 {
            for w in WeylElt::all(r) {
                let l = fixed_character_lattice(&w);
                assert_eq!(l.rank() + dim_image_one_minus(&w), r);
                // every basis vector really is fixed
                for b in &l.basis {
                    assert_eq!(&act_on_weight(&w, b), b);
                }
            }
        }
    }

    #[test]
    fn cartan_inverse_is_inverse() {
        for r in 1..=4 {
            let rs = RootSystem::new(r);
            let inv = rs.cartan_inverse();
            for i in 0..r {
                for j in 0..r {
                    let s: Rat = (0..r).map(|k| Rat::from_integer(rs.cartan[i][k].into()) * &inv[k][j]).sum();
                    assert_eq!(s, Rat::from_integer(i64::from(i == j).into()));
                }
            }
        }
    }

    #[test]
    fn right_inverse() {
        let a = vec![vec![-1, 0, 2], vec![-1, -1, 3]];
        let r = integer_right_inverse(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x: i64 = (0..3).map(|k| a[i][k] * r[k][j]).sum();
                assert_eq!(x, i64::from(i == j));
            }
        }
        assert!(integer_right_inverse(&[vec![2, 0]]).is_none());
    }
}
