//! Root vectors of sl(r+1), the trace-form Casimir of the Cartan subalgebra,
//! the standard r-matrix and the dual bases of `b_-` and `b`.
//!
//! The trace form has `<E_alpha, E_{-alpha}> = 1` for matrix units, but the
//! Cartan subalgebra has no rational orthonormal basis. Every sum
//! `sum_i h_i ⊗ h_i` is therefore written as `sum_{a,b} C_{ab} H_a ⊗ H_b`
//! with `C` the inverse Gram matrix of the coroots.

use num_traits::Zero;

use crate::groupcore::{e_ij, h_a, rat, Mat, QMat, RMat, Rat};
use crate::rootdata::RootSystem;

/// One term `c · x ⊗ y` of a tensor in `g ⊗ g`.
pub type TensorTerm = (Rat, QMat, QMat);

/// Positive roots as index pairs `(i, j)`, `i < j`, with `E_alpha = E_{ij}`.
pub fn positive_roots(n: usize) -> Vec<(usize, usize)> {
    RootSystem::new(n - 1).positive_roots()
}

pub fn e_pos(n: usize, (i, j): (usize, usize)) -> QMat {
    e_ij(n, i, j)
}

pub fn e_neg(n: usize, (i, j): (usize, usize)) -> QMat {
    e_ij(n, j, i)
}

pub fn trace_form(x: &QMat, y: &QMat) -> Rat {
    let p = x.mul(y);
    (0..p.size()).fold(Rat::zero(), |acc, i| acc + p.get(i, i))
}

/// Gram matrix of the coroots `H_a` under the trace form, inverted.
pub fn coroot_gram_inverse(n: usize) -> Vec<Vec<Rat>> {
    RootSystem::new(n - 1).cartan_inverse()
}

/// `sum_i h_i ⊗ h_i` for an orthonormal basis of the Cartan subalgebra.
pub fn torus_casimir(n: usize) -> Vec<TensorTerm> {
    let c = coroot_gram_inverse(n);
    let mut out = Vec::new();
    for (a, row) in c.iter().enumerate() {
        for (b, cab) in row.iter().enumerate() {
            if !cab.is_zero() {
                out.push((cab.clone(), h_a(n, a), h_a(n, b)));
            }
        }
    }
    out
}

/// The standard r-matrix `sum_i h_i ⊗ h_i + 2 sum_alpha E_{-alpha} ⊗ E_alpha`.
pub fn r_st(n: usize) -> Vec<TensorTerm> {
    let mut out = torus_casimir(n);
    for a in positive_roots(n) {
        out.push((rat(2), e_neg(n, a), e_pos(n, a)));
    }
    out
}

/// `Lambda_st = sum_alpha E_{-alpha} ∧ E_alpha`, expanded into tensor terms.
pub fn lambda_st(n: usize) -> Vec<TensorTerm> {
    let mut out = Vec::new();
    for a in positive_roots(n) {
        out.push((rat(1), e_neg(n, a), e_pos(n, a)));
        out.push((rat(-1), e_pos(n, a), e_neg(n, a)));
    }
    out
}

/// The pairing between `b_-` and `b`: half the trace form on the nilpotent
/// parts plus the trace form on the diagonal parts.
pub fn bb_pairing(x: &QMat, y: &QMat) -> Rat {
    let n = x.size();
    let mut nil = Rat::zero();
    let mut diag = Rat::zero();
    for i in 0..n {
        diag += x.get(i, i) * y.get(i, i);
        for j in 0..i {
            nil += x.get(i, j) * y.get(j, i);
        }
    }
    nil / rat(2) + diag
}

/// Pairs `(x_i, x^i)` of dual bases of `b_-` and `b` under [`bb_pairing`]:
/// `x_i` runs over the coroots and `2 E_{-alpha}`, `x^i` over the dual
/// combinations of coroots and `E_alpha`.
pub fn dual_bases(n: usize) -> Vec<(QMat, QMat)> {
    let c = coroot_gram_inverse(n);
    let mut out = Vec::new();
    for (a, row) in c.iter().enumerate() {
        let mut dual = QMat::zeros(n);
        for (b, cab) in row.iter().enumerate() {
            dual = dual.add(&h_a::<Rat>(n, b).scale(cab));
        }
        out.push((h_a(n, a), dual));
    }
    for a in positive_roots(n) {
        out.push((e_neg(n, a).scale(&rat(2)), e_pos(n, a)));
    }
    out
}

/// A tensor as an `n^2 × n^2` matrix, for comparing sums of terms.
pub fn tensor_matrix(n: usize, terms: &[TensorTerm]) -> RMat {
    let nn = n * n;
    let mut out = RMat::zeros(nn, nn);
    for (c, x, y) in terms {
        for (p, xv) in x.entries().iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            for (q, yv) in y.entries().iter().enumerate() {
                if !yv.is_zero() {
                    *out.at_mut(p, q) += c * xv * yv;
                }
            }
        }
    }
    out
}

/// Identity `I + s X` over any scalar ring.
pub fn one_plus<S: crate::groupcore::Scalar>(x: &QMat, s: &S) -> Mat<S> {
    let n = x.size();
    Mat::from_fn(n, |i, j| {
        let xij = x.get(i, j);
        let v = if xij.is_zero() { S::szero() } else { s.scale(xij) };
        if i == j {
            v.add(&S::sone())
        } else {
            v
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_bases_are_dual() {
        for n in 2..=4 {
            let d = dual_bases(n);
            for (i, (x, _)) in d.iter().enumerate() {
                for (j, (_, y)) in d.iter().enumerate() {
                    let expect = if i == j { rat(1) } else { rat(0) };
                    assert_eq!(bb_pairing(x, y), expect, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn casimir_is_basis_free() {
        // sum_{ab} C_ab tr(H_a X) tr(H_b Y) = tr(X Y) on diagonal traceless X, Y
        let n = 3;
        let cas = torus_casimir(n);
        let x = QMat::diag(&[rat(2), rat(-3), rat(1)]);
        let y = QMat::diag(&[rat(5), rat(1), rat(-6)]);
        let lhs = cas.iter().fold(Rat::zero(), |acc, (c, a, b)| acc + c * trace_form(a, &x) * trace_form(b, &y));
        assert_eq!(lhs, trace_form(&x, &y));
    }

    #[test]
    fn r_matrix_from_dual_bases() {
        for n in 2..=4 {
            let from_bases: Vec<TensorTerm> = dual_bases(n).into_iter().map(|(x, y)| (rat(1), x, y)).collect();
            assert_eq!(tensor_matrix(n, &from_bases), tensor_matrix(n, &r_st(n)));
            // skew part of r_st is Lambda_st
            let r = tensor_matrix(n, &r_st(n));
            let flip: Vec<TensorTerm> = r_st(n).into_iter().map(|(c, x, y)| (c, y, x)).collect();
            let skew = r.sub(&tensor_matrix(n, &flip)).scale(&Rat::new(1.into(), 2.into()));
            assert_eq!(skew, tensor_matrix(n, &lambda_st(n)));
        }
    }
}
