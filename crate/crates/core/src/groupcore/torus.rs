use num_traits::{One, Zero};

use super::matrix::{Mat, QMat};
use super::scalar::{Rat, Scalar};
use crate::error::{Error, Result};
use crate::rootdata::{act_on_weight, WeylElt};

/// A point of the maximal torus of SL(r+1), stored by its values
/// `tau_k = t^{omega_k}` on the fundamental weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElt {
    pub tau: Vec<Rat>,
}

impl TorusElt {
    pub fn new(tau: Vec<Rat>) -> Result<Self> {
        if let Some(k) = tau.iter().position(|x| x.is_zero()) {
            return Err(Error::ConstraintViolated(format!("torus coordinate {k} is zero")));
        }
        Ok(TorusElt { tau })
    }

    pub fn identity(rank: usize) -> Self {
        TorusElt { tau: vec![Rat::one(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.tau.len()
    }

    pub fn is_identity(&self) -> bool {
        self.tau.iter().all(|x| x.is_one())
    }

    /// Diagonal entries `d_0, ..., d_r` with `d_0 ... d_k = tau_k`.
    pub fn diagonal(&self) -> Vec<Rat> {
        let r = self.rank();
        let mut d = Vec::with_capacity(r + 1);
        let mut prev = Rat::one();
        for k in 0..r {
            d.push(&self.tau[k] / &prev);
            prev = self.tau[k].clone();
        }
        d.push(prev.recip());
        d
    }

    pub fn to_matrix(&self) -> QMat {
        Mat::diag(&self.diagonal())
    }

    pub fn to_matrix_s<S: Scalar>(&self) -> Mat<S> {
        let d: Vec<S> = self.diagonal().into_iter().map(S::from_rat).collect();
        Mat::diag(&d)
    }

    /// Read a diagonal matrix of determinant one.
    pub fn from_matrix(m: &QMat) -> Result<Self> {
        if !m.is_diagonal() {
            return Err(Error::ConstraintViolated("torus matrix is not diagonal".into()));
        }
        let n = m.size();
        let mut tau = Vec::with_capacity(n - 1);
        let mut acc = Rat::one();
        for i in 0..n - 1 {
            acc *= m.get(i, i);
            tau.push(acc.clone());
        }
        if (&acc * m.get(n - 1, n - 1)) != Rat::one() {
            return Err(Error::ConstraintViolated("torus matrix has determinant != 1".into()));
        }
        TorusElt::new(tau)
    }

    pub fn mul(&self, o: &Self) -> Self {
        TorusElt { tau: self.tau.iter().zip(&o.tau).map(|(a, b)| a * b).collect() }
    }

    pub fn inv(&self) -> Self {
        TorusElt { tau: self.tau.iter().map(|a| a.recip()).collect() }
    }

    pub fn pow(&self, k: i64) -> Self {
        TorusElt { tau: self.tau.iter().map(|a| a.powi(k).expect("nonzero")).collect() }
    }

    /// The character value `t^lambda` for a weight in fundamental-weight coordinates.
    pub fn character(&self, lambda: &[i64]) -> Rat {
        let mut acc = Rat::one();
        for (t, &l) in self.tau.iter().zip(lambda) {
            if l != 0 {
                acc *= t.powi(l).expect("nonzero");
            }
        }
        acc
    }

    /// `t^w = w^{-1} t w`, via `(t^w)^lambda = t^{w lambda}`.
    pub fn conj(&self, w: &WeylElt) -> Self {
        let r = self.rank();
        let tau = (0..r)
            .map(|k| {
                let mut om = vec![0i64; r];
                om[k] = 1;
                self.character(&act_on_weight(w, &om))
            })
            .collect();
        TorusElt { tau }
    }

    /// The coroot `alpha_i^vee(z)`: diagonal with z at i and 1/z at i+1.
    pub fn coroot(rank: usize, i: usize, z: &Rat) -> Self {
        let mut tau = vec![Rat::one(); rank];
        tau[i] = z.clone();
        TorusElt { tau }
    }
}

/// Torus conjugation `t^w`.
pub fn torus_conjugate(t: &TorusElt, w: &WeylElt) -> TorusElt {
    t.conj(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::scalar::{frac, rat};
    use crate::groupcore::wbar;

    #[test]
    fn diag_roundtrip() {
        let t = TorusElt::new(vec![frac(2, 3), rat(-5), frac(7, 2)]).unwrap();
        let m = t.to_matrix();
        assert_eq!(m.det(), rat(1));
        assert_eq!(TorusElt::from_matrix(&m).unwrap(), t);
    }

    #[test]
    fn conj_a1() {
        let t = TorusElt::new(vec![rat(3)]).unwrap();
        let s = WeylElt::simple(1, 0);
        assert_eq!(t.conj(&s).tau, vec![frac(1, 3)]);
    }

    #[test]
    fn conj_matches_matrices() {
        let t = TorusElt::new(vec![frac(2, 3), rat(-5), frac(7, 2)]).unwrap();
        for w in WeylElt::all(3) {
            let wb: QMat = wbar(&w);
            let lhs = wb.inverse().unwrap().mul(&t.to_matrix()).mul(&wb);
            assert_eq!(lhs, t.conj(&w).to_matrix(), "w = {w:?}");
        }
    }
}
