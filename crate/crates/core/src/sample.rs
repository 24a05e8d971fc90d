//! Seeded generation of small rationals, group elements and cell points.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cells::{bs_param_reps, BSChart};
use crate::groupcore::{one_param, Mat, QMat, Rat, Sign, TorusElt};
use crate::rootdata::WeylElt;

/// Seeded source of bounded rationals and group elements.
pub struct Sampler {
    rng: ChaCha8Rng,
    /// bound on numerators and denominators
    pub bound: i64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bound: 6 }
    }

    pub fn with_bound(seed: u64, bound: i64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), bound: bound.max(1) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// `p/q` with `|p| <= bound`, `1 <= q <= bound`.
    pub fn rat(&mut self) -> Rat {
        let p = self.int(-self.bound, self.bound);
        let q = self.int(1, self.bound);
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let x = self.rat();
            if x != Rat::from_integer(0.into()) {
                return x;
            }
        }
    }

    pub fn rats(&mut self, k: usize) -> Vec<Rat> {
        (0..k).map(|_| self.rat()).collect()
    }

    pub fn nonzero_rats(&mut self, k: usize) -> Vec<Rat> {
        (0..k).map(|_| self.nonzero_rat()).collect()
    }

    pub fn torus(&mut self, rank: usize) -> TorusElt {
        TorusElt::new(self.nonzero_rats(rank)).expect("nonzero entries")
    }

    /// Unipotent upper triangular matrix with random entries above the diagonal.
    pub fn unipotent_upper(&mut self, n: usize) -> QMat {
        let mut m = QMat::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, self.rat());
            }
        }
        m
    }

    pub fn unipotent_lower(&mut self, n: usize) -> QMat {
        self.unipotent_upper(n).transpose()
    }

    pub fn borel(&mut self, n: usize) -> QMat {
        self.torus(n - 1).to_matrix().mul(&self.unipotent_upper(n))
    }

    pub fn borel_minus(&mut self, n: usize) -> QMat {
        self.unipotent_lower(n).mul(&self.torus(n - 1).to_matrix())
    }

    /// Product of random one-parameter elements and a torus element; lands
    /// in every Bruhat cell with positive probability.
    pub fn group(&mut self, n: usize) -> QMat {
        let r = n - 1;
        let mut g = self.torus(r).to_matrix();
        let len = r * n + 2;
        for _ in 0..len {
            let sign = if self.coin() { Sign::Pos } else { Sign::Neg };
            let i = self.index(r);
            let z = self.rat();
            g = g.mul(&one_param(n, sign, i, &z));
        }
        g
    }

    /// Generic element: `n_- t n_+` with all entries random.
    pub fn generic(&mut self, n: usize) -> QMat {
        let l = self.unipotent_lower(n);
        let t = self.torus(n - 1).to_matrix();
        let u = self.unipotent_upper(n);
        let w0 = crate::groupcore::wbar::<Rat>(&WeylElt::longest(n - 1));
        // mix in the longest element so the result is off the big cell sometimes
        if self.int(0, 3) == 0 {
            l.mul(&w0).mul(&t).mul(&u)
        } else {
            l.mul(&t).mul(&u)
        }
    }

    pub fn weyl(&mut self, rank: usize) -> WeylElt {
        let all = WeylElt::all(rank);
        all[self.index(all.len())].clone()
    }

    /// Random element of `B w B` as `c b` with `c` from Bott-Samelson coordinates.
    pub fn in_cell(&mut self, w: &WeylElt) -> QMat {
        let chart = BSChart::new(std::slice::from_ref(w));
        let z = self.rats(chart.len());
        let c = bs_param_reps(&chart, &z).pop().expect("one block");
        c.mul(&self.borel(w.rank() + 1))
    }

    /// Random element of `B_- v B_-`.
    pub fn in_cell_neg(&mut self, v: &WeylElt) -> QMat {
        let chart = BSChart::new(std::slice::from_ref(v));
        let z = self.rats(chart.len());
        let c = bs_param_reps(&chart, &z).pop().expect("one block");
        self.borel_minus(v.rank() + 1).mul(&c)
    }

    pub fn tuple(&mut self, n: usize, k: usize) -> Vec<QMat> {
        (0..k).map(|_| self.group(n)).collect()
    }

    pub fn choose<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.index(xs.len())]
    }
}

/// Product of matrices, treating an empty list as the identity of size n.
pub fn prod(ms: &[QMat], n: usize) -> QMat {
    Mat::product(ms, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::bruhat_cell;

    #[test]
    fn deterministic() {
        let a: Vec<Rat> = Sampler::new(3).rats(5);
        let b: Vec<Rat> = Sampler::new(3).rats(5);
        assert_eq!(a, b);
    }

    #[test]
    fn cell_samples_land_in_cell() {
        let mut s = Sampler::new(11);
        for w in WeylElt::all(2) {
            let g = s.in_cell(&w);
            assert_eq!(bruhat_cell(&g), w);
            assert_eq!(g.det(), Rat::from_integer(1.into()));
        }
    }
}
