//! Property tests for structural invariants, each driven by a proptest seed
//! fed to the library sampler.

use flagoid::cells::{bs_coords, bs_param, canonicalize_fn, invert_lusztig, lusztig_chart, tits_distance, BSChart};
use flagoid::groupcore::{bruhat_cell, factor_neg, factor_pos, gauss, in_b, in_c_cell, in_bminus, wbar, QMat};
use flagoid::groupoids::{from_c2n, j_inv, j_map, random_arrow, random_composable, to_c2n, GammaArrow};
use flagoid::rootdata::WeylElt;
use flagoid::sample::Sampler;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn weyl_group_laws(seed in any::<u64>(), rank in 1usize..5) {
        let mut s = Sampler::new(seed);
        let (u, v) = (s.weyl(rank), s.weyl(rank));
        let uv = u.mul(&v).unwrap();
        prop_assert!(uv.length() <= u.length() + v.length());
        prop_assert_eq!(u.inverse().length(), u.length());
        prop_assert_eq!(u.length(), u.inversions());
        prop_assert!(u.mul(&u.inverse()).unwrap().is_identity());
        prop_assert_eq!(WeylElt::from_word(rank, u.word()).unwrap(), u.clone());
        prop_assert_eq!(u.word().len(), u.length());
        prop_assert!(u.length() <= WeylElt::longest(rank).length());
    }

    #[test]
    fn gauss_reassembles(seed in any::<u64>(), size in 2usize..5) {
        let mut s = Sampler::new(seed);
        // build n_- t n_+ from known factors; the factorization is unique
        let l = s.unipotent_lower(size);
        let t = s.torus(size - 1).to_matrix();
        let u = s.unipotent_upper(size);
        let g = l.mul(&t).mul(&u);
        let f = gauss(&g).unwrap();
        prop_assert_eq!(&f.l, &l);
        prop_assert_eq!(&f.u, &u);
        prop_assert_eq!(f.torus_matrix(), t);
        prop_assert_eq!(f.lower_part().mul(&f.u), g);
    }

    #[test]
    fn bruhat_factorizations(seed in any::<u64>(), rank in 1usize..4) {
        let mut s = Sampler::new(seed);
        let w = s.weyl(rank);
        let g = s.in_cell(&w);
        prop_assert_eq!(bruhat_cell(&g), w.clone());
        let (w2, c, b) = factor_pos(&g).unwrap();
        prop_assert_eq!(&w2, &w);
        prop_assert!(in_b(&b));
        prop_assert_eq!(c.mul(&b), g.clone());
        prop_assert!(in_c_cell(&c, &wbar(&w)));
        let (bm, _, c2) = factor_neg(&g).unwrap();
        prop_assert!(in_bminus(&bm));
        prop_assert_eq!(bm.mul(&c2), g);
    }

    #[test]
    fn flags_ignore_the_borel_gauge(seed in any::<u64>(), rank in 1usize..3, n in 1usize..4) {
        let mut s = Sampler::new(seed);
        let gs = s.tuple(rank + 1, n);
        let p = canonicalize_fn(&gs);
        let mut moved: Vec<QMat> = Vec::new();
        let mut prev: Option<QMat> = None;
        for g in &gs {
            let b = s.borel(rank + 1);
            let left = match &prev {
                Some(bi) => bi.mul(g),
                None => g.clone(),
            };
            moved.push(left.mul(&b));
            prev = Some(b.inverse().unwrap());
        }
        prop_assert_eq!(canonicalize_fn(&moved), p.clone());
        prop_assert_eq!(canonicalize_fn(&p.c), p.clone());
        prop_assert_eq!(p.product().size(), rank + 1);
    }

    #[test]
    fn tits_distance_of_consecutive_flags(seed in any::<u64>(), rank in 1usize..4) {
        let mut s = Sampler::new(seed);
        let w = s.weyl(rank);
        let g = s.in_cell(&w);
        let p = canonicalize_fn(&[g]);
        prop_assert_eq!(&p.w[0], &w);
        let e = canonicalize_fn(&[QMat::identity(rank + 1)]);
        prop_assert_eq!(tits_distance(&e, &p), w);
    }

    #[test]
    fn bott_samelson_round_trip(seed in any::<u64>(), rank in 1usize..4, n in 1usize..3) {
        let mut s = Sampler::new(seed);
        let ws: Vec<WeylElt> = (0..n).map(|_| s.weyl(rank)).collect();
        let chart = BSChart::new(&ws);
        let z = s.rats(chart.len());
        let p = bs_param(&chart, &z);
        prop_assert_eq!(&p.w, &ws);
        prop_assert_eq!(bs_coords(&p, &chart).unwrap(), z);
    }

    #[test]
    fn lusztig_round_trip(seed in any::<u64>(), rank in 1usize..4, n in 1usize..3) {
        let mut s = Sampler::new(seed);
        let ws: Vec<WeylElt> = (0..n).map(|_| s.weyl(rank)).collect();
        let chart = BSChart::new(&ws);
        let eps = s.nonzero_rats(chart.len());
        let p = lusztig_chart(&chart, &eps).unwrap();
        prop_assert_eq!(invert_lusztig(&chart, &p).unwrap(), eps);
    }

    #[test]
    fn groupoid_laws(seed in any::<u64>(), rank in 1usize..3, n in 1usize..3) {
        let mut s = Sampler::new(seed);
        let a = random_arrow(&mut s, rank + 1, n);
        let b = random_composable(&mut s, &a);
        let c = random_composable(&mut s, &b);
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.source(), a.source());
        prop_assert_eq!(ab.target(), b.target());
        prop_assert_eq!(ab.multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
        prop_assert_eq!(GammaArrow::unit(&a.source()).multiply(&a).unwrap(), a.clone());
        prop_assert_eq!(a.multiply(&GammaArrow::unit(&a.target())).unwrap(), a.clone());
        prop_assert_eq!(a.multiply(&a.inverse()).unwrap(), GammaArrow::unit(&a.source()));
        prop_assert_eq!(a.inverse().inverse(), a.clone());
    }

    #[test]
    fn models_are_isomorphic(seed in any::<u64>(), rank in 1usize..3, n in 1usize..3) {
        let mut s = Sampler::new(seed);
        let a = random_arrow(&mut s, rank + 1, n);
        let b = random_composable(&mut s, &a);
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(from_c2n(&to_c2n(&a)).unwrap(), a.clone());
        prop_assert_eq!(to_c2n(&a).multiply(&to_c2n(&b)).unwrap(), to_c2n(&ab));
        prop_assert_eq!(j_inv(&j_map(&a)).unwrap(), a.clone());
        prop_assert_eq!(j_map(&a).multiply(&j_map(&b)).unwrap(), j_map(&ab));
        prop_assert_eq!(j_map(&a.inverse()), j_map(&a).inverse().unwrap());
    }
}
