//! Encoding then decoding any sampled value gives it back.

use flagoid::cells::FnPoint;
use flagoid::groupoids::{self as gp, j_map, to_c2n, Gdbu, Reps};
use flagoid::rootdata::WeylElt;
use flagoid::sample::Sampler;
use flagoid_cli::json;
use flagoid_cli::{sample_pair, Arrow, Model};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 40, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn matrices_and_rationals(seed in any::<u64>(), size in 2usize..5) {
        let mut s = Sampler::new(seed);
        let m = s.group(size);
        prop_assert_eq!(json::parse_matrix(&json::matrix(&m)).unwrap(), m);
        let t = s.torus(size - 1);
        prop_assert_eq!(json::parse_torus(&json::torus(&t)).unwrap(), t);
    }

    #[test]
    fn weyl_words(seed in any::<u64>(), rank in 1usize..4) {
        let mut s = Sampler::new(seed);
        let w = s.weyl(rank);
        prop_assert_eq!(json::parse_weyl(rank, &json::weyl(&w)).unwrap(), w);
    }

    #[test]
    fn arrows_in_every_model(seed in any::<u64>(), rank in 1usize..3, n in 1usize..3) {
        let mut s = Sampler::new(seed);
        let g = gp::random_arrow(&mut s, rank + 1, n);
        let p: FnPoint = g.source();
        prop_assert_eq!(json::parse_fn_point(&json::fn_point(&p)).unwrap(), p);
        prop_assert_eq!(json::parse_gamma(&json::gamma(&g)).unwrap(), g.clone());
        let c = to_c2n(&g);
        prop_assert_eq!(json::parse_c2n(&json::c2n(&c)).unwrap(), c);
        let f = j_map(&g);
        prop_assert_eq!(json::parse_fot(&json::fot(&f)).unwrap(), f);
    }

    #[test]
    fn gdbu_arrows(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let u = vec![WeylElt::simple(2, 0), WeylElt::simple(2, 1)];
        let (a, _) = sample_pair(&mut s, Model::Gdbu, 2, 2, &u).unwrap();
        let v = a.to_json();
        prop_assert_eq!(Arrow::parse(&v).unwrap(), a.clone());
        if let Arrow::Gdbu(u2, x) = &a {
            prop_assert_eq!(&u2[..], &u[..]);
            prop_assert!(Gdbu::new(Reps::bar(&u)).check(x).is_ok());
        }
    }
}
