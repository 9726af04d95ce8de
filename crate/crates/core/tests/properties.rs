mod common;

use chiro_core::compose::{join, meet, meet_via_twists, twist};
use chiro_core::oracle::{brute_p, brute_q, OracleConfig};
use chiro_core::poly::calc::{count_weak_join, join_p, join_q, meet_p, n_at_one, n_poly, q_from_p, ComposeKind};
use chiro_core::{parse_chi, write_chi, RootedChirotope};
use common::random_rooted;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, n1: usize, n2: usize) -> (RootedChirotope, RootedChirotope) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_rooted(n1, &mut rng), random_rooted(n2, &mut rng))
}

fn assert_rooted(rc: &RootedChirotope) {
    assert!(rc.chi().check_axioms().is_empty());
    assert!(rc.chi().is_extreme(rc.root()));
    rc.hull_neighbors().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compositions_stay_rooted_chirotopes(seed in any::<u64>(), n1 in 3usize..=9, n2 in 3usize..=9) {
        let (a, b) = pair(seed, n1, n2);
        let (j, jm) = join(&a, &b).unwrap();
        let (m, mm) = meet(&a, &b).unwrap();
        prop_assert_eq!(j.len(), n1 + n2 - 2);
        prop_assert_eq!(m.len(), n1 + n2 - 2);
        assert_rooted(&j);
        assert_rooted(&m);
        let t = twist(&a);
        prop_assert_eq!(t.len(), n1);
        assert_rooted(&t);
        prop_assert_eq!(twist(&t), a.clone());
        let (m2, mm2) = meet_via_twists(&a, &b).unwrap();
        prop_assert_eq!(m2, m);
        prop_assert_eq!(mm2, mm);

        // the label maps cover the result and merge exactly two pairs
        let mut hit = vec![0usize; j.len()];
        for &l in jm.from_left.iter().chain(&jm.from_right) {
            hit[l] += 1;
        }
        prop_assert!(hit.iter().all(|&h| h >= 1));
        prop_assert_eq!(hit[jm.x0], 2);
        prop_assert_eq!(hit[jm.new_root], 2);
        prop_assert_eq!(hit.iter().sum::<usize>(), n1 + n2);
    }

    #[test]
    fn twisted_hull_neighbours_swap(seed in any::<u64>(), n in 3usize..=9) {
        let (a, _) = pair(seed, n, 3);
        let (p, m) = a.hull_neighbors().unwrap();
        prop_assert_eq!(twist(&a).hull_neighbors().unwrap(), (m, p));
    }

    #[test]
    fn chi_text_round_trip(seed in any::<u64>(), n in 3usize..=10) {
        let (a, _) = pair(seed, n, 3);
        let text = write_chi(a.chi(), Some(a.root()));
        let (chi, root) = parse_chi(&text).unwrap();
        prop_assert_eq!(&chi, a.chi());
        prop_assert_eq!(root, Some(a.root()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recursions_match_the_oracle(seed in any::<u64>(), n1 in 4usize..=7, n2 in 4usize..=7) {
        let (a, b) = pair(seed, n1, n2);
        let cfg = OracleConfig::default();
        let (pa, pb) = (brute_p(&a, &cfg).unwrap(), brute_p(&b, &cfg).unwrap());
        let (j, _) = join(&a, &b).unwrap();
        let (m, _) = meet(&a, &b).unwrap();
        let pj = join_p(&pa, &pb).unwrap();
        let pm = meet_p(&pa, &pb).unwrap();
        prop_assert_eq!(&pj, &brute_p(&j, &cfg).unwrap());
        prop_assert_eq!(&pm, &brute_p(&m, &cfg).unwrap());
        prop_assert_eq!(count_weak_join(&pa, &pb, ComposeKind::Join).unwrap(), pj.eval_at_one());
        prop_assert_eq!(count_weak_join(&pa, &pb, ComposeKind::Meet).unwrap(), pm.eval_at_one());

        let (qa, qb) = (brute_q(&a, &cfg).unwrap(), brute_q(&b, &cfg).unwrap());
        prop_assert_eq!(&q_from_p(&pa).unwrap(), &qa);
        prop_assert_eq!(&join_q(&qa, &qb).unwrap(), &brute_q(&j, &cfg).unwrap());
        prop_assert_eq!(q_from_p(&pj).unwrap(), join_q(&q_from_p(&pa).unwrap(), &q_from_p(&pb).unwrap()).unwrap());
        prop_assert!(pj.terms().all(|((eu, ev), c)| eu >= 2 && ev >= 2 && c > &0.into()));
        prop_assert!(qa.min_exp().unwrap() >= 2);
    }
}

proptest! {
    #[test]
    fn n_is_symmetric_with_binomial_total(d1 in 2u32..=12, d2 in 2u32..=12) {
        let n = n_poly(d1, d2).unwrap();
        prop_assert_eq!(&n, &n_poly(d2, d1).unwrap());
        prop_assert_eq!(n.eval_at_one(), n_at_one(d1, d2));
        prop_assert_eq!(n.max_exp(), Some(d1 + d2 - 1));
    }
}
