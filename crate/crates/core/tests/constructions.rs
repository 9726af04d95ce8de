mod common;

use std::collections::BTreeSet;

use chiro_core::compose::{chi1, chi_k, convex, double_circle, double_circle_points, join, koch, meet, triangle, twist};
use chiro_core::double_circle::{dc_count, qk_sequence};
use chiro_core::oracle::{brute_p, brute_q, count_triangulations, enumerate_triangulations, enumerate_weak, OracleConfig, WeakGround};
use chiro_core::poly::calc::{join_p, meet_p, q_from_p, try_split};
use chiro_core::{Chirotope, EdgeSet, Point, PointSet, RootedChirotope, Sign, UnivarPoly};
use common::{isomorphism, random_rooted};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn up(terms: &[(u32, i64)]) -> UnivarPoly {
    UnivarPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
}

fn cfg() -> OracleConfig {
    OracleConfig::default()
}

/// `DC_{k+2}` with the inner points of the two hull edges at outer label 0
/// removed, rooted at that outer point.
fn dc_minus_two(k: usize) -> RootedChirotope {
    let m = k + 2;
    let chi = double_circle(m).unwrap().into_parts().0;
    let drop = [m, 2 * m - 1];
    let keep: Vec<usize> = (0..2 * m).filter(|l| !drop.contains(l)).collect();
    let (sub, _) = chi.restrict(&keep).unwrap();
    RootedChirotope::new(sub, 0).unwrap()
}

#[test]
fn chi_k_matches_double_circle_with_two_points_removed() {
    for k in 1..=3 {
        let built = chi_k(k).unwrap();
        let target = dc_minus_two(k);
        assert!(
            isomorphism(built.chi(), built.root(), target.chi(), target.root()).is_some(),
            "k = {k}"
        );
    }
}

#[test]
fn chi1_matches_a_point_fixture() {
    let pts = PointSet::new(vec![
        Point::from_ints(0, 0),
        Point::from_ints(4, 0),
        Point::from_ints(2, 3),
        Point::from_ints(2, 1),
    ])
    .unwrap();
    let fixture = pts.chirotope().unwrap();
    let c = chi1();
    assert!(isomorphism(c.chi(), c.root(), &fixture, 0).is_some());
}

#[test]
fn joined_tables_count_like_their_realizations() {
    // triangle ∨ triangle is a convex quadrilateral
    let quad = join(&triangle(), &triangle()).unwrap().0;
    let square = PointSet::new(vec![
        Point::from_ints(0, 0),
        Point::from_ints(3, 0),
        Point::from_ints(3, 3),
        Point::from_ints(0, 3),
    ])
    .unwrap()
    .chirotope()
    .unwrap();
    let perm = isomorphism(quad.chi(), quad.root(), &square, 0).unwrap();
    assert_eq!(
        brute_q(&quad, &cfg()).unwrap(),
        brute_q(&RootedChirotope::new(square, perm[quad.root()]).unwrap(), &cfg()).unwrap()
    );
    assert_eq!(brute_q(&quad, &cfg()).unwrap(), up(&[(2, 1), (3, 1)]));

    // χ_1 ∨ χ_1 against the double-circle points realizing it
    let chi2 = join(&chi1(), &chi1()).unwrap().0;
    let real = dc_minus_two(2);
    assert_eq!(brute_q(&chi2, &cfg()).unwrap(), brute_q(&real, &cfg()).unwrap());
    assert_eq!(
        count_triangulations(chi2.chi(), &cfg()).unwrap(),
        count_triangulations(real.chi(), &cfg()).unwrap()
    );
}

#[test]
fn join_is_consistent_at_the_merged_element() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let a = random_rooted(5, &mut rng);
        let b = random_rooted(6, &mut rng);
        let (j, map) = join(&a, &b).unwrap();
        let (u1p, u1m) = a.hull_neighbors().unwrap();
        let (u2p, _) = b.hull_neighbors().unwrap();
        let _ = u1p;
        for x in (0..a.len()).filter(|&x| x != a.root() && x != u1m) {
            assert_eq!(a.chi().sign_unchecked(x, u1m, a.root()), Sign::Pos);
            for z in (0..b.len()).filter(|&z| z != b.root() && z != u2p) {
                assert_eq!(b.chi().sign_unchecked(b.root(), u2p, z), Sign::Pos);
                assert_eq!(
                    j.chi().sign_unchecked(map.from_left[x], map.x0, map.from_right[z]),
                    Sign::Pos
                );
            }
        }
    }
}

#[test]
fn generator_triangulation_counts() {
    let catalan = [1u64, 2, 5, 14, 42, 132];
    for (n, &c) in (3..=8).zip(&catalan) {
        assert_eq!(count_triangulations(convex(n).unwrap().chi(), &cfg()).unwrap(), c);
    }
    assert_eq!(brute_q(&chi_k(1).unwrap(), &cfg()).unwrap(), up(&[(3, 1)]));
    assert_eq!(brute_q(&chi_k(2).unwrap(), &cfg()).unwrap(), up(&[(2, 2), (3, 2), (4, 1), (5, 1)]));
    assert_eq!(brute_q(&chi_k(3).unwrap(), &cfg()).unwrap().eval_at_one(), BigInt::from(43));
    let table = qk_sequence(3).unwrap();
    assert_eq!(&brute_q(&chi_k(3).unwrap(), &cfg()).unwrap(), table.q(3));
}

#[test]
fn koch_three_without_root_has_424_triangulations() {
    let k3 = koch(3).unwrap();
    assert_eq!(k3.len(), 10);
    let (rest, _) = k3.without_root().unwrap();
    assert_eq!(count_triangulations(&rest, &cfg()).unwrap(), 424);
}

#[test]
fn koch_levels_are_chains_with_split_p() {
    for i in 0..=3 {
        let k = koch(i).unwrap();
        assert!(k.chi().check_axioms().is_empty());
        let p = brute_p(&k, &OracleConfig::with_limit(15)).unwrap();
        assert!(try_split(&p).is_some(), "level {i}");
    }
}

#[test]
fn double_circle_counts_match_brute_force() {
    let table = qk_sequence(4).unwrap();
    for k in 3..=5 {
        let chi = double_circle_points(k).unwrap().chirotope().unwrap();
        let brute = count_triangulations(&chi, &cfg()).unwrap();
        assert_eq!(BigInt::from(brute), dc_count(&table, k).unwrap(), "k = {k}");
    }
}

#[test]
fn triangulations_have_euler_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 4..=9 {
        let ps = chiro_core::chirotope::points::random_general_position(n, 50, &mut rng);
        let h = ps.hull().len();
        let chi = ps.chirotope().unwrap();
        let mut sizes = BTreeSet::new();
        let mut count = 0u64;
        enumerate_triangulations(&chi, &cfg(), |t| {
            sizes.insert(t.len());
            count += 1;
        })
        .unwrap();
        assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![3 * n - h - 3]);
        assert!((count as f64) <= 30f64.powi(n as i32));
    }
}

fn weak_extensions(rc: &RootedChirotope) -> BTreeSet<EdgeSet> {
    let ground = WeakGround::new(rc);
    let v = ground.v();
    let mut out = BTreeSet::new();
    enumerate_triangulations(rc.chi(), &cfg(), |t| {
        let tri = t.to_edge_set();
        let mut segs: Vec<(usize, usize)> = tri.segments().to_vec();
        for x in (0..rc.len()).filter(|&x| x != rc.root()) {
            if tri.segments().iter().all(|&s| !ground.crosses(s, (x, v))) {
                segs.push((x, v));
            }
        }
        segs.sort();
        out.insert(segs);
    })
    .unwrap();
    let mut sets = BTreeSet::new();
    enumerate_weak(rc, &cfg(), |t| {
        let e = t.to_edge_set();
        if out.contains(e.segments()) {
            sets.insert(e);
        }
    })
    .unwrap();
    assert_eq!(sets.len(), out.len(), "every extension is a weak triangulation");
    sets
}

#[test]
fn triangulations_extend_to_minimal_weak_triangulations() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = vec![convex(5).unwrap(), chi1(), chi_k(2).unwrap()];
    cases.extend((0..6).map(|i| random_rooted(5 + i % 3, &mut rng)));
    for rc in cases {
        let ext = weak_extensions(&rc);
        let v = rc.len();
        let mut all = Vec::new();
        enumerate_weak(&rc, &cfg(), |t| all.push(t.to_edge_set())).unwrap();
        let sizes: BTreeSet<usize> = all.iter().map(EdgeSet::len).collect();
        assert_eq!(sizes.len(), 1, "weak triangulations share one size");
        let m = all.iter().map(|e| e.degree(v)).min().unwrap();
        let minimal: BTreeSet<EdgeSet> = all.into_iter().filter(|e| e.degree(v) == m).collect();
        assert_eq!(minimal, ext);
        assert_eq!(q_from_p(&brute_p(&rc, &cfg()).unwrap()).unwrap(), brute_q(&rc, &cfg()).unwrap());
    }
}

#[test]
fn twist_swaps_p_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases = vec![chi1(), convex(5).unwrap()];
    cases.extend((0..5).map(|_| random_rooted(7, &mut rng)));
    for rc in cases {
        assert_eq!(
            brute_p(&twist(&rc), &cfg()).unwrap(),
            brute_p(&rc, &cfg()).unwrap().swap_vars()
        );
    }
}

#[test]
fn recursion_matches_oracle_on_named_fixtures() {
    let c = cfg();
    let tri = brute_p(&triangle(), &c).unwrap();
    let x1 = brute_p(&chi1(), &c).unwrap();
    let sq = brute_p(&convex(4).unwrap(), &c).unwrap();
    let j = join(&triangle(), &chi1()).unwrap().0;
    assert_eq!(join_p(&tri, &x1).unwrap(), brute_p(&j, &c).unwrap());
    let m = meet(&triangle(), &convex(4).unwrap()).unwrap().0;
    assert_eq!(meet_p(&tri, &sq).unwrap(), brute_p(&m, &c).unwrap());
    assert_eq!(
        join_p(&x1, &x1).unwrap(),
        brute_p(&chi_k(2).unwrap(), &c).unwrap()
    );
}

#[test]
fn flipped_orientation_has_the_same_p() {
    let rc = chi_k(2).unwrap();
    assert_eq!(brute_p(&rc.flip(), &cfg()).unwrap(), brute_p(&rc, &cfg()).unwrap());
    assert_ne!(rc.flip().chi(), rc.chi());
    let _: &Chirotope = rc.chi();
}
