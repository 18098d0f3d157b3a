//! Trapping set search against the unpruned brute-force oracle.
//!
//! The b limits keep every qualifying set connected: for column weight 4 a
//! disconnected 5-set has b >= 8 and a disconnected 6- or 7-set has b >= 4
//! (one isolated variable plus a b = 0 component), so the oracle, which
//! does not require connectivity, is directly comparable.

use etsbench::ets::{b_lower_bound, expand_orbits};
use etsbench::{
    are_isomorphic, brute_force_ets_oracle, check_profile, classify_subset, find_ets, lift, search, ConstraintProfile,
    EtsQuery, EtsStatus, ExponentMatrix, Fixture, ProfileName, SearchConfig, TannerGraph, VnGraph,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sets_from_search(g: &TannerGraph, a: usize, b_max: usize, girth: usize) -> Vec<Vec<u32>> {
    let res = find_ets(g, &EtsQuery::new(a, b_max).sizes(a, a).girth_context(girth));
    assert_ne!(res.status, EtsStatus::Inconclusive);
    assert!(res.anomalies.is_empty(), "{:?}", res.anomalies);
    let mut sets: Vec<Vec<u32>> = expand_orbits(g, &res.records).into_iter().map(|r| r.vars).collect();
    sets.sort();
    sets
}

fn sets_from_oracle(g: &TannerGraph, a: usize, b_max: usize) -> Vec<Vec<u32>> {
    let mut sets: Vec<Vec<u32>> = brute_force_ets_oracle(g, a, b_max).unwrap().into_iter().map(|r| r.vars).collect();
    sets.sort();
    sets
}

fn assert_agree(g: &TannerGraph, a: usize, b_max: usize, girth: usize) -> usize {
    let found = sets_from_search(g, a, b_max, girth);
    let oracle = sets_from_oracle(g, a, b_max);
    assert_eq!(found, oracle, "a={a} b_max={b_max}");
    found.len()
}

/// A girth-6 matrix at N <= 13 that violates the ETS-free row constraints.
fn violating_matrix() -> ExponentMatrix {
    let cfg = SearchConfig::new(5, ConstraintProfile::named(ProfileName::Girth6EtsFree), 2, 13);
    let rejected = search(&cfg).unwrap().rejected.expect("a rejected candidate is recorded");
    let b = rejected.matrix;
    assert!(check_profile(&b, &ConstraintProfile::named(ProfileName::Girth6Basic)).pass);
    assert!(!check_profile(&b, &ConstraintProfile::named(ProfileName::Girth6EtsFree)).pass);
    b
}

#[test]
fn fixture_agrees_with_oracle() {
    let g = lift(&Fixture::G6N5.matrix());
    assert_eq!(assert_agree(&g, 5, 4, 6), 0);
    assert_eq!(assert_agree(&g, 6, 2, 6), 0);
    // larger b, still connected-only
    assert!(assert_agree(&g, 5, 7, 6) > 0);
    assert_agree(&g, 6, 3, 6);
}

#[test]
fn rejected_candidate_agrees_with_oracle() {
    let g = lift(&violating_matrix());
    assert_agree(&g, 5, 4, 6);
    assert_agree(&g, 6, 2, 6);
    assert_agree(&g, 5, 7, 6);
    assert_agree(&g, 6, 3, 6);
}

/// Girth-6 matrix with 6-cycles on rows {1,2,3} and {1,2,4}, found by a
/// scan over random matrices at N = 13.
fn matrix_with_small_sets() -> ExponentMatrix {
    ExponentMatrix::from_rows(13, &[[0, 0, 0, 0, 0], [0, 7, 6, 8, 1], [0, 3, 9, 6, 2], [0, 4, 7, 12, 9]]).unwrap()
}

#[test]
fn small_sets_found_and_agree_with_oracle() {
    let b = matrix_with_small_sets();
    let g = lift(&b);
    assert!(assert_agree(&g, 5, 4, 6) > 0);
    assert!(assert_agree(&g, 6, 2, 6) > 0);
    let res = find_ets(&g, &EtsQuery::new(6, 4).sizes(5, 6));
    let fives = etsbench::enumerate_vn_graphs(5, 4, 4, 6);
    let sixes = etsbench::enumerate_vn_graphs(6, 2, 4, 6);
    for r in res.with_params(5, 4) {
        let vn = r.vn_graph.as_ref().unwrap();
        assert!(fives.iter().any(|h| are_isomorphic(vn, h)));
    }
    for r in res.with_params(6, 2) {
        let vn = r.vn_graph.as_ref().unwrap();
        assert!(sixes.iter().any(|h| are_isomorphic(vn, h)));
    }
}

#[test]
fn size_seven_agrees_with_oracle() {
    let cfg = SearchConfig::new(4, ConstraintProfile::named(ProfileName::Girth6Basic), 10, 10);
    let b = search(&cfg).unwrap().matrix.unwrap();
    assert_agree(&lift(&b), 7, 3, 6);
}

/// Girth-8 matrix with a (7,4) set, found by a scan over random matrices.
fn k34_matrix() -> ExponentMatrix {
    ExponentMatrix::from_rows(16, &[[0, 0, 0], [0, 7, 15], [0, 6, 10], [0, 13, 9]]).unwrap()
}

#[test]
fn seven_four_set_is_k34() {
    let b = k34_matrix();
    let g = lift(&b);
    assert!(etsbench::bfs_girth(&g, 12).is_at_least(8));
    let n = assert_agree(&g, 7, 4, 8);
    assert!(n > 0);
    let res = find_ets(&g, &EtsQuery::new(7, 4).sizes(7, 7).girth_context(8));
    assert_eq!(res.status, EtsStatus::Found);
    let k34 = VnGraph::complete_bipartite(3, 4).unwrap();
    for r in &res.records {
        let again = classify_subset(&g, &r.vars);
        assert_eq!((again.a, again.b, again.elementary), (7, 4, true));
        let vn = again.vn_graph.unwrap();
        assert!(vn.is_bipartite() && !vn.has_triangle());
        assert!(are_isomorphic(&vn, &k34));
    }
    // the profile that forbids these sets rejects the matrix
    assert!(!check_profile(&b, &ConstraintProfile::named(ProfileName::Girth8EtsFree)).pass);
}

#[test]
fn quasi_cyclic_shift_preserves_classification() {
    let g = lift(&Fixture::G6N6.matrix());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ids: Vec<u32> = (0..g.num_vars() as u32).collect();
    for _ in 0..200 {
        let a = rng.gen_range(1..=8);
        let set: Vec<u32> = ids.choose_multiple(&mut rng, a).copied().collect();
        let r = classify_subset(&g, &set);
        let shifted: Vec<u32> = set.iter().map(|&v| g.shift_var(v, 1)).collect();
        let s = classify_subset(&g, &shifted);
        assert_eq!((r.a, r.b, r.elementary), (s.a, s.b, s.elementary));
        match (r.vn_graph, s.vn_graph) {
            (Some(x), Some(y)) => assert!(are_isomorphic(&x, &y)),
            (None, None) => {}
            _ => panic!("VN graph extraction differs across a shift"),
        }
    }
}

/// Grows random connected sets and checks the pruning bounds against the
/// final b of every prefix.
#[test]
fn pruning_bounds_hold_on_random_growth() {
    for (f, pair_cap) in [(Fixture::G6N5, false), (Fixture::G8N5, true)] {
        let g = lift(&f.matrix());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let a = rng.gen_range(2..=8);
            let mut set = vec![rng.gen_range(0..g.num_vars() as u32)];
            while set.len() < a {
                let v = *set.choose(&mut rng).unwrap();
                let c = *g.checks_of(v).choose(&mut rng).unwrap();
                let w = *g.vars_of(c).choose(&mut rng).unwrap();
                if !set.contains(&w) {
                    set.push(w);
                }
            }
            let last = classify_subset(&g, &set);
            if !last.elementary {
                continue;
            }
            for s in 1..a {
                let prefix = classify_subset(&g, &set[..s]);
                let r = a - s;
                let cap = if pair_cap { r * r / 4 } else { r * (r - 1) / 2 };
                let bound = b_lower_bound(prefix.b, r, 4, cap);
                assert!(last.b as isize >= bound, "{set:?} prefix {s}");
                assert!(last.b as isize >= prefix.b as isize - 4 * r as isize);
            }
        }
    }
}
