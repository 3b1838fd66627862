//! Library results checked against slow, independent reference computations.

mod common;

use common::*;
use hamlat_core::decomposition::{enumerate_decompositions, AdmissibilityProfile, SearchBudget};
use hamlat_core::reduced_space::{min_area_exceptional, TauClass};
use hamlat_core::snf::smith_normal_form;
use hamlat_core::toric::resolve_cone;
use hamlat_core::weyl::enumerate_exceptional;
use hamlat_core::{frac, q, DivisorClass};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

#[test]
fn exceptional_enumeration_matches_slack_search() {
    for k in 1..=8 {
        assert_eq!(enumerate_exceptional(k).unwrap(), exceptional_slack(k), "k = {k}");
    }
}

#[test]
fn listed_orbit_types_occur() {
    let types: Vec<_> = enumerate_exceptional(8).unwrap().iter().map(orbit_type).collect();
    for t in listed_orbit_types() {
        assert!(types.contains(&t), "{t:?}");
    }
    let seven: Vec<_> = enumerate_exceptional(7).unwrap().iter().map(orbit_type).collect();
    for t in &listed_orbit_types()[..4] {
        assert!(seven.contains(t), "{t:?}");
    }
    assert!(seven.iter().all(|t| t.0 <= 3));
}

#[test]
fn minimal_area_values() {
    // frozen from an independent minimisation over the slack-search list
    let eps = frac(1, 100);
    for k in [7usize, 8] {
        let tau = TauClass::new(k, frac(1, 2), eps).unwrap();
        let classes = exceptional_slack(k);
        let min = classes.iter().map(|c| tau.area(c)).min().unwrap();
        let argmin: Vec<_> = classes.iter().filter(|c| tau.area(c) == min).cloned().collect();
        let lib = min_area_exceptional(k, frac(1, 2), eps).unwrap();
        assert_eq!(lib.minimum, min);
        assert_eq!(lib.argmin, argmin);
        assert_eq!(argmin, vec![DivisorClass::exceptional(k, k).unwrap()]);
    }
    let at_one = min_area_exceptional(7, q(1), eps).unwrap();
    assert_eq!(at_one.minimum, frac(24, 25));
    assert_eq!(
        at_one.argmin.iter().map(ToString::to_string).collect::<Vec<_>>(),
        vec!["L-E1-E4", "L-E4-E5", "2L-E1-E2-E4-E5-E6"]
    );
}

#[test]
fn smith_form_matches_determinantal_divisors() {
    let mut runner = TestRunner::new(Config { cases: 300, ..Config::default() });
    let matrix = (2usize..=3, 2usize..=3).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i128..=9, c), r)
    });
    runner
        .run(&matrix, |a| {
            let snf = smith_normal_form(&a).unwrap();
            prop_assert_eq!(snf.diagonal.clone(), invariant_factors_by_minors(&a));
            Ok(())
        })
        .unwrap();
}

#[test]
fn cone_resolution_matches_hull() {
    // every cone of determinant m <= 12 is equivalent to one spanned by
    // (1, 0) and (-p, m) with 0 <= p < m, gcd(p, m) = 1
    for m in 1..=12i128 {
        for p in 0..m {
            if num_integer::Integer::gcd(&p, &m) != 1 {
                continue;
            }
            let (u, v) = ([1, 0], [-p, m]);
            assert_eq!(resolve_cone(u, v), hull_rays(u, v), "m = {m}, p = {p}");
        }
    }
}

#[test]
fn decompositions_match_naive_search_on_five_points() {
    let mut profile = AdmissibilityProfile::base(5);
    profile.excluded = vec![DivisorClass::from_tuple(1, &[1, 0, 0, 1, 1])];
    let naive = NaiveDecomposer::new(&profile, 3);
    let mut checked = 0;
    for d in 0..=3i128 {
        let mut m = [-1i128; 5];
        loop {
            let target = DivisorClass::from_tuple(d, &m);
            let lib = enumerate_decompositions(&target, &profile, SearchBudget::default()).unwrap();
            let lib: Vec<Multiset> = lib.iter().map(as_multiset).collect();
            assert_eq!(show(&lib), show(&naive.decompose(&target)), "target {target}");
            checked += 1;
            if !step(&mut m, -1, 2) {
                break;
            }
        }
    }
    assert_eq!(checked, 4 * 4usize.pow(5));
}

#[test]
fn decompositions_match_naive_search_on_eight_points() {
    let naive2 = NaiveDecomposer::new(&AdmissibilityProfile::step2(), 3);
    let mut runner = TestRunner::new(Config { cases: 200, ..Config::default() });
    let target = (0i128..=3, prop::collection::vec(-1i128..=2, 8));
    runner
        .run(&target, |(d, m)| {
            let t = DivisorClass::from_tuple(d, &m);
            let lib = enumerate_decompositions(&t, &AdmissibilityProfile::step2(), SearchBudget::default()).unwrap();
            let lib: Vec<Multiset> = lib.iter().map(as_multiset).collect();
            prop_assert_eq!(show(&lib), show(&naive2.decompose(&t)), "target {}", t);
            Ok(())
        })
        .unwrap();
}

fn step(m: &mut [i128], lo: i128, hi: i128) -> bool {
    for x in m.iter_mut() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}
