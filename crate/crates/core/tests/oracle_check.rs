mod common;

use rand::seq::SliceRandom;
use rftfl::graph::{all_pairs_distances, generate_random_instance};
use rftfl::oracle::{
    exact_alpha_bb, exact_alpha_rftfl, exact_bb, exact_conc_alpha_bu, exact_conc_bu,
    exact_rftfl, exact_ufl, minimize_subsets, OracleError,
};
use rftfl::pipeline::transform_instance;
use rftfl::FacilitySet;

#[test]
fn optima_match_reference_enumeration() {
    for inst in common::corpus(20) {
        let n = inst.n();
        let d = all_pairs_distances(&inst);
        let fw = common::floyd_warshall(&inst);

        let ufl = exact_ufl(&inst, &d, n).unwrap();
        assert_eq!(ufl.best_cost, common::brute_min(n, |m| m != 0, |r| common::ufl(&inst, &fw, r)));
        assert_eq!(ufl.sets_examined, (1 << n) - 1);

        for alpha in 1..=3 {
            let got = exact_alpha_rftfl(&inst, &d, alpha).unwrap();
            let want = common::brute_min(
                n,
                |m| m.count_ones() as usize > alpha,
                |r| common::alpha_rftfl(&inst, &fw, r, alpha),
            );
            assert_eq!(got.best_cost, want, "alpha {alpha}");
        }
        assert_eq!(
            exact_rftfl(&inst, &d).unwrap().best_cost,
            exact_alpha_rftfl(&inst, &d, 1).unwrap().best_cost
        );

        let r1 = ufl.best_set;
        let bi = transform_instance(&inst, &d, &r1).unwrap();
        let w = bi.base.demands().to_vec();
        let z1: Vec<usize> = r1.iter().map(|v| v - 1).collect();
        let free = |m: u64| z1.iter().all(|&r| m >> r & 1 == 0);
        let facil = |r: &[usize]| r.iter().map(|&v| bi.base.opening_costs()[v]).sum::<f64>();

        let want = common::brute_min(n, free, |r2| facil(r2) + common::bu(&w, &fw, &z1, r2));
        assert_eq!(exact_conc_bu(&bi, &d).unwrap().best_cost, want);
        for alpha in 1..=2 {
            let want = common::brute_min(n, free, |r2| {
                facil(r2) + common::alpha_bu(&w, &fw, &z1, r2, alpha)
            });
            assert_eq!(exact_conc_alpha_bu(&bi, &d, alpha).unwrap().best_cost, want);
        }

        for m in [0.0, 5.0, 20.0, 80.0] {
            let bounded = |r2: &[usize], ok: bool| if ok { facil(r2) } else { f64::INFINITY };
            let want = common::brute_min(n, free, |r2| {
                bounded(r2, common::bu(&w, &fw, &z1, r2) <= m)
            });
            let got = exact_bb(&bi, &d, m).map(|o| o.best_cost);
            assert_eq!(got.unwrap_or(f64::INFINITY), want, "bb M={m}");
            let want = common::brute_min(n, free, |r2| {
                bounded(r2, common::light_alpha_bu(&w, &fw, &z1, r2, 2) <= m)
            });
            let got = exact_alpha_bb(&bi, &d, m, 2).map(|o| o.best_cost);
            assert_eq!(got.unwrap_or(f64::INFINITY), want, "alpha bb M={m}");
        }
    }
}

#[test]
fn optimum_is_label_invariant() {
    let mut rng = common::rng(17);
    for inst in common::corpus(15) {
        let mut perm: Vec<usize> = (1..=inst.n()).collect();
        perm.shuffle(&mut rng);
        let moved = inst.relabel(&perm).unwrap();
        let (d, dm) = (all_pairs_distances(&inst), all_pairs_distances(&moved));
        let a = exact_rftfl(&inst, &d).unwrap();
        let b = exact_rftfl(&moved, &dm).unwrap();
        assert_eq!(a.best_cost, b.best_cost);
        let a2 = exact_alpha_rftfl(&inst, &d, 2).unwrap();
        let b2 = exact_alpha_rftfl(&moved, &dm, 2).unwrap();
        assert_eq!(a2.best_cost, b2.best_cost);
    }
}

#[test]
fn ties_prefer_smaller_then_lexicographic_sets() {
    let universe = [1, 2, 3, 4];
    let res = minimize_subsets(&universe, |s| !s.is_empty(), |s| if s.len() <= 2 { 1.0 } else { 0.5 * s.len() as f64 }).unwrap();
    assert_eq!(res.best_set, FacilitySet::new([1]));
    let res = minimize_subsets(&universe, |s| s.len() == 2, |_| 3.0).unwrap();
    assert_eq!(res.best_set, FacilitySet::new([1, 2]));
    assert_eq!(res.sets_examined, 6);
}

#[test]
fn range_and_feasibility_errors() {
    let big = generate_random_instance(17, 0.2, 3, 3, 3, 1).unwrap();
    let d = all_pairs_distances(&big);
    assert!(matches!(exact_rftfl(&big, &d), Err(OracleError::OutOfRange(_))));
    let small = generate_random_instance(3, 0.5, 3, 3, 3, 1).unwrap();
    let d = all_pairs_distances(&small);
    assert!(matches!(exact_alpha_rftfl(&small, &d, 3), Err(OracleError::OutOfRange(_))));
    assert!(matches!(exact_alpha_rftfl(&small, &d, 4), Err(OracleError::OutOfRange(_))));
    assert!(matches!(
        minimize_subsets(&[1, 2], |_| true, |_| f64::INFINITY),
        Err(OracleError::Infeasible)
    ));
}
