mod common;

use proptest::prelude::*;
use rftfl::backup::multi::{
    algorithm_conc_alpha_bu, cost_alpha_bu, cost_light_alpha_bu, threshold_sweep,
    DEFAULT_CANDIDATE_CAP,
};
use rftfl::backup::single::{algorithm_bb, algorithm_conc_bu, candidate_values, cost_bu};
use rftfl::backup::BackupInstance;
use rftfl::graph::{all_pairs_distances, generate_random_instance};
use rftfl::pipeline::transform_instance;
use rftfl::{DistanceMatrix, FacilitySet};

/// Transformed instance with servers `r1` and an arbitrary extra set `r2`.
fn arb_backup() -> impl Strategy<Value = (BackupInstance, DistanceMatrix, FacilitySet)> {
    (3usize..9, 0.1f64..0.9, any::<u64>()).prop_flat_map(|(n, density, seed)| {
        let inst = generate_random_instance(n, density, 9, 9, 15, seed).unwrap();
        (Just(inst), 1u64..(1 << n), 0u64..(1 << n)).prop_map(|(inst, m1, m2)| {
            let d = all_pairs_distances(&inst);
            let r1 = FacilitySet::from_mask(m1);
            let r2 = FacilitySet::from_mask(m2).difference(&r1);
            let bi = transform_instance(&inst, &d, &r1).unwrap();
            (bi, d, r2)
        })
    })
}

fn zero(set: &FacilitySet) -> Vec<usize> {
    set.iter().map(|v| v - 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transform_relocates_demand(n in 3usize..9, seed in any::<u64>(), mask in 1u64..256) {
        let inst = generate_random_instance(n, 0.4, 9, 9, 15, seed).unwrap();
        let d = all_pairs_distances(&inst);
        let r1 = FacilitySet::from_mask(mask & ((1 << n) - 1));
        prop_assume!(!r1.is_empty());
        let bi = transform_instance(&inst, &d, &r1).unwrap();
        let fw = common::floyd_warshall(&inst);
        prop_assert_eq!(bi.base.demands(), &common::relocated_demand(&inst, &fw, &zero(&r1))[..]);
        prop_assert_eq!(bi.base.total_demand(), inst.total_demand());
        for v in inst.nodes() {
            let f = if r1.contains(v) { 0.0 } else { inst.opening_cost(v) };
            prop_assert_eq!(bi.base.opening_cost(v), f);
        }
    }

    #[test]
    fn backup_costs_match_reference((bi, d, r2) in arb_backup(), alpha in 1usize..4) {
        let fw = common::floyd_warshall(&bi.base);
        let w = bi.base.demands();
        let (z1, z2) = (zero(&bi.servers), zero(&r2));
        prop_assert_eq!(cost_bu(&bi, &d, &r2), common::bu(w, &fw, &z1, &z2));
        prop_assert_eq!(cost_alpha_bu(&bi, &d, &r2, alpha), common::alpha_bu(w, &fw, &z1, &z2, alpha));
        prop_assert_eq!(
            cost_light_alpha_bu(&bi, &d, &r2, alpha),
            common::light_alpha_bu(w, &fw, &z1, &z2, alpha)
        );
    }

    #[test]
    fn single_failure_costs_coincide((bi, d, r2) in arb_backup()) {
        let one = cost_bu(&bi, &d, &r2);
        prop_assert_eq!(cost_alpha_bu(&bi, &d, &r2, 1), one);
        prop_assert_eq!(cost_light_alpha_bu(&bi, &d, &r2, 1), one);
    }

    #[test]
    fn light_cost_never_exceeds_full_cost((bi, d, r2) in arb_backup(), alpha in 1usize..4) {
        let light = cost_light_alpha_bu(&bi, &d, &r2, alpha);
        let full = cost_alpha_bu(&bi, &d, &r2, alpha);
        prop_assert!(light <= full);
        prop_assert!(full <= alpha as f64 * light || light.is_infinite());
    }

    #[test]
    fn bb_opens_only_free_nodes((bi, d, _r2) in arb_backup()) {
        for m in candidate_values(&bi.base, &d) {
            let res = algorithm_bb(&bi, &d, m);
            prop_assert!(res.phases_disjoint());
            if let Some(r2) = res.opened {
                prop_assert!(r2.is_disjoint(&bi.servers));
                prop_assert_eq!(r2.len(), res.phases.len());
            }
        }
    }

    #[test]
    fn sweep_results_are_consistent((bi, d, _r2) in arb_backup()) {
        if let Some(s) = algorithm_conc_bu(&bi, &d) {
            prop_assert!(s.r2.is_disjoint(&bi.servers));
            prop_assert_eq!(s.cost, s.r2.opening_cost(&bi.base) + cost_bu(&bi, &d, &s.r2));
        }
        for alpha in 1..=2 {
            if let Some(s) = algorithm_conc_alpha_bu(&bi, &d, alpha, DEFAULT_CANDIDATE_CAP) {
                prop_assert!(!s.heuristic_sweep);
                prop_assert_eq!(s.cost, s.r2.opening_cost(&bi.base) + cost_alpha_bu(&bi, &d, &s.r2, alpha));
            }
        }
    }

    #[test]
    fn capped_sweep_keeps_singletons(k in 1usize..30, alpha in 1usize..4, cap in 1usize..60) {
        let values: Vec<f64> = (0..k).map(|i| (i * i) as f64).collect();
        let (sums, heuristic) = threshold_sweep(&values, alpha, cap);
        for v in &values {
            prop_assert!(sums.contains(v));
        }
        let mut dedup = sums.clone();
        dedup.sort_by(f64::total_cmp);
        dedup.dedup();
        prop_assert_eq!(dedup.len(), sums.len());
        if !heuristic {
            prop_assert!(sums.len() <= cap);
        }
    }
}
