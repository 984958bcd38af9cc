//! Single-failure concentrated backup: the threshold relaxation `A_bb` and
//! the 2-approximation that sweeps it over every candidate shipping cost.

use serde::Serialize;

use super::{pairwise_disjoint, BackupInstance, BackupSolution};
use crate::cost::{ship_cost, FacilitySet};
use crate::graph::{DistanceMatrix, Instance, NodeId};
use crate::par;

/// `max_{r ∈ R1} ω(r) d(r, R1 ∪ R2 \ {r})`.
pub fn cost_bu(bi: &BackupInstance, dist: &DistanceMatrix, r2: &FacilitySet) -> f64 {
    let all = bi.servers.union(r2);
    bi.servers
        .iter()
        .map(|r| {
            if all.len() < 2 {
                return f64::INFINITY;
            }
            ship_cost(bi.demand(r), dist.to_set(r, all.iter().filter(|&v| v != r)))
        })
        .fold(0.0, f64::max)
}

/// Distinct finite shipping costs `ω(u) d(u, v)`, ascending. Always holds 0.
pub fn candidate_values(inst: &Instance, dist: &DistanceMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = inst
        .nodes()
        .flat_map(|u| {
            let w = inst.demand(u);
            dist.row(u).iter().map(move |&d| ship_cost(w, d))
        })
        .filter(|x| x.is_finite())
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

/// One phase of `A_bb` that opened a facility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BbPhase {
    pub server: NodeId,
    pub opened: NodeId,
    /// `T = {v ≠ r : ω(r) d(v, r) ≤ M}` for this server.
    pub feasible: FacilitySet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BbResult {
    /// `None` when some server has no relaxed backup candidate at all.
    pub opened: Option<FacilitySet>,
    pub phases: Vec<BbPhase>,
}

impl BbResult {
    pub fn is_feasible(&self) -> bool {
        self.opened.is_some()
    }

    /// Whether the `T` sets of the opening phases are pairwise disjoint.
    pub fn phases_disjoint(&self) -> bool {
        let ts: Vec<&FacilitySet> = self.phases.iter().map(|p| &p.feasible).collect();
        pairwise_disjoint(&ts)
    }
}

/// Bounded backup relaxation. Servers are visited in ascending id order;
/// a server with no facility of `R1 ∪ R_alg` inside its `2M` ball gets the
/// cheapest node of that ball. The result has opening cost at most the
/// bounded optimum for `M` and backup cost at most `2M`.
pub fn algorithm_bb(bi: &BackupInstance, dist: &DistanceMatrix, m: f64) -> BbResult {
    let mut opened = FacilitySet::empty();
    let mut phases = Vec::new();
    for r in bi.servers.iter() {
        let relaxed = bi.within(dist, r, 2.0 * m);
        let covered = relaxed
            .iter()
            .any(|v| bi.servers.contains(v) || opened.contains(v));
        if covered {
            continue;
        }
        let Some(&q) = bi.cheapest(&relaxed, 1).first() else {
            return BbResult {
                opened: None,
                phases,
            };
        };
        opened = opened.union(&FacilitySet::new([q]));
        phases.push(BbPhase {
            server: r,
            opened: q,
            feasible: bi.within(dist, r, m),
        });
    }
    let result = BbResult {
        opened: Some(opened),
        phases,
    };
    assert!(result.phases_disjoint(), "opening phases have overlapping T sets");
    result
}

/// 2-approximation for the concentrated backup problem: run [`algorithm_bb`]
/// for every candidate threshold and keep the cheapest feasible outcome,
/// preferring the smaller threshold on ties.
pub fn algorithm_conc_bu(bi: &BackupInstance, dist: &DistanceMatrix) -> Option<BackupSolution> {
    let thresholds = candidate_values(&bi.base, dist);
    let outcomes = par::map_slice(&thresholds, |&m| {
        let r2 = algorithm_bb(bi, dist, m).opened?;
        let cost = r2.opening_cost(&bi.base) + cost_bu(bi, dist, &r2);
        cost.is_finite().then_some((r2, cost, m))
    });
    outcomes
        .into_iter()
        .flatten()
        .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
        .map(|(r2, cost, threshold)| BackupSolution {
            r2,
            cost,
            threshold,
            heuristic_sweep: false,
        })
}
