//! α-failure concentrated backup: the maximum and light backup costs, the
//! threshold relaxation `A_α_bb`, and the subset-sum threshold sweep.

use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;

use super::{pairwise_disjoint, BackupInstance, BackupSolution};
use crate::cost::{ship_cost, FacilitySet};
use crate::graph::{DistanceMatrix, NodeId};
use crate::par;

/// Default bound on the number of threshold subsets evaluated by
/// [`algorithm_conc_alpha_bu`].
pub const DEFAULT_CANDIDATE_CAP: usize = 200_000;

/// Maximum α-backup cost: the worst failure `F ⊆ R1 ∪ R2`, `|F| ≤ α`, of the
/// summed reroute cost of the failed servers. Exhaustive over `F`.
pub fn cost_alpha_bu(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    r2: &FacilitySet,
    alpha: usize,
) -> f64 {
    let all = bi.servers.union(r2);
    let mut worst: f64 = 0.0;
    for size in 1..=alpha.min(all.len()) {
        for failed in all.iter().combinations(size) {
            if !failed.iter().any(|&v| bi.servers.contains(v)) {
                continue;
            }
            let survivors: Vec<NodeId> = all.iter().filter(|v| !failed.contains(v)).collect();
            let cost: f64 = failed
                .iter()
                .filter(|&&r| bi.servers.contains(r))
                .map(|&r| {
                    if survivors.is_empty() {
                        f64::INFINITY
                    } else {
                        ship_cost(bi.demand(r), dist.to_set(r, survivors.iter().copied()))
                    }
                })
                .sum();
            worst = worst.max(cost);
        }
    }
    worst
}

/// Light α-backup cost `max_{r ∈ R1} ω(r) δ_α(r)`, where `δ_α(r)` is the
/// α-th smallest distance from `r` to another facility of `R1 ∪ R2`: the
/// worst failure for a fixed server takes out the server itself and its
/// α−1 nearest neighbours.
pub fn cost_light_alpha_bu(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    r2: &FacilitySet,
    alpha: usize,
) -> f64 {
    assert!(alpha >= 1, "alpha must be positive");
    let all = bi.servers.union(r2);
    bi.servers
        .iter()
        .map(|r| {
            let mut others: Vec<f64> = all
                .iter()
                .filter(|&v| v != r)
                .map(|v| dist.get(r, v))
                .collect();
            if others.len() < alpha {
                return f64::INFINITY;
            }
            others.select_nth_unstable_by(alpha - 1, f64::total_cmp);
            ship_cost(bi.demand(r), others[alpha - 1])
        })
        .fold(0.0, f64::max)
}

/// A phase of `A_α_bb` whose server joined the anchor set `Z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBbPhase {
    pub server: NodeId,
    pub opened: Vec<NodeId>,
    /// `T = {v ≠ r : ω(r) d(v, r) ≤ M}`.
    pub feasible: FacilitySet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBbResult {
    /// `None` when some anchor's `T` set holds too few free nodes.
    pub opened: Option<FacilitySet>,
    /// `Z`: servers where the algorithm completed α backups.
    pub anchors: FacilitySet,
    pub phases: Vec<AlphaBbPhase>,
}

impl AlphaBbResult {
    pub fn is_feasible(&self) -> bool {
        self.opened.is_some()
    }

    pub fn phases_disjoint(&self) -> bool {
        let ts: Vec<&FacilitySet> = self.phases.iter().map(|p| &p.feasible).collect();
        pairwise_disjoint(&ts)
    }
}

/// α-bounded backup relaxation. Servers are processed by nonincreasing
/// demand (ties by id). A server whose `2M` ball holds no anchor becomes an
/// anchor and gets its `M` ball topped up to α facilities with the cheapest
/// free nodes. On success the light backup cost is at most `3M` and the
/// opening cost at most the α-bounded optimum for `M`.
pub fn algorithm_alpha_bb(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    m: f64,
    alpha: usize,
) -> AlphaBbResult {
    assert!(alpha >= 1, "alpha must be positive");
    let mut opened = FacilitySet::empty();
    let mut anchors = FacilitySet::empty();
    let mut phases = Vec::new();
    for r in bi.servers_by_demand() {
        let relaxed = bi.within(dist, r, 2.0 * m);
        if relaxed.iter().any(|v| anchors.contains(v)) {
            continue;
        }
        let feasible = bi.within(dist, r, m);
        let open_now = bi.servers.union(&opened);
        let have = feasible.iter().filter(|&v| open_now.contains(v)).count();
        let free = feasible.difference(&open_now);
        let need = alpha.saturating_sub(have);
        if need > free.len() {
            return AlphaBbResult {
                opened: None,
                anchors,
                phases,
            };
        }
        let picked = bi.cheapest(&free, need);
        opened = opened.union(&FacilitySet::new(picked.iter().copied()));
        anchors = anchors.union(&FacilitySet::new([r]));
        phases.push(AlphaBbPhase {
            server: r,
            opened: picked,
            feasible,
        });
    }
    let result = AlphaBbResult {
        opened: Some(opened),
        anchors,
        phases,
    };
    assert!(result.phases_disjoint(), "anchor phases have overlapping T sets");
    result
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn subset_count(n: usize, alpha: usize) -> u128 {
    (0..=alpha).map(|j| binomial(n, j)).fold(0, u128::saturating_add)
}

/// Threshold values `M(T) = Σ T` over subsets `T` of the distinct
/// candidate values with `|T| ≤ α`, in (size, lexicographic) order and with
/// repeated sums dropped. The flag reports a cap-truncated sweep, which then
/// covers every subset of the largest values that fits the cap plus all
/// singletons.
pub fn threshold_sweep(values: &[f64], alpha: usize, cap: usize) -> (Vec<f64>, bool) {
    let k = values.len();
    let full = subset_count(k, alpha) <= cap as u128;
    let top = if full {
        k
    } else {
        (0..=k)
            .rev()
            .find(|&l| subset_count(l, alpha) + (k - l) as u128 <= cap as u128)
            .unwrap_or(0)
    };
    let pool: Vec<f64> = values[k - top..].to_vec();
    let mut seen = HashSet::new();
    let mut sums = Vec::new();
    let mut push = |m: f64| {
        if seen.insert(m.to_bits()) {
            sums.push(m);
        }
    };
    push(0.0);
    for size in 1..=alpha.min(pool.len()) {
        for t in pool.iter().combinations(size) {
            push(t.into_iter().sum());
        }
    }
    if !full {
        for &v in values {
            push(v);
        }
    }
    (sums, !full)
}

/// 3α-approximation for the concentrated α-backup problem: sweep
/// [`algorithm_alpha_bb`] over the subset-sum thresholds and keep the
/// cheapest feasible outcome, earliest threshold winning ties.
pub fn algorithm_conc_alpha_bu(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    alpha: usize,
    candidate_cap: usize,
) -> Option<BackupSolution> {
    assert!(alpha >= 1, "alpha must be positive");
    let values = super::single::candidate_values(&bi.base, dist);
    let (thresholds, heuristic_sweep) = threshold_sweep(&values, alpha, candidate_cap);
    let outcomes = par::map_slice(&thresholds, |&m| {
        let r2 = algorithm_alpha_bb(bi, dist, m, alpha).opened?;
        let cost = r2.opening_cost(&bi.base) + cost_alpha_bu(bi, dist, &r2, alpha);
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
            heuristic_sweep,
        })
}
