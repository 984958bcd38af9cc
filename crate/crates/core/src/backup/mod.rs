//! Concentrated backup problems: every Stage-1 server carries the demand of
//! its cluster and needs backup facilities close enough to absorb it.
//!
//! A server with no other facility at all has infinite backup cost
//! regardless of its demand, mirroring the robust cost where a lone facility
//! is infeasible.

pub mod multi;
pub mod single;

use serde::Serialize;

use crate::cost::{CostError, FacilitySet};
use crate::graph::{DistanceMatrix, Instance, NodeId};

/// A backup instance: the (transformed) instance plus the server set `R1`.
/// Only demands and opening costs of `base` are read; the graph metric is
/// passed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct BackupInstance {
    pub base: Instance,
    pub servers: FacilitySet,
}

impl BackupInstance {
    pub fn new(base: Instance, servers: FacilitySet) -> Result<Self, CostError> {
        servers.validate(base.n())?;
        Ok(BackupInstance { base, servers })
    }

    pub fn demand(&self, v: NodeId) -> f64 {
        self.base.demand(v)
    }

    /// Nodes outside `R1`, the only candidates for new backup facilities.
    pub fn candidates(&self) -> Vec<NodeId> {
        self.base
            .nodes()
            .filter(|&v| !self.servers.contains(v))
            .collect()
    }

    /// Servers with demand ties broken by id, largest demand first.
    pub(crate) fn servers_by_demand(&self) -> Vec<NodeId> {
        let mut s: Vec<NodeId> = self.servers.iter().collect();
        s.sort_by(|&a, &b| self.demand(b).total_cmp(&self.demand(a)).then(a.cmp(&b)));
        s
    }

    /// `{v ≠ r : ω(r) d(v, r) ≤ bound}`.
    pub(crate) fn within(&self, dist: &DistanceMatrix, r: NodeId, bound: f64) -> FacilitySet {
        let w = self.demand(r);
        let row = dist.row(r);
        FacilitySet::new(
            self.base
                .nodes()
                .filter(|&v| v != r && crate::cost::ship_cost(w, row[v - 1]) <= bound),
        )
    }

    /// Cheapest `count` members of `pool` by opening cost, then id.
    pub(crate) fn cheapest(&self, pool: &FacilitySet, count: usize) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = pool.iter().collect();
        v.sort_by(|&a, &b| {
            self.base
                .opening_cost(a)
                .total_cmp(&self.base.opening_cost(b))
                .then(a.cmp(&b))
        });
        v.truncate(count);
        v
    }
}

/// Outcome of a concentrated-backup sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackupSolution {
    pub r2: FacilitySet,
    /// `C_facil(R2)` plus the backup cost of `R1 ∪ R2`.
    pub cost: f64,
    /// Threshold whose bounded-backup run produced `r2`.
    pub threshold: f64,
    /// Set when the threshold sweep was truncated by the candidate cap.
    pub heuristic_sweep: bool,
}

/// `true` iff the sets are pairwise disjoint.
pub(crate) fn pairwise_disjoint(sets: &[&FacilitySet]) -> bool {
    sets.iter()
        .enumerate()
        .all(|(i, a)| sets[i + 1..].iter().all(|b| a.is_disjoint(b)))
}
