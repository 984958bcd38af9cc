//! Exhaustive exact solvers, the ground truth for every approximation
//! guarantee on small instances.
//!
//! Every search enumerates subsets of a universe by bitmask, in parallel
//! chunks, keeping the cheapest set; among equal costs the set with fewer
//! members wins, then the lexicographically smaller one.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::backup::multi::{cost_alpha_bu, cost_light_alpha_bu};
use crate::backup::single::cost_bu;
use crate::backup::BackupInstance;
use crate::cost::{cost_alpha_rftfl, cost_ufl, FacilitySet};
use crate::graph::{DistanceMatrix, Instance, NodeId};
use crate::par;

pub const EXACT_RFTFL_MAX_NODES: usize = 16;
pub const EXACT_ALPHA_RFTFL_MAX_NODES: usize = 14;
pub const EXACT_MAX_ALPHA: usize = 3;
pub const EXACT_BACKUP_MAX_NODES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("no feasible set in the search space")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub best_set: FacilitySet,
    pub best_cost: f64,
    pub sets_examined: u64,
}

/// Minimizes `cost` over subsets of `universe` accepted by `in_space`.
/// Infinite costs count as examined but never win.
pub fn minimize_subsets<S, C>(universe: &[NodeId], in_space: S, cost: C) -> Result<OracleResult, OracleError>
where
    S: Fn(&FacilitySet) -> bool + Sync + Send,
    C: Fn(&FacilitySet) -> f64 + Sync + Send,
{
    assert!(universe.len() < 64, "universe too large to enumerate");
    let examined = AtomicU64::new(0);
    let best = par::argmin_range(
        0..1u64 << universe.len(),
        |mask| {
            let set = FacilitySet::new(
                universe
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &v)| v),
            );
            if !in_space(&set) {
                return None;
            }
            examined.fetch_add(1, Ordering::Relaxed);
            let c = cost(&set);
            c.is_finite().then_some((c, set))
        },
        |a, b| a.0 < b.0 || (a.0 == b.0 && a.1.canonical_lt(&b.1)),
    );
    let sets_examined = examined.into_inner();
    best.map(|(_, (best_cost, best_set))| OracleResult {
        best_set,
        best_cost,
        sets_examined,
    })
    .ok_or(OracleError::Infeasible)
}

fn check_nodes(n: usize, lo: usize, hi: usize, what: &str) -> Result<(), OracleError> {
    if n < lo || n > hi {
        return Err(OracleError::OutOfRange(format!(
            "{what} needs {lo} <= n <= {hi}, got n = {n}"
        )));
    }
    Ok(())
}

/// Exact UFL optimum over all nonempty sets; `max_nodes` bounds the search.
pub fn exact_ufl(
    inst: &Instance,
    dist: &DistanceMatrix,
    max_nodes: usize,
) -> Result<OracleResult, OracleError> {
    check_nodes(inst.n(), 1, max_nodes, "exact UFL")?;
    let universe: Vec<NodeId> = inst.nodes().collect();
    minimize_subsets(
        &universe,
        |r| !r.is_empty(),
        |r| cost_ufl(inst, dist, r).map_or(f64::INFINITY, |c| c.total),
    )
}

pub fn exact_rftfl(inst: &Instance, dist: &DistanceMatrix) -> Result<OracleResult, OracleError> {
    exact_alpha_rftfl_within(inst, dist, 1, EXACT_RFTFL_MAX_NODES)
}

pub fn exact_alpha_rftfl(
    inst: &Instance,
    dist: &DistanceMatrix,
    alpha: usize,
) -> Result<OracleResult, OracleError> {
    if alpha == 0 || alpha > EXACT_MAX_ALPHA {
        return Err(OracleError::OutOfRange(format!(
            "alpha must lie in 1..={EXACT_MAX_ALPHA}, got {alpha}"
        )));
    }
    exact_alpha_rftfl_within(inst, dist, alpha, EXACT_ALPHA_RFTFL_MAX_NODES)
}

fn exact_alpha_rftfl_within(
    inst: &Instance,
    dist: &DistanceMatrix,
    alpha: usize,
    max_nodes: usize,
) -> Result<OracleResult, OracleError> {
    check_nodes(inst.n(), alpha + 1, max_nodes, "exact robust search")?;
    let universe: Vec<NodeId> = inst.nodes().collect();
    minimize_subsets(
        &universe,
        |r| r.len() > alpha,
        |r| cost_alpha_rftfl(inst, dist, r, alpha).total,
    )
}

fn backup_search<C>(bi: &BackupInstance, cost: C) -> Result<OracleResult, OracleError>
where
    C: Fn(&FacilitySet) -> f64 + Sync + Send,
{
    check_nodes(bi.base.n(), 1, EXACT_BACKUP_MAX_NODES, "exact backup search")?;
    minimize_subsets(&bi.candidates(), |_| true, cost)
}

/// Exact concentrated backup optimum over `R2 ⊆ V \ R1`.
pub fn exact_conc_bu(bi: &BackupInstance, dist: &DistanceMatrix) -> Result<OracleResult, OracleError> {
    backup_search(bi, |r2| r2.opening_cost(&bi.base) + cost_bu(bi, dist, r2))
}

pub fn exact_conc_alpha_bu(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    alpha: usize,
) -> Result<OracleResult, OracleError> {
    backup_search(bi, |r2| {
        r2.opening_cost(&bi.base) + cost_alpha_bu(bi, dist, r2, alpha)
    })
}

/// Cheapest `R2` with backup cost at most `m` (the strict constraint).
pub fn exact_bb(bi: &BackupInstance, dist: &DistanceMatrix, m: f64) -> Result<OracleResult, OracleError> {
    backup_search(bi, |r2| {
        if cost_bu(bi, dist, r2) <= m {
            r2.opening_cost(&bi.base)
        } else {
            f64::INFINITY
        }
    })
}

/// Cheapest `R2` with light α-backup cost at most `m`.
pub fn exact_alpha_bb(
    bi: &BackupInstance,
    dist: &DistanceMatrix,
    m: f64,
    alpha: usize,
) -> Result<OracleResult, OracleError> {
    backup_search(bi, |r2| {
        if cost_light_alpha_bu(bi, dist, r2, alpha) <= m {
            r2.opening_cost(&bi.base)
        } else {
            f64::INFINITY
        }
    })
}
