//! Cost functions: plain UFL, the single-failure robust cost and its
//! α-failure generalization, plus the nearest-facility assignment.
//!
//! Infeasibility (a failure that leaves no facility standing) is reported as
//! a `+inf` total rather than an error so that searches can compare it.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceMatrix, Instance, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("facility set is empty")]
    EmptySet,
    #[error("node {0} is not a valid node id")]
    InvalidNode(NodeId),
}

/// Shipping cost `w * d`, with zero demand costing nothing even across
/// components.
#[inline]
pub fn ship_cost(demand: f64, distance: f64) -> f64 {
    if demand == 0.0 {
        0.0
    } else {
        demand * distance
    }
}

/// A sorted, duplicate-free set of node ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FacilitySet(Vec<NodeId>);

impl FacilitySet {
    pub fn new<I: IntoIterator<Item = NodeId>>(ids: I) -> Self {
        let mut v: Vec<NodeId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FacilitySet(v)
    }

    pub fn empty() -> Self {
        FacilitySet(Vec::new())
    }

    /// Bit `v - 1` of `mask` marks node `v`.
    pub fn from_mask(mask: u64) -> Self {
        FacilitySet((0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| {
            assert!(v <= 64, "node {v} does not fit a mask");
            m | 1 << (v - 1)
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + Clone + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn union(&self, other: &FacilitySet) -> FacilitySet {
        FacilitySet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &FacilitySet) -> FacilitySet {
        FacilitySet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_disjoint(&self, other: &FacilitySet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Checks every member lies in `1..=n`.
    pub fn validate(&self, n: usize) -> Result<(), CostError> {
        match self.0.iter().find(|&&v| v == 0 || v > n) {
            Some(&v) => Err(CostError::InvalidNode(v)),
            None => Ok(()),
        }
    }

    /// Opening cost `Σ f(r)`.
    pub fn opening_cost(&self, inst: &Instance) -> f64 {
        self.iter().map(|r| inst.opening_cost(r)).sum()
    }

    /// Canonical preference among equal-cost sets: fewer members, then
    /// lexicographically smaller.
    pub fn canonical_lt(&self, other: &FacilitySet) -> bool {
        (self.len(), &self.0) < (other.len(), &other.0)
    }
}

impl FromIterator<NodeId> for FacilitySet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        FacilitySet::new(iter)
    }
}

impl fmt::Display for FacilitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Nearest-facility assignment with lowest-id tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    server_of: Vec<NodeId>,
}

impl Assignment {
    pub fn server_of(&self, v: NodeId) -> NodeId {
        self.server_of[v - 1]
    }

    /// `φ(r)`: clients served by `r`.
    pub fn clients_of(&self, r: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.server_of
            .iter()
            .enumerate()
            .filter(move |(_, &s)| s == r)
            .map(|(i, _)| i + 1)
    }
}

pub fn assign(dist: &DistanceMatrix, r: &FacilitySet) -> Result<Assignment, CostError> {
    if r.is_empty() {
        return Err(CostError::EmptySet);
    }
    r.validate(dist.n())?;
    let server_of = (1..=dist.n())
        .map(|v| {
            let row = dist.row(v);
            // members are ascending, so strict < keeps the lowest id on ties
            let mut best = r.as_slice()[0];
            for s in r.iter().skip(1) {
                if row[s - 1] < row[best - 1] {
                    best = s;
                }
            }
            best
        })
        .collect();
    Ok(Assignment { server_of })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub facility: f64,
    pub ship: f64,
    pub backup: f64,
    pub total: f64,
    pub worst_failure: FacilitySet,
}

impl CostBreakdown {
    pub fn is_feasible(&self) -> bool {
        self.total.is_finite()
    }

    fn infeasible(facility: f64, ship: f64, worst_failure: FacilitySet) -> Self {
        CostBreakdown {
            facility,
            ship,
            backup: f64::INFINITY,
            total: f64::INFINITY,
            worst_failure,
        }
    }

    /// Splits `facility + worst` into `ship + backup`.
    fn robust(facility: f64, ship: f64, worst: f64, worst_failure: FacilitySet) -> Self {
        if !ship.is_finite() || !worst.is_finite() {
            return CostBreakdown::infeasible(facility, ship, worst_failure);
        }
        CostBreakdown {
            facility,
            ship,
            backup: worst - ship,
            total: facility + worst,
            worst_failure,
        }
    }
}

/// `Σ_v ω(v) d(v, R)`.
pub fn shipping_cost(inst: &Instance, dist: &DistanceMatrix, r: &FacilitySet) -> f64 {
    inst.nodes()
        .map(|v| ship_cost(inst.demand(v), dist.to_set(v, r.iter())))
        .sum()
}

pub fn cost_ufl(
    inst: &Instance,
    dist: &DistanceMatrix,
    r: &FacilitySet,
) -> Result<CostBreakdown, CostError> {
    if r.is_empty() {
        return Err(CostError::EmptySet);
    }
    r.validate(inst.n())?;
    let facility = r.opening_cost(inst);
    let ship = shipping_cost(inst, dist, r);
    Ok(CostBreakdown {
        facility,
        ship,
        backup: 0.0,
        total: facility + ship,
        worst_failure: FacilitySet::empty(),
    })
}

/// Per-client facility lists sorted by distance, so `d(v, R \ F)` is the
/// first entry not in `F`.
struct FailureEvaluator<'a> {
    inst: &'a Instance,
    ranked: Vec<Vec<(f64, NodeId)>>,
}

impl<'a> FailureEvaluator<'a> {
    fn new(inst: &'a Instance, dist: &DistanceMatrix, r: &FacilitySet) -> Self {
        let ranked = inst
            .nodes()
            .map(|v| {
                let row = dist.row(v);
                let mut list: Vec<(f64, NodeId)> = r.iter().map(|s| (row[s - 1], s)).collect();
                list.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                list
            })
            .collect();
        FailureEvaluator { inst, ranked }
    }

    /// `Σ_v ω(v) d(v, R \ failed)`.
    fn ship_after(&self, failed: &[NodeId]) -> f64 {
        self.ranked
            .iter()
            .enumerate()
            .map(|(i, list)| {
                let d = list
                    .iter()
                    .find(|(_, s)| !failed.contains(s))
                    .map_or(f64::INFINITY, |&(d, _)| d);
                ship_cost(self.inst.demand(i + 1), d)
            })
            .sum()
    }

    /// Max over failure sets of exactly `size` facilities; lexicographically
    /// smallest arg-max.
    fn worst(&self, r: &FacilitySet, size: usize) -> (f64, FacilitySet) {
        let mut best = (f64::NEG_INFINITY, FacilitySet::empty());
        for failed in r.iter().combinations(size) {
            let c = self.ship_after(&failed);
            if c > best.0 {
                best = (c, FacilitySet(failed));
            }
        }
        best
    }
}

/// Robust cost under one failure:
/// `C_facil(R) + max_{r ∈ R} Σ_v ω(v) d(v, R \ {r})`.
pub fn cost_rftfl(inst: &Instance, dist: &DistanceMatrix, r: &FacilitySet) -> CostBreakdown {
    cost_alpha_rftfl(inst, dist, r, 1)
}

/// Robust cost under up to `alpha` failures. The max is attained by failure
/// sets of exactly `alpha` facilities, since failing one more facility never
/// shortens any client's distance, so only those are enumerated.
pub fn cost_alpha_rftfl(
    inst: &Instance,
    dist: &DistanceMatrix,
    r: &FacilitySet,
    alpha: usize,
) -> CostBreakdown {
    assert!(alpha >= 1, "alpha must be positive");
    r.validate(inst.n()).expect("facility ids in range");
    let facility = r.opening_cost(inst);
    let ship = shipping_cost(inst, dist, r);
    if r.len() <= alpha {
        return CostBreakdown::infeasible(facility, ship, r.clone());
    }
    let eval = FailureEvaluator::new(inst, dist, r);
    let (worst, failed) = eval.worst(r, alpha);
    CostBreakdown::robust(facility, ship, worst, failed)
}

/// Single-failure robust cost written through the assignment: shipping cost
/// plus the largest extra reroute cost `Σ_{v ∈ φ(r)} ω(v)(d(v, R \ {r}) -
/// d(v, r))`. Agrees with [`cost_rftfl`] for every tie-break.
pub fn cost_rftfl_by_assignment(
    inst: &Instance,
    dist: &DistanceMatrix,
    r: &FacilitySet,
) -> CostBreakdown {
    let facility = r.opening_cost(inst);
    if r.len() < 2 {
        let ship = if r.is_empty() {
            f64::INFINITY
        } else {
            shipping_cost(inst, dist, r)
        };
        return CostBreakdown::infeasible(facility, ship, r.clone());
    }
    let phi = assign(dist, r).expect("nonempty valid set");
    let mut ship = 0.0;
    for v in inst.nodes() {
        ship += ship_cost(inst.demand(v), dist.get(v, phi.server_of(v)));
    }
    let mut backup = f64::NEG_INFINITY;
    let mut worst = FacilitySet::empty();
    for s in r.iter() {
        let extra: f64 = phi
            .clients_of(s)
            .map(|v| {
                let rest = dist.to_set(v, r.iter().filter(|&x| x != s));
                ship_cost(inst.demand(v), rest - dist.get(v, s))
            })
            .sum();
        if extra > backup {
            backup = extra;
            worst = FacilitySet(vec![s]);
        }
    }
    if !ship.is_finite() || !backup.is_finite() {
        return CostBreakdown::infeasible(facility, ship, worst);
    }
    CostBreakdown {
        facility,
        ship,
        backup,
        total: facility + ship + backup,
        worst_failure: worst,
    }
}
