//! Three-stage robust solvers.
//!
//! 1. A UFL solver with certified ratio `ρ` picks the servers `R1`.
//! 2. Each server absorbs the demand of its cluster and becomes free to open.
//! 3. A concentrated backup approximation adds the backup set `R2`.
//!
//! The certified bound is `3ρ + 2` for one failure and `ρ + 3α(1 + ρ)` for
//! α failures (6.5 and 1.5 + 7.5α for a 1.5-approximate first stage).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::backup::multi::algorithm_conc_alpha_bu;
use crate::backup::single::algorithm_conc_bu;
use crate::backup::{BackupInstance, BackupSolution};
use crate::cost::{assign, cost_alpha_rftfl, cost_rftfl, cost_ufl, CostBreakdown, FacilitySet};
use crate::graph::{DistanceMatrix, Instance, NodeId};
use crate::oracle::{exact_ufl, OracleError};
use crate::par;

pub const DEFAULT_EXACT_LIMIT: usize = 18;

/// Relative improvement a local-search move must beat.
const LOCAL_SEARCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("exact stage 1 accepts at most {limit} nodes, instance has {n}")]
    ExactLimit { n: usize, limit: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("server set is empty")]
    EmptyServers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage1Kind {
    ExactBruteforce,
    LocalSearch,
}

impl Stage1Kind {
    pub fn name(self) -> &'static str {
        match self {
            Stage1Kind::ExactBruteforce => "exact",
            Stage1Kind::LocalSearch => "local",
        }
    }
}

impl fmt::Display for Stage1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage1Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" | "exact_bruteforce" => Ok(Stage1Kind::ExactBruteforce),
            "local" | "local_search" => Ok(Stage1Kind::LocalSearch),
            _ => Err(format!("unknown stage-1 solver '{s}' (expected exact or local)")),
        }
    }
}

/// Stage-1 UFL solver together with its certified approximation ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stage1Solver {
    pub kind: Stage1Kind,
    pub ratio: f64,
    pub exact_limit: usize,
    pub seed: u64,
}

impl Stage1Solver {
    pub fn exact() -> Self {
        Stage1Solver {
            kind: Stage1Kind::ExactBruteforce,
            ratio: 1.0,
            exact_limit: DEFAULT_EXACT_LIMIT,
            seed: 0,
        }
    }

    /// Add/drop/swap local search, a 3-approximation for metric UFL.
    pub fn local_search(seed: u64) -> Self {
        Stage1Solver {
            kind: Stage1Kind::LocalSearch,
            ratio: 3.0,
            exact_limit: DEFAULT_EXACT_LIMIT,
            seed,
        }
    }

    pub fn of_kind(kind: Stage1Kind, seed: u64) -> Self {
        match kind {
            Stage1Kind::ExactBruteforce => Stage1Solver::exact(),
            Stage1Kind::LocalSearch => Stage1Solver::local_search(seed),
        }
    }

    pub fn solve(&self, inst: &Instance, dist: &DistanceMatrix) -> Result<FacilitySet, SolveError> {
        match self.kind {
            Stage1Kind::ExactBruteforce => ufl_exact_within(inst, dist, self.exact_limit),
            Stage1Kind::LocalSearch => Ok(ufl_local_search(inst, dist, self.seed)),
        }
    }
}

pub fn single_failure_bound(rho: f64) -> f64 {
    3.0 * rho + 2.0
}

pub fn alpha_failure_bound(rho: f64, alpha: usize) -> f64 {
    rho + 3.0 * alpha as f64 * (1.0 + rho)
}

/// Exact UFL by enumeration; prefers fewer facilities, then the
/// lexicographically smaller set among equal costs.
pub fn ufl_exact(inst: &Instance, dist: &DistanceMatrix) -> Result<FacilitySet, SolveError> {
    ufl_exact_within(inst, dist, DEFAULT_EXACT_LIMIT)
}

fn ufl_exact_within(
    inst: &Instance,
    dist: &DistanceMatrix,
    limit: usize,
) -> Result<FacilitySet, SolveError> {
    match exact_ufl(inst, dist, limit) {
        Ok(r) => Ok(r.best_set),
        Err(OracleError::OutOfRange(_)) => Err(SolveError::ExactLimit { n: inst.n(), limit }),
        Err(OracleError::Infeasible) => Err(SolveError::Infeasible(
            "every facility set leaves some demand unserved".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Add(NodeId),
    Drop(NodeId),
    Swap { out: NodeId, inn: NodeId },
}

impl Move {
    fn apply(self, open: &FacilitySet) -> FacilitySet {
        match self {
            Move::Add(v) => open.union(&FacilitySet::new([v])),
            Move::Drop(v) => open.difference(&FacilitySet::new([v])),
            Move::Swap { out, inn } => open
                .difference(&FacilitySet::new([out]))
                .union(&FacilitySet::new([inn])),
        }
    }
}

/// Local search for UFL from the cheapest single facility. Each round takes
/// the best improving add, drop or swap; equally good moves are chosen
/// between by a generator seeded with `seed`.
pub fn ufl_local_search(inst: &Instance, dist: &DistanceMatrix, seed: u64) -> FacilitySet {
    let ufl = |r: &FacilitySet| cost_ufl(inst, dist, r).map_or(f64::INFINITY, |c| c.total);
    let start = inst
        .nodes()
        .min_by(|&a, &b| inst.opening_cost(a).total_cmp(&inst.opening_cost(b)).then(a.cmp(&b)))
        .expect("instance has nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut open = FacilitySet::new([start]);
    let mut current = ufl(&open);
    loop {
        let closed: Vec<NodeId> = inst.nodes().filter(|&v| !open.contains(v)).collect();
        let mut moves: Vec<Move> = closed.iter().map(|&v| Move::Add(v)).collect();
        if open.len() > 1 {
            moves.extend(open.iter().map(Move::Drop));
        }
        for out in open.iter() {
            moves.extend(closed.iter().map(|&inn| Move::Swap { out, inn }));
        }
        let costs = par::map_slice(&moves, |m| ufl(&m.apply(&open)));
        let best = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let gain = current - best;
        if gain.is_nan() || gain <= LOCAL_SEARCH_TOLERANCE * current {
            return open;
        }
        let tied: Vec<usize> = (0..moves.len()).filter(|&i| costs[i] == best).collect();
        let pick = tied[rng.random_range(0..tied.len())];
        open = moves[pick].apply(&open);
        current = best;
    }
}

/// Stage 2: servers become free to open and absorb the demand of the
/// clients assigned to them.
pub fn transform_instance(
    inst: &Instance,
    dist: &DistanceMatrix,
    r1: &FacilitySet,
) -> Result<BackupInstance, SolveError> {
    let phi = assign(dist, r1).map_err(|_| SolveError::EmptyServers)?;
    let mut demand = vec![0.0; inst.n()];
    for v in inst.nodes() {
        demand[phi.server_of(v) - 1] += inst.demand(v);
    }
    let cost = inst
        .nodes()
        .map(|v| if r1.contains(v) { 0.0 } else { inst.opening_cost(v) })
        .collect();
    let base = inst
        .with_node_data(demand, cost)
        .expect("transformed data stays valid");
    Ok(BackupInstance::new(base, r1.clone()).expect("servers validated by assign"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub stage1: Duration,
    pub stage2: Duration,
    pub stage3: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    /// Failures tolerated; 0 for plain UFL.
    pub alpha: usize,
    pub r1: FacilitySet,
    pub r2: FacilitySet,
    pub final_set: FacilitySet,
    pub cost: CostBreakdown,
    /// `C_UFL(R1)`.
    pub stage1_cost: f64,
    /// Concentrated backup cost of `R2` on the transformed instance.
    pub backup_cost: f64,
    pub threshold: f64,
    pub heuristic_sweep: bool,
    pub stage1_ratio: f64,
    pub certified_ratio: f64,
    pub timings: StageTimings,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

struct Stages {
    r1: FacilitySet,
    stage1_cost: f64,
    backup: BackupSolution,
    timings: StageTimings,
}

fn run_stages<F>(
    inst: &Instance,
    dist: &DistanceMatrix,
    s1: &Stage1Solver,
    stage3: F,
) -> Result<Stages, SolveError>
where
    F: FnOnce(&BackupInstance) -> Option<BackupSolution>,
{
    let (r1, t1) = timed(|| s1.solve(inst, dist));
    let r1 = r1?;
    let stage1_cost = cost_ufl(inst, dist, &r1)
        .map_err(|_| SolveError::EmptyServers)?
        .total;
    let (bi, t2) = timed(|| transform_instance(inst, dist, &r1));
    let bi = bi?;
    let (backup, t3) = timed(|| stage3(&bi));
    let backup = backup.ok_or_else(|| {
        SolveError::Infeasible("no threshold admits a feasible backup set".into())
    })?;
    Ok(Stages {
        r1,
        stage1_cost,
        backup,
        timings: StageTimings {
            stage1: t1,
            stage2: t2,
            stage3: t3,
        },
    })
}

/// Stage 1 alone, reported in the same shape as the robust solvers.
pub fn solve_ufl(
    inst: &Instance,
    dist: &DistanceMatrix,
    s1: &Stage1Solver,
) -> Result<SolveReport, SolveError> {
    let (r1, t1) = timed(|| s1.solve(inst, dist));
    let r1 = r1?;
    let cost = cost_ufl(inst, dist, &r1).map_err(|_| SolveError::EmptyServers)?;
    if !cost.is_feasible() {
        return Err(SolveError::Infeasible("demand disconnected from every facility".into()));
    }
    Ok(SolveReport {
        alpha: 0,
        r2: FacilitySet::empty(),
        final_set: r1.clone(),
        stage1_cost: cost.total,
        r1,
        cost,
        backup_cost: 0.0,
        threshold: 0.0,
        heuristic_sweep: false,
        stage1_ratio: s1.ratio,
        certified_ratio: s1.ratio,
        timings: StageTimings {
            stage1: t1,
            ..Default::default()
        },
    })
}

/// Single-failure robust solver.
pub fn solve_rftfl(
    inst: &Instance,
    dist: &DistanceMatrix,
    s1: &Stage1Solver,
) -> Result<SolveReport, SolveError> {
    if inst.n() < 2 {
        return Err(SolveError::Infeasible("a single node cannot survive a failure".into()));
    }
    let st = run_stages(inst, dist, s1, |bi| algorithm_conc_bu(bi, dist))?;
    let final_set = st.r1.union(&st.backup.r2);
    let cost = cost_rftfl(inst, dist, &final_set);
    if !cost.is_feasible() {
        return Err(SolveError::Infeasible(format!(
            "final set {final_set} does not survive every single failure"
        )));
    }
    let combined = st.stage1_cost + st.backup.cost;
    assert!(
        cost.total <= combined + 1e-9 * combined.abs().max(1.0),
        "robust cost {} exceeds stage-1 plus backup cost {combined}",
        cost.total
    );
    Ok(SolveReport {
        alpha: 1,
        r1: st.r1,
        r2: st.backup.r2,
        final_set,
        cost,
        stage1_cost: st.stage1_cost,
        backup_cost: st.backup.cost,
        threshold: st.backup.threshold,
        heuristic_sweep: false,
        stage1_ratio: s1.ratio,
        certified_ratio: single_failure_bound(s1.ratio),
        timings: st.timings,
    })
}

/// α-failure robust solver; Stage 3 runs the subset-sum threshold sweep.
pub fn solve_alpha_rftfl(
    inst: &Instance,
    dist: &DistanceMatrix,
    s1: &Stage1Solver,
    alpha: usize,
    candidate_cap: usize,
) -> Result<SolveReport, SolveError> {
    assert!(alpha >= 1, "alpha must be positive");
    if inst.n() <= alpha {
        return Err(SolveError::Infeasible(format!(
            "{} nodes cannot survive {alpha} failures",
            inst.n()
        )));
    }
    let st = run_stages(inst, dist, s1, |bi| {
        algorithm_conc_alpha_bu(bi, dist, alpha, candidate_cap)
    })?;
    let final_set = st.r1.union(&st.backup.r2);
    let cost = cost_alpha_rftfl(inst, dist, &final_set, alpha);
    if !cost.is_feasible() {
        return Err(SolveError::Infeasible(format!(
            "final set {final_set} does not survive {alpha} failures"
        )));
    }
    Ok(SolveReport {
        alpha,
        r1: st.r1,
        r2: st.backup.r2,
        final_set,
        cost,
        stage1_cost: st.stage1_cost,
        backup_cost: st.backup.cost,
        threshold: st.backup.threshold,
        heuristic_sweep: st.backup.heuristic_sweep,
        stage1_ratio: s1.ratio,
        certified_ratio: alpha_failure_bound(s1.ratio, alpha),
        timings: st.timings,
    })
}
