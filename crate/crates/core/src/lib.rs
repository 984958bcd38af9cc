//! Approximation algorithms for robust fault-tolerant facility location,
//! where the opened facilities must keep serving every client after up to
//! α of them fail, together with brute-force oracles used to check every
//! guarantee on small instances.
//!
//! The modules build on each other bottom-up:
//!
//! - [`graph`]: instances, the shortest-path metric, text format, generators
//! - [`cost`]: UFL and robust cost functions, nearest-facility assignment
//! - [`backup`]: concentrated backup subproblems and their threshold sweeps
//! - [`pipeline`]: the three-stage robust solvers
//! - [`oracle`]: exhaustive exact solvers
//! - [`cli`]: the `rftfl` command-line front end
//!
//! Sweeps and enumerations run on rayon when the `parallel` feature is on
//! (the default) and sequentially otherwise; results are identical.

pub mod backup;
pub mod cli;
pub mod cost;
pub mod graph;
pub mod oracle;
pub mod par;
pub mod pipeline;

pub use cost::{CostBreakdown, FacilitySet};
pub use graph::{DistanceMatrix, Instance, NodeId};
