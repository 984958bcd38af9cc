//! Instances, the shortest-path metric, the text format and generators.
//!
//! Nodes are identified by `1..=n` throughout the crate.

mod distance;
mod generate;
mod io;

pub use distance::{all_pairs_distances, DistanceMatrix};
pub use generate::{generate_random_instance, generate_tree_instance, GenerateError, TreeFamily};
pub use io::{parse_instance, ParseError};

use thiserror::Error;

/// Node identifier in `1..=n`.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance needs at least one node")]
    NoNodes,
    #[error("expected {expected} {what} values, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("node id {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("nonpositive edge length on ({0}, {1})")]
    NonPositiveLength(NodeId, NodeId),
    #[error("negative or non-finite demand at node {0}")]
    BadDemand(NodeId),
    #[error("negative or non-finite opening cost at node {0}")]
    BadOpeningCost(NodeId),
}

/// A facility location instance: graph, edge lengths, opening costs and
/// demands. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    edges: Vec<Edge>,
    demand: Vec<f64>,
    opening_cost: Vec<f64>,
}

impl Instance {
    /// `demand[i]` and `opening_cost[i]` belong to node `i + 1`.
    pub fn new(
        n: usize,
        edges: Vec<Edge>,
        demand: Vec<f64>,
        opening_cost: Vec<f64>,
    ) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(InstanceError::NoNodes);
        }
        if demand.len() != n {
            return Err(InstanceError::LengthMismatch {
                what: "demand",
                expected: n,
                got: demand.len(),
            });
        }
        if opening_cost.len() != n {
            return Err(InstanceError::LengthMismatch {
                what: "opening cost",
                expected: n,
                got: opening_cost.len(),
            });
        }
        for e in &edges {
            for id in [e.u, e.v] {
                if id == 0 || id > n {
                    return Err(InstanceError::NodeOutOfRange(id));
                }
            }
            if e.u == e.v {
                return Err(InstanceError::SelfLoop(e.u));
            }
            if !e.length.is_finite() || e.length <= 0.0 {
                return Err(InstanceError::NonPositiveLength(e.u, e.v));
            }
        }
        for (i, &w) in demand.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(InstanceError::BadDemand(i + 1));
            }
        }
        for (i, &f) in opening_cost.iter().enumerate() {
            if !f.is_finite() || f < 0.0 {
                return Err(InstanceError::BadOpeningCost(i + 1));
            }
        }
        Ok(Instance {
            n,
            edges,
            demand,
            opening_cost,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + Clone {
        1..=self.n
    }

    pub fn demand(&self, v: NodeId) -> f64 {
        self.demand[v - 1]
    }

    pub fn opening_cost(&self, v: NodeId) -> f64 {
        self.opening_cost[v - 1]
    }

    pub fn demands(&self) -> &[f64] {
        &self.demand
    }

    pub fn opening_costs(&self) -> &[f64] {
        &self.opening_cost
    }

    pub fn total_demand(&self) -> f64 {
        self.demand.iter().sum()
    }

    /// Same graph with replaced node data. Used by the backup transform.
    pub fn with_node_data(
        &self,
        demand: Vec<f64>,
        opening_cost: Vec<f64>,
    ) -> Result<Self, InstanceError> {
        Instance::new(self.n, self.edges.clone(), demand, opening_cost)
    }

    /// Relabels node `v` as `perm[v - 1]`.
    pub fn relabel(&self, perm: &[NodeId]) -> Result<Self, InstanceError> {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut demand = vec![0.0; self.n];
        let mut cost = vec![0.0; self.n];
        for v in self.nodes() {
            demand[perm[v - 1] - 1] = self.demand(v);
            cost[perm[v - 1] - 1] = self.opening_cost(v);
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                u: perm[e.u - 1],
                v: perm[e.v - 1],
                length: e.length,
            })
            .collect();
        Instance::new(self.n, edges, demand, cost)
    }
}
