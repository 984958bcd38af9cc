//! Seeded instance generators. All numeric data are integers so that cost
//! comparisons downstream are exact.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Edge, Instance, NodeId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("edge density must lie in (0, 1], got {0}")]
    BadDensity(f64),
    #[error("{0} must be positive")]
    ZeroRange(&'static str),
}

/// The two tree families on which the robust problem stays hard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeFamily {
    /// Unit lengths and opening costs, random demands in `[0, range]`.
    UnitLengthVariableDemand,
    /// Unit demands and opening costs, random lengths in `[1, range]`.
    UnitDemandVariableLength,
}

impl TreeFamily {
    pub const ALL: [TreeFamily; 2] = [
        TreeFamily::UnitLengthVariableDemand,
        TreeFamily::UnitDemandVariableLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TreeFamily::UnitLengthVariableDemand => "unit_length_variable_demand",
            TreeFamily::UnitDemandVariableLength => "unit_demand_variable_length",
        }
    }
}

impl fmt::Display for TreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TreeFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TreeFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown tree family '{s}'"))
    }
}

/// Random labelled tree: shuffle the nodes, attach each to a random earlier
/// one. Returned as `(u, v)` pairs with `u < v`.
fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Vec<(NodeId, NodeId)> {
    let mut order: Vec<NodeId> = (1..=n).collect();
    order.shuffle(rng);
    (1..n)
        .map(|i| {
            let parent = order[rng.random_range(0..i)];
            let child = order[i];
            (parent.min(child), parent.max(child))
        })
        .collect()
}

pub fn generate_random_instance(
    n: usize,
    edge_density: f64,
    max_length: u64,
    max_demand: u64,
    max_cost: u64,
    seed: u64,
) -> Result<Instance, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewNodes(n));
    }
    if !(edge_density > 0.0 && edge_density <= 1.0) {
        return Err(GenerateError::BadDensity(edge_density));
    }
    if max_length == 0 {
        return Err(GenerateError::ZeroRange("max_length"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(n, &mut rng);
    let in_tree: HashSet<(NodeId, NodeId)> = tree.iter().copied().collect();

    let mut pairs = tree;
    for u in 1..=n {
        for v in (u + 1)..=n {
            if !in_tree.contains(&(u, v)) && rng.random_bool(edge_density) {
                pairs.push((u, v));
            }
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge {
            u,
            v,
            length: rng.random_range(1..=max_length) as f64,
        })
        .collect();
    let demand = (0..n)
        .map(|_| rng.random_range(0..=max_demand) as f64)
        .collect();
    let cost = (0..n).map(|_| rng.random_range(0..=max_cost) as f64).collect();
    Ok(Instance::new(n, edges, demand, cost).expect("generator emits valid data"))
}

pub fn generate_tree_instance(
    family: TreeFamily,
    n: usize,
    value_range: u64,
    seed: u64,
) -> Result<Instance, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewNodes(n));
    }
    if value_range == 0 {
        return Err(GenerateError::ZeroRange("value_range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(n, &mut rng);
    let (edges, demand) = match family {
        TreeFamily::UnitLengthVariableDemand => {
            let edges = tree
                .into_iter()
                .map(|(u, v)| Edge { u, v, length: 1.0 })
                .collect();
            let demand = (0..n)
                .map(|_| rng.random_range(0..=value_range) as f64)
                .collect();
            (edges, demand)
        }
        TreeFamily::UnitDemandVariableLength => {
            let edges = tree
                .into_iter()
                .map(|(u, v)| Edge {
                    u,
                    v,
                    length: rng.random_range(1..=value_range) as f64,
                })
                .collect();
            (edges, vec![1.0; n])
        }
    };
    Ok(Instance::new(n, edges, demand, vec![1.0; n]).expect("generator emits valid data"))
}
