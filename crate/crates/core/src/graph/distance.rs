use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Instance, NodeId};
use crate::par;

/// All-pairs shortest-path distances, `+inf` between components.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: NodeId, v: NodeId) -> f64 {
        self.d[(u - 1) * self.n + (v - 1)]
    }

    /// Row of distances from `u`, indexed by `v - 1`.
    pub fn row(&self, u: NodeId) -> &[f64] {
        &self.d[(u - 1) * self.n..u * self.n]
    }

    /// `d(v, set)`: distance to the nearest member, `+inf` for an empty set.
    pub fn to_set<I>(&self, v: NodeId, set: I) -> f64
    where
        I: IntoIterator<Item = NodeId>,
    {
        let row = self.row(v);
        set.into_iter()
            .map(|r| row[r - 1])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_connected(&self) -> bool {
        self.d.iter().all(|x| x.is_finite())
    }

    /// Builds a matrix from raw row-major entries. Used by tests that compare
    /// against an independent shortest-path routine.
    pub fn from_rows(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n);
        DistanceMatrix { n, d }
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State {
    dist: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        dist: 0.0,
        node: source,
    });
    while let Some(State { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(next, len) in &adj[node] {
            let nd = d + len;
            if nd < dist[next] {
                dist[next] = nd;
                heap.push(State {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    dist
}

/// Exact shortest-path metric: Dijkstra from every node.
pub fn all_pairs_distances(inst: &Instance) -> DistanceMatrix {
    let n = inst.n();
    let mut adj = vec![Vec::new(); n];
    for e in inst.edges() {
        adj[e.u - 1].push((e.v - 1, e.length));
        adj[e.v - 1].push((e.u - 1, e.length));
    }
    let sources: Vec<usize> = (0..n).collect();
    let rows = par::map_slice(&sources, |&s| dijkstra(&adj, s));
    let mut d = Vec::with_capacity(n * n);
    for row in rows {
        d.extend(row);
    }
    // Symmetrize against rounding in non-integer sums.
    for u in 0..n {
        for v in (u + 1)..n {
            let m = d[u * n + v].min(d[v * n + u]);
            d[u * n + v] = m;
            d[v * n + u] = m;
        }
    }
    DistanceMatrix { n, d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn path3() -> Instance {
        Instance::new(
            3,
            vec![
                Edge { u: 1, v: 2, length: 1.0 },
                Edge { u: 2, v: 3, length: 1.0 },
            ],
            vec![1.0; 3],
            vec![1.0; 3],
        )
        .unwrap()
    }

    #[test]
    fn path_distances() {
        let d = all_pairs_distances(&path3());
        assert_eq!(d.get(1, 3), 2.0);
        assert_eq!(d.get(1, 2), 1.0);
        assert_eq!(d.get(3, 1), 2.0);
        assert_eq!(d.get(2, 2), 0.0);
        assert!(d.is_connected());
    }

    #[test]
    fn single_edge() {
        let inst =
            Instance::new(2, vec![Edge { u: 1, v: 2, length: 1.0 }], vec![1.0; 2], vec![1.0; 2])
                .unwrap();
        let d = all_pairs_distances(&inst);
        assert_eq!(d.get(1, 2), 1.0);
        assert_eq!(d.get(1, 1), 0.0);
    }

    #[test]
    fn disconnected_is_infinite() {
        let inst = Instance::new(2, vec![], vec![1.0; 2], vec![1.0; 2]).unwrap();
        let d = all_pairs_distances(&inst);
        assert_eq!(d.get(1, 2), f64::INFINITY);
        assert!(!d.is_connected());
    }

    #[test]
    fn shortcut_beats_direct_edge() {
        let inst = Instance::new(
            3,
            vec![
                Edge { u: 1, v: 3, length: 10.0 },
                Edge { u: 1, v: 2, length: 2.0 },
                Edge { u: 2, v: 3, length: 3.0 },
            ],
            vec![1.0; 3],
            vec![1.0; 3],
        )
        .unwrap();
        let d = all_pairs_distances(&inst);
        assert_eq!(d.get(1, 3), 5.0);
    }

    #[test]
    fn distance_to_set() {
        let d = all_pairs_distances(&path3());
        assert_eq!(d.to_set(1, [2, 3]), 1.0);
        assert_eq!(d.to_set(1, []), f64::INFINITY);
    }
}
