//! Shared fixtures for unit tests.

use crate::graph::WeightedGraph;
use crate::tree::TreeSpec;

pub fn k4() -> WeightedGraph {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    WeightedGraph::build(4, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap()
}

/// Two unit triangles {0,1,2} and {3,4,5}; optional bridge (2,3).
pub fn two_triangles_bridge(bridge: f64) -> WeightedGraph {
    let mut edges: Vec<(usize, usize, f64)> = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
        .iter()
        .map(|&(u, v)| (u, v, 1.0))
        .collect();
    if bridge > 0.0 {
        edges.push((2, 3, bridge));
    }
    WeightedGraph::build(6, edges).unwrap()
}

/// Tree spec with one cluster per triangle.
pub fn two_triangles_spec() -> Vec<TreeSpec> {
    vec![
        TreeSpec::Cluster(vec![TreeSpec::Leaf(0), TreeSpec::Leaf(1), TreeSpec::Leaf(2)]),
        TreeSpec::Cluster(vec![TreeSpec::Leaf(3), TreeSpec::Leaf(4), TreeSpec::Leaf(5)]),
    ]
}
