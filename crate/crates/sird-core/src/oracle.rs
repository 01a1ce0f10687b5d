//! Exhaustive ground truth for K-dimensional structural entropy on
//! small graphs. Test support; guarded to n ≤ 7.

use crate::error::{Result, SirdError};
use crate::graph::WeightedGraph;
use crate::tree::{tree_entropy, EncodingTree, TreeSpec};

pub const DEFAULT_SIZE_GUARD: usize = 7;

/// Tolerance for membership in the optimal-tree tie set.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug)]
pub struct OracleResult {
    pub min_entropy: f64,
    /// All enumerated trees achieving the minimum within [`TIE_TOLERANCE`].
    pub optimal_trees: Vec<EncodingTree>,
    pub enumerated_count: usize,
}

impl OracleResult {
    /// Root-level partition of the first optimal tree, blocks sorted.
    pub fn optimal_partition(&self) -> Vec<Vec<usize>> {
        let t = &self.optimal_trees[0];
        let mut blocks: Vec<Vec<usize>> = t
            .node(t.root())
            .children()
            .iter()
            .map(|&c| t.node(c).vertices().to_vec())
            .collect();
        blocks.sort();
        blocks
    }
}

/// All set partitions of `items`, in a deterministic order.
fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for rest in partitions(&items[1..]) {
        // put `first` into each existing block, or into a new one
        for i in 0..rest.len() {
            let mut p = rest.clone();
            p[i].insert(0, first);
            out.push(p);
        }
        let mut p = rest;
        p.insert(0, vec![first]);
        out.push(p);
    }
    out
}

fn block_spec(block: &[usize]) -> TreeSpec {
    if block.len() == 1 {
        TreeSpec::Leaf(block[0])
    } else {
        TreeSpec::Cluster(block.iter().map(|&v| TreeSpec::Leaf(v)).collect())
    }
}

/// Subtree shapes for one top-level block under height cap 3: either
/// leaves directly, or any nontrivial sub-partition with its own
/// cluster nodes. The identity sub-partition would create a
/// pass-through node and is skipped.
fn block_specs_height3(block: &[usize]) -> Vec<TreeSpec> {
    if block.len() == 1 {
        return vec![TreeSpec::Leaf(block[0])];
    }
    let mut out = Vec::new();
    for sub in partitions(block) {
        if sub.len() == 1 {
            continue;
        }
        out.push(TreeSpec::Cluster(sub.iter().map(|b| block_spec(b)).collect()));
    }
    out
}

/// Exhaustively enumerate encoding trees of height ≤ `height_cap` and
/// return the minimum entropy with every tree attaining it.
pub fn enumerate_optimal(g: &WeightedGraph, height_cap: usize, n_max: usize) -> Result<OracleResult> {
    let n = g.vertex_count();
    if n > n_max {
        return Err(SirdError::GraphTooLarge { n, max: n_max });
    }
    if !(2..=3).contains(&height_cap) {
        return Err(SirdError::KOutOfRange { k: height_cap, max: 3 });
    }

    let vertices: Vec<usize> = (0..n).collect();
    let mut specs: Vec<Vec<TreeSpec>> = Vec::new();
    for top in partitions(&vertices) {
        if height_cap == 2 {
            specs.push(top.iter().map(|b| block_spec(b)).collect());
        } else {
            // cartesian product of per-block shapes
            let choices: Vec<Vec<TreeSpec>> = top.iter().map(|b| block_specs_height3(b)).collect();
            let mut acc: Vec<Vec<TreeSpec>> = vec![Vec::new()];
            for block_choices in &choices {
                let mut next = Vec::with_capacity(acc.len() * block_choices.len());
                for prefix in &acc {
                    for choice in block_choices {
                        let mut p = prefix.clone();
                        p.push(choice.clone());
                        next.push(p);
                    }
                }
                acc = next;
            }
            specs.extend(acc);
        }
    }

    let mut evaluated: Vec<(f64, EncodingTree)> = Vec::with_capacity(specs.len());
    let mut min_entropy = f64::INFINITY;
    for spec in &specs {
        let t = EncodingTree::from_spec(g, spec)?;
        let h = tree_entropy(g, &t)?;
        if h < min_entropy {
            min_entropy = h;
        }
        evaluated.push((h, t));
    }
    let enumerated_count = evaluated.len();
    let optimal_trees: Vec<EncodingTree> = evaluated
        .into_iter()
        .filter(|(h, _)| *h <= min_entropy + TIE_TOLERANCE)
        .map(|(_, t)| t)
        .collect();
    Ok(OracleResult { min_entropy, optimal_trees, enumerated_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{k4, two_triangles_bridge};

    #[test]
    fn bell_numbers_enumerated() {
        assert_eq!(partitions(&[0, 1, 2, 3]).len(), 15);
        assert_eq!(partitions(&[0, 1, 2, 3, 4]).len(), 52);
    }

    #[test]
    fn two_vertex_graph() {
        let g = WeightedGraph::build(2, vec![(0, 1, 1.0)]).unwrap();
        let res = enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(res.enumerated_count, 2);
        assert!((res.min_entropy - 1.0).abs() < 1e-12);
        // both candidates tie at 1.0
        assert_eq!(res.optimal_trees.len(), 2);
    }

    #[test]
    fn k4_minimum_bounded_by_flat() {
        let g = k4();
        let res = enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(res.enumerated_count, 15);
        assert!(res.min_entropy <= 2.0 + 1e-12);
    }

    #[test]
    fn two_triangles_optimum_is_triangle_partition() {
        let g = two_triangles_bridge(0.1);
        let res = enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(res.optimal_partition(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn minimum_monotone_in_height_cap() {
        let g = two_triangles_bridge(0.1);
        let h2 = enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD).unwrap().min_entropy;
        let h3 = enumerate_optimal(&g, 3, DEFAULT_SIZE_GUARD).unwrap().min_entropy;
        assert!(h3 <= h2 + 1e-12);
    }

    #[test]
    fn minimum_bounded_by_one_dim_entropy() {
        let g = two_triangles_bridge(0.1);
        let res = enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD).unwrap();
        assert!(res.min_entropy <= g.one_dim_entropy().unwrap() + 1e-12);
    }

    #[test]
    fn size_guard_enforced() {
        let g = WeightedGraph::build(8, (0..7).map(|i| (i, i + 1, 1.0))).unwrap();
        assert!(matches!(
            enumerate_optimal(&g, 2, DEFAULT_SIZE_GUARD),
            Err(SirdError::GraphTooLarge { n: 8, max: 7 })
        ));
    }
}
