//! Weight correction and entropy-guided k-NN sparsification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SirdError};
use crate::graph::WeightedGraph;

/// Outcome of neighbor-count selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparsificationReport {
    /// Selected neighbor count.
    pub k_star: usize,
    /// Correction factor δ = μ_w / (2n) applied to every weight.
    pub delta: f64,
    /// H¹(G_k) for every k in 1..n−1.
    pub entropies: BTreeMap<usize, f64>,
    /// Interior k values where the entropy attains a strict local minimum.
    pub lmse_ks: Vec<usize>,
    /// True when `lmse_ks` was empty and k* fell back to the global argmin.
    pub used_fallback: bool,
}

/// Add δ = μ_w / (2n) to every edge weight, where μ_w is the mean edge
/// weight. Lifts trivial near-zero weights without disturbing
/// significant ones.
pub fn correct_weights(g: &WeightedGraph) -> Result<WeightedGraph> {
    if g.edges().is_empty() {
        return Err(SirdError::EmptyGraph);
    }
    let delta = correction_delta(g);
    WeightedGraph::build(
        g.vertex_count(),
        g.edges().iter().map(|e| (e.u, e.v, e.w + delta)),
    )
}

pub fn correction_delta(g: &WeightedGraph) -> f64 {
    let mean: f64 = g.edges().iter().map(|e| e.w).sum::<f64>() / g.edges().len() as f64;
    mean / (2.0 * g.vertex_count() as f64)
}

/// Retain edge (u, v) iff it is among the k largest-weight edges of u or
/// of v. Ties prefer the lower neighbor id. The union rule guarantees
/// min degree ≥ 1 for k ≥ 1.
pub fn knn_graph(g: &WeightedGraph, k: usize) -> Result<WeightedGraph> {
    let n = g.vertex_count();
    if k < 1 || k > n.saturating_sub(1) {
        return Err(SirdError::KOutOfRange { k, max: n.saturating_sub(1) });
    }
    let mut keep = vec![false; g.edges().len()];
    // edge index lookup per vertex
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.u].push(i);
        incident[e.v].push(i);
    }
    for v in 0..n {
        let mut ranked: Vec<(f64, usize, usize)> = incident[v]
            .iter()
            .map(|&i| {
                let e = &g.edges()[i];
                let nbr = if e.u == v { e.v } else { e.u };
                (e.w, nbr, i)
            })
            .collect();
        ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        for &(_, _, i) in ranked.iter().take(k) {
            keep[i] = true;
        }
    }
    WeightedGraph::build(
        n,
        g.edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(_, e)| (e.u, e.v, e.w)),
    )
}

/// Correct weights, sweep k = 1..n−1, and pick the smallest interior
/// local minimum of H¹(G_k); fall back to the global argmin when the
/// entropy sequence has none.
pub fn select_k_star(g: &WeightedGraph) -> Result<(SparsificationReport, WeightedGraph)> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(SirdError::TooFewVertices(n));
    }
    let corrected = correct_weights(g)?;
    let delta = correction_delta(g);

    let mut entropies = BTreeMap::new();
    let mut seq = Vec::with_capacity(n - 1);
    for k in 1..n {
        let h = knn_graph(&corrected, k)?.one_dim_entropy()?;
        entropies.insert(k, h);
        seq.push(h);
    }

    // interior strict local minima only; endpoints lack two-sided neighbors
    let mut lmse_ks = Vec::new();
    for k in 2..n - 1 {
        let h = seq[k - 1];
        if h < seq[k - 2] && h < seq[k] {
            lmse_ks.push(k);
        }
    }

    let (k_star, used_fallback) = match lmse_ks.first() {
        Some(&k) => (k, false),
        None => {
            let mut best = 1;
            for k in 2..n {
                if seq[k - 1] < seq[best - 1] {
                    best = k;
                }
            }
            (best, true)
        }
    };

    let sparse = knn_graph(&corrected, k_star)?;
    Ok((
        SparsificationReport { k_star, delta, entropies, lmse_ks, used_fallback },
        sparse,
    ))
}
