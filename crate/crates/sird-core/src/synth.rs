//! Seeded synthetic data: random graphs and planted block structure for
//! verification at desk scale.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::embed::{EmbeddingMatrix, TransitionRow, TransitionTable};
use crate::error::Result;
use crate::graph::WeightedGraph;

/// Complete graph with weights uniform in (0, 1].
pub fn random_complete_graph(n: usize, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let w: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
            edges.push((u, v, w));
        }
    }
    WeightedGraph::build(n, edges)
}

/// Connected random graph: a random spanning tree plus extra edges with
/// the given probability. Weights uniform in (0, 1].
pub fn random_connected_graph(n: usize, extra_edge_prob: f64, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let w: f64 = 1.0 - rng.gen::<f64>();
        edges.push((u, v, w));
        present.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present.contains(&(u, v)) && rng.gen::<f64>() < extra_edge_prob {
                let w: f64 = 1.0 - rng.gen::<f64>();
                edges.push((u, v, w));
            }
        }
    }
    WeightedGraph::build(n, edges)
}

/// Embeddings with planted block structure: actions in the same block
/// correlate around `intra`, across blocks around `inter`. Returns the
/// matrix and the planted block label per action.
pub fn planted_block_embeddings(
    block_sizes: &[usize],
    dim: usize,
    intra: f64,
    inter: f64,
    seed: u64,
) -> Result<(EmbeddingMatrix, Vec<usize>)> {
    assert!(inter >= 0.0 && inter <= intra && intra <= 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shared: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let bases: Vec<Vec<f64>> = block_sizes
        .iter()
        .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let w_shared = inter.sqrt();
    let w_block = (intra - inter).sqrt();
    let w_noise = (1.0 - intra).sqrt();

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (b, &size) in block_sizes.iter().enumerate() {
        for _ in 0..size {
            let row: Vec<f64> = (0..dim)
                .map(|k| {
                    let eps: f64 = rng.sample(StandardNormal);
                    w_shared * shared[k] + w_block * bases[b][k] + w_noise * eps
                })
                .collect();
            rows.push(row);
            labels.push(b);
        }
    }
    Ok((EmbeddingMatrix::from_rows(rows)?, labels))
}

/// Transition table with planted block structure: every action in a
/// block shifts the observation by the same effect vector and earns the
/// same base reward. Returns the table and the planted label per action.
pub fn planted_block_transitions(
    block_sizes: &[usize],
    obs_dim: usize,
    samples_per_action: usize,
    noise: f64,
    seed: u64,
) -> Result<(TransitionTable, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let effects: Vec<Vec<f64>> = block_sizes
        .iter()
        .map(|_| (0..obs_dim).map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0).collect())
        .collect();
    let rewards: Vec<f64> = block_sizes
        .iter()
        .map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0)
        .collect();

    let mut labels = Vec::new();
    for (b, &size) in block_sizes.iter().enumerate() {
        for _ in 0..size {
            labels.push(b);
        }
    }
    let mut rows = Vec::new();
    for (a, &b) in labels.iter().enumerate() {
        for _ in 0..samples_per_action {
            let obs: Vec<f64> = (0..obs_dim).map(|_| rng.sample(StandardNormal)).collect();
            let obs_next: Vec<f64> = (0..obs_dim)
                .map(|k| obs[k] + effects[b][k] + noise * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let reward = rewards[b] + noise * rng.sample::<f64, _>(StandardNormal);
            rows.push(TransitionRow { action: a, obs, obs_next, reward });
        }
    }
    Ok((TransitionTable::new(labels.len(), rows)?, labels))
}
