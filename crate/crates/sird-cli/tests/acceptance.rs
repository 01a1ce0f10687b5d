//! Acceptance gate: one test per criterion, each printing a single
//! PASS line (run with `--nocapture` to see them). Failures panic with
//! the measured values.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sird_cli::{run_pipeline, InputKind, PipelineConfig};
use sird_core::synth::{planted_block_embeddings, random_complete_graph, random_connected_graph};
use sird_core::{
    apply_combine, apply_merge, correct_weights, correlation_graph, delta_combine, delta_merge,
    enumerate_optimal, knn_graph, optimize, select_k_star, tree_entropy, EncodingTree,
    WeightedGraph,
};

fn pass(n: usize, msg: &str) {
    println!("criterion {n} PASS: {msg}");
}

/// Root partition of an optimized tree as a label per vertex.
fn root_labels(t: &EncodingTree, n: usize) -> Vec<usize> {
    let mut labels = vec![usize::MAX; n];
    for (i, &c) in t.node(t.root()).children().iter().enumerate() {
        for &v in t.node(c).vertices() {
            labels[v] = i;
        }
    }
    labels
}

fn sorted_partition(t: &EncodingTree) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = t
        .node(t.root())
        .children()
        .iter()
        .map(|&c| t.node(c).vertices().to_vec())
        .collect();
    blocks.sort();
    blocks
}

/// Adjusted Rand index between two labelings.
fn ari(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for i in 0..n {
        *table.entry((a[i], b[i])).or_insert(0) += 1;
        *rows.entry(a[i]).or_insert(0) += 1;
        *cols.entry(b[i]).or_insert(0) += 1;
    }
    let c2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ij: f64 = table.values().map(|&x| c2(x)).sum();
    let sum_a: f64 = rows.values().map(|&x| c2(x)).sum();
    let sum_b: f64 = cols.values().map(|&x| c2(x)).sum();
    let expected = sum_a * sum_b / c2(n as u64);
    let max = 0.5 * (sum_a + sum_b);
    if (max - expected).abs() < 1e-15 {
        return 1.0;
    }
    (sum_ij - expected) / (max - expected)
}

fn two_triangles_bridge() -> WeightedGraph {
    WeightedGraph::build(
        6,
        vec![
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 2, 1.0),
            (2, 3, 0.1),
            (3, 4, 1.0),
            (3, 5, 1.0),
            (4, 5, 1.0),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_1_flat_tree_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut max_dev: f64 = 0.0;
    for i in 0..200u64 {
        let n = rng.gen_range(3..=32);
        let g = random_connected_graph(n, 0.3, 1000 + i).unwrap();
        let flat = EncodingTree::flat(&g).unwrap();
        let dev = (tree_entropy(&g, &flat).unwrap() - g.one_dim_entropy().unwrap()).abs();
        max_dev = max_dev.max(dev);
        assert!(dev <= 1e-9, "graph {i}: flat tree deviates by {dev:e}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(1, &format!("flat-tree equivalence on 200 graphs, max deviation {max_dev:.2e}, {elapsed:.2?}"));
}

#[test]
fn criterion_2_analytic_entropy_values() {
    let k4 = WeightedGraph::build(
        4,
        vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
    )
    .unwrap();
    let h1 = k4.one_dim_entropy().unwrap();
    assert!((h1 - 2.0).abs() <= 1e-12, "K4 H1 = {h1}");

    // two disjoint unit triangles under the triangle partition
    let mut edges = Vec::new();
    for t in [0usize, 3] {
        edges.push((t, t + 1, 1.0));
        edges.push((t, t + 2, 1.0));
        edges.push((t + 1, t + 2, 1.0));
    }
    let g = WeightedGraph::build(6, edges).unwrap();
    let spec = vec![
        sird_core::TreeSpec::Cluster(vec![
            sird_core::TreeSpec::Leaf(0),
            sird_core::TreeSpec::Leaf(1),
            sird_core::TreeSpec::Leaf(2),
        ]),
        sird_core::TreeSpec::Cluster(vec![
            sird_core::TreeSpec::Leaf(3),
            sird_core::TreeSpec::Leaf(4),
            sird_core::TreeSpec::Leaf(5),
        ]),
    ];
    let t = EncodingTree::from_spec(&g, &spec).unwrap();
    let h = tree_entropy(&g, &t).unwrap();
    assert!((h - 1.584963).abs() <= 1e-5, "cluster tree entropy = {h}");
    pass(2, &format!("K4 H1 = {h1}, two-triangle cluster tree = {h:.6}"));
}

#[test]
fn criterion_3_delta_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut applied = 0usize;
    let mut max_dev: f64 = 0.0;
    'outer: loop {
        let n = rng.gen_range(4..=20);
        let g = random_connected_graph(n, 0.4, 3000 + applied as u64).unwrap();
        let mut t = EncodingTree::flat(&g).unwrap();
        for _ in 0..40 {
            let internals: Vec<usize> =
                t.node_ids().filter(|&id| !t.node(id).is_leaf()).collect();
            let parent = internals[rng.gen_range(0..internals.len())];
            let children = t.node(parent).children().to_vec();
            if children.len() < 2 {
                continue;
            }
            let i = rng.gen_range(0..children.len());
            let mut j = rng.gen_range(0..children.len() - 1);
            if j >= i {
                j += 1;
            }
            let (b1, b2) = (children[i.min(j)], children[i.max(j)]);
            let before = tree_entropy(&g, &t).unwrap();
            let predicted = if rng.gen_bool(0.5) {
                match delta_merge(&g, &t, b1, b2) {
                    Ok(d) => {
                        apply_merge(&g, &mut t, b1, b2).unwrap();
                        d
                    }
                    Err(_) => continue,
                }
            } else {
                match delta_combine(&g, &t, b1, b2, 4) {
                    Ok(d) => {
                        apply_combine(&g, &mut t, b1, b2, 4).unwrap();
                        d
                    }
                    Err(_) => continue,
                }
            };
            let after = tree_entropy(&g, &t).unwrap();
            let dev = ((before - after) - predicted).abs();
            max_dev = max_dev.max(dev);
            assert!(dev <= 1e-9, "application {applied}: predicted {predicted}, actual {}", before - after);
            applied += 1;
            if applied >= 1000 {
                break 'outer;
            }
        }
    }
    pass(3, &format!("1000 operator applications, max |predicted - recomputed| = {max_dev:.2e}"));
}

#[test]
fn criterion_4_oracle_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100u64 {
        let n = rng.gen_range(3..=6);
        let g = random_connected_graph(n, 0.5, 4000 + i).unwrap();
        let flat = EncodingTree::flat(&g).unwrap();
        let flat_h = tree_entropy(&g, &flat).unwrap();
        let greedy = optimize(&g, &flat, 2).unwrap();
        let greedy_h = greedy.tree.cached_entropy();
        let oracle = enumerate_optimal(&g, 2, 7).unwrap();
        assert!(
            greedy_h >= oracle.min_entropy - 1e-9 && greedy_h <= flat_h + 1e-9,
            "graph {i}: greedy {greedy_h}, oracle {}, flat {flat_h}",
            oracle.min_entropy
        );
    }

    let g = two_triangles_bridge();
    let flat = EncodingTree::flat(&g).unwrap();
    let greedy = optimize(&g, &flat, 2).unwrap();
    let oracle = enumerate_optimal(&g, 2, 7).unwrap();
    let mut oracle_partition = oracle.optimal_partition();
    oracle_partition.sort();
    assert_eq!(sorted_partition(&greedy.tree), oracle_partition);
    pass(4, &format!(
        "100 graphs bounded by oracle and flat; bridge instance partition {oracle_partition:?}"
    ));
}

#[test]
fn criterion_5_planted_role_recovery() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut exact = 0usize;
    for seed in 0..20u64 {
        let (e, planted) = planted_block_embeddings(&[5, 5, 5], 32, 0.9, 0.05, seed).unwrap();
        let input = dir.path().join(format!("emb{seed}.csv"));
        e.to_csv_file(&input).unwrap();
        let out_dir = dir.path().join(format!("run{seed}"));
        let artifacts = run_pipeline(&PipelineConfig {
            input,
            kind: InputKind::Embeddings,
            dim: 2,
            height: 2,
            seed,
            out_dir,
        })
        .unwrap();
        let labels = read_labels(&artifacts.labels, 15);
        if artifacts.role_count == 3 && (ari(&labels, &planted) - 1.0).abs() < 1e-12 {
            exact += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(exact >= 19, "exact recovery in only {exact}/20 seeds");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(5, &format!("3 roles with ARI = 1.0 in {exact}/20 seeds, {elapsed:.2?}"));
}

fn read_labels(path: &Path, n: usize) -> Vec<usize> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut labels = vec![usize::MAX; n];
    for line in text.lines() {
        let mut parts = line.split('\t');
        let a: usize = parts.next().unwrap().parse().unwrap();
        let r: usize = parts.next().unwrap().parse().unwrap();
        labels[a] = r;
    }
    labels
}

#[test]
fn criterion_6_scale_invariance() {
    let (e, _) = planted_block_embeddings(&[4, 4, 4], 24, 0.9, 0.05, 6).unwrap();
    let g = correlation_graph(&e).unwrap();
    let base_h1 = g.one_dim_entropy().unwrap();
    let (base_report, base_sparse) = select_k_star(&g).unwrap();
    let base_tree = optimize(&base_sparse, &EncodingTree::flat(&base_sparse).unwrap(), 2).unwrap();
    let base_partition = sorted_partition(&base_tree.tree);
    for c in [0.01, 1.0, 100.0] {
        let gc = g.scaled(c).unwrap();
        assert!((gc.one_dim_entropy().unwrap() - base_h1).abs() <= 1e-9);
        let (report, sparse) = select_k_star(&gc).unwrap();
        assert_eq!(report.k_star, base_report.k_star, "k* changed at c = {c}");
        let tree = optimize(&sparse, &EncodingTree::flat(&sparse).unwrap(), 2).unwrap();
        assert!(
            (tree.tree.cached_entropy() - base_tree.tree.cached_entropy()).abs() <= 1e-9,
            "tree entropy changed at c = {c}"
        );
        assert_eq!(sorted_partition(&tree.tree), base_partition, "partition changed at c = {c}");
    }
    pass(6, &format!(
        "H1, tree entropy, k* = {}, and partition invariant under c in {{0.01, 1, 100}}",
        base_report.k_star
    ));
}

#[test]
fn criterion_7_sparsification_correctness() {
    let mut checked = 0usize;
    for seed in 0..20u64 {
        let g = random_complete_graph(5 + (seed as usize % 11), 7000 + seed).unwrap();
        let (report, _) = select_k_star(&g).unwrap();
        let corrected = correct_weights(&g).unwrap();
        for (&k, &h) in &report.entropies {
            let independent = knn_graph(&corrected, k).unwrap().one_dim_entropy().unwrap();
            assert!((h - independent).abs() <= 1e-9, "seed {seed}, k = {k}");
        }
        if report.used_fallback {
            assert!(report.lmse_ks.is_empty());
            let (&min_k, _) = report
                .entropies
                .iter()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(a.0.cmp(b.0)))
                .unwrap();
            assert_eq!(report.k_star, min_k, "seed {seed}: fallback is not the global argmin");
        } else {
            let k = report.k_star;
            assert!(report.lmse_ks.contains(&k));
            let n = g.vertex_count();
            assert!(k >= 2 && k <= n - 2, "seed {seed}: k* = {k} not interior");
            assert!(report.entropies[&k] < report.entropies[&(k - 1)]);
            assert!(report.entropies[&k] < report.entropies[&(k + 1)]);
        }
        checked += 1;
    }
    pass(7, &format!("entropies match recomputation and k* well-founded on {checked} graphs"));
}

#[test]
fn criterion_8_complexity_smoke() {
    let mut times = Vec::new();
    for &n in &[128usize, 256, 512] {
        let g = random_complete_graph(n, 8000 + n as u64).unwrap();
        let sparse = knn_graph(&correct_weights(&g).unwrap(), 8).unwrap();
        let flat = EncodingTree::flat(&sparse).unwrap();
        // best of two runs to damp scheduler noise
        let mut best = f64::INFINITY;
        for _ in 0..2 {
            let start = Instant::now();
            let outcome = optimize(&sparse, &flat, 2).unwrap();
            best = best.min(start.elapsed().as_secs_f64());
            assert!(outcome.tree.cached_entropy().is_finite());
        }
        times.push(best);
    }
    let r1 = times[1] / times[0];
    let r2 = times[2] / times[1];
    assert!(r1 <= 5.0 && r2 <= 5.0, "doubling ratios {r1:.2}, {r2:.2} exceed 5");
    pass(8, &format!(
        "optimize times {:.3}s / {:.3}s / {:.3}s, doubling ratios {r1:.2} and {r2:.2}",
        times[0], times[1], times[2]
    ));
}

#[test]
fn criterion_9_pipeline_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (e, _) = planted_block_embeddings(&[4, 4], 16, 0.9, 0.05, 9).unwrap();
    let input = dir.path().join("emb.csv");
    e.to_csv_file(&input).unwrap();

    let run = |out: &Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_sird"))
            .args([
                "pipeline",
                "--in",
                input.to_str().unwrap(),
                "--kind",
                "embeddings",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    run(&out1);
    run(&out2);

    let mut names: Vec<String> = std::fs::read_dir(&out1)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for name in &names {
        let a = std::fs::read(out1.join(name)).unwrap();
        let b = std::fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between runs");
    }
    pass(9, &format!("two runs produced byte-identical artifacts: {}", names.join(", ")));
}
