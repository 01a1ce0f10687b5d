use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sird_cli::{exit_code, run_pipeline, InputKind, PipelineConfig, StageError};
use sird_core::{
    correlation_graph, enumerate_optimal, extract_roles, learn_embeddings, optimize,
    select_k_star, EmbeddingMatrix, EncodingTree, TransitionTable, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "sird", version, about = "Structural-entropy-guided role discovery pipeline")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Transitions,
    Embeddings,
    Graph,
}

impl From<KindArg> for InputKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Transitions => InputKind::Transitions,
            KindArg::Embeddings => InputKind::Embeddings,
            KindArg::Graph => InputKind::Graph,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Learn action embeddings from a transitions CSV.
    Embed {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Build the complete correlation graph from an embeddings CSV.
    Graph {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Entropy-guided k-NN sparsification of a graph TSV.
    Sparsify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Greedy encoding-tree optimization of a sparse graph TSV.
    Cluster {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Extract roles from an optimized tree JSON.
    Roles {
        /// Tree JSON produced by `cluster`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Graph TSV the tree was optimized on.
        #[arg(long)]
        graph: PathBuf,
        /// Embeddings CSV for representation aggregation.
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Brute-force minimum entropy for small graphs (debugging).
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        height: usize,
    },
    /// Run every stage end to end into an output directory.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "transitions")]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cmd: Cmd) -> Result<(), StageError> {
    let stage = |name: &'static str| {
        move |source: sird_core::SirdError| StageError { stage: name, source }
    };
    match cmd {
        Cmd::Embed { input, out, dim } => {
            let table = TransitionTable::from_csv_file(&input).map_err(stage("embed"))?;
            let e = learn_embeddings(&table, dim).map_err(stage("embed"))?;
            e.to_csv_file(&out).map_err(stage("embed"))?;
            println!("wrote {} ({} actions, dim {})", out.display(), e.action_count(), e.dim());
        }
        Cmd::Graph { input, out } => {
            let e = EmbeddingMatrix::from_csv_file(&input).map_err(stage("graph"))?;
            let g = correlation_graph(&e).map_err(stage("graph"))?;
            g.to_tsv_file(&out).map_err(stage("graph"))?;
            println!("wrote {} ({} vertices, {} edges)", out.display(), g.vertex_count(), g.edges().len());
        }
        Cmd::Sparsify { input, out, report } => {
            let g = WeightedGraph::from_tsv_file(&input).map_err(stage("sparsify"))?;
            let (rep, sparse) = select_k_star(&g).map_err(stage("sparsify"))?;
            sparse.to_tsv_file(&out).map_err(stage("sparsify"))?;
            if let Some(path) = report {
                sird_cli::write_report(&path, &rep).map_err(stage("sparsify"))?;
            }
            println!("wrote {} (k* = {}, {} edges)", out.display(), rep.k_star, sparse.edges().len());
        }
        Cmd::Cluster { input, height, out, trace } => {
            let g = WeightedGraph::from_tsv_file(&input).map_err(stage("cluster"))?;
            let flat = EncodingTree::flat(&g).map_err(stage("cluster"))?;
            let outcome = optimize(&g, &flat, height).map_err(stage("cluster"))?;
            outcome.tree.to_json_file(&out).map_err(stage("cluster"))?;
            if let Some(path) = trace {
                sird_cli::write_trace_file(&path, &outcome.trace).map_err(stage("cluster"))?;
            }
            println!(
                "wrote {} (entropy {:.6}, {} operator applications)",
                out.display(),
                outcome.tree.cached_entropy(),
                outcome.trace.len()
            );
        }
        Cmd::Roles { input, graph, embeddings, out, labels } => {
            let g = WeightedGraph::from_tsv_file(&graph).map_err(stage("roles"))?;
            let t = EncodingTree::from_json_file(&input).map_err(stage("roles"))?;
            let e = EmbeddingMatrix::from_csv_file(&embeddings).map_err(stage("roles"))?;
            let roles = extract_roles(&g, &t, &e).map_err(stage("roles"))?;
            roles.to_json_file(&out).map_err(stage("roles"))?;
            if let Some(path) = labels {
                roles.to_labels_file(g.vertex_count(), &path).map_err(stage("roles"))?;
            }
            println!("wrote {} ({} roles)", out.display(), roles.roles.len());
        }
        Cmd::Oracle { input, height } => {
            let g = WeightedGraph::from_tsv_file(&input).map_err(stage("oracle"))?;
            let result = enumerate_optimal(&g, height, 7).map_err(stage("oracle"))?;
            println!("min_entropy = {:.12}", result.min_entropy);
            println!("enumerated  = {}", result.enumerated_count);
            println!("partition   = {:?}", result.optimal_partition());
        }
        Cmd::Pipeline { input, kind, out, dim, height, seed } => {
            let cfg = PipelineConfig {
                input,
                kind: kind.into(),
                dim,
                height,
                seed,
                out_dir: out,
            };
            let artifacts = run_pipeline(&cfg)?;
            println!(
                "pipeline complete: k* = {}, entropy {:.6}, {} roles, artifacts in {}",
                artifacts.k_star,
                artifacts.entropy,
                artifacts.role_count,
                cfg.out_dir.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error [{}]: {}", err.stage, err.source);
            ExitCode::from(exit_code(&err.source) as u8)
        }
    }
}
