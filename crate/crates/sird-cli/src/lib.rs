//! Deterministic file-based driver: wires the embedding, correlation,
//! sparsification, clustering, and role extraction stages together and
//! persists every intermediate artifact.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sird_core::{
    correlation_graph, extract_roles, learn_embeddings, optimize, EmbeddingMatrix, EncodingTree,
    RoleSet, SirdError, SparsificationReport, TransitionTable, WeightedGraph,
};

/// Which kind of file feeds the pipeline; later kinds skip the earlier
/// stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Transitions CSV: the embedding learner runs first.
    Transitions,
    /// Embeddings CSV: starts at correlation graph construction.
    Embeddings,
    /// Graph TSV: starts at sparsification; roles fall back to
    /// indicator representations since no embeddings exist.
    Graph,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub kind: InputKind,
    /// Embedding dimension d, used only for transitions input.
    pub dim: usize,
    /// Encoding tree height cap K.
    pub height: usize,
    /// Recorded for provenance when the input came from a seeded
    /// generator; the pipeline itself is deterministic.
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Paths of everything the pipeline wrote, plus headline numbers.
#[derive(Debug)]
pub struct PipelineArtifacts {
    pub embeddings: Option<PathBuf>,
    pub graph: PathBuf,
    pub sparse: PathBuf,
    pub report: PathBuf,
    pub tree: PathBuf,
    pub trace: PathBuf,
    pub roles: PathBuf,
    pub labels: PathBuf,
    pub k_star: usize,
    pub entropy: f64,
    pub role_count: usize,
}

/// A pipeline failure tagged with the stage that raised it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub source: SirdError,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.source)
    }
}

impl std::error::Error for StageError {}

/// Process exit code for an error: 1 malformed input, 2 structurally
/// valid but unusable data, 3 internal invariant breach.
pub fn exit_code(err: &SirdError) -> i32 {
    use SirdError::*;
    match err {
        Io(_) | Parse { .. } | SelfLoop(_) | DuplicateEdge(..) | NegativeWeight { .. }
        | VertexOutOfRange { .. } => 1,
        ZeroVolume | ZeroDegreeVertex(_) | MissingAction(_) | DimensionTooLarge { .. }
        | DimensionTooSmall(_) | TooFewActions(_) | EmptyGraph | KOutOfRange { .. }
        | TooFewVertices(_) | GraphTooLarge { .. } | EmptyTree => 2,
        OverlappingSets(_) | RootHasNoTerm | ZeroSubtreeVolume(_) | InvalidTree(_)
        | NotBrothers(..) | HeightCapExceeded { .. } | LeafOperand(_)
        | InvalidInitialTree(_) | InvalidNode(_) => 3,
    }
}

fn stage<T>(name: &'static str, r: sird_core::Result<T>) -> Result<T, StageError> {
    r.map_err(|source| StageError { stage: name, source })
}

fn config_error(msg: String) -> StageError {
    StageError {
        stage: "config",
        source: SirdError::Parse { file: "config".into(), msg },
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), StageError> {
        if self.height < 2 {
            return Err(config_error(format!("height must be at least 2, got {}", self.height)));
        }
        if self.dim < 2 {
            return Err(config_error(format!("dim must be at least 2, got {}", self.dim)));
        }
        Ok(())
    }
}

/// Indicator embeddings for graph-only input: row a is the a-th
/// standard basis vector, so role representations become membership
/// profiles.
fn indicator_embeddings(n: usize) -> sird_core::Result<EmbeddingMatrix> {
    EmbeddingMatrix::from_rows(
        (0..n)
            .map(|a| (0..n).map(|k| if k == a { 1.0 } else { 0.0 }).collect())
            .collect(),
    )
}

pub fn write_trace_file(path: &Path, trace: &[sird_core::OperatorApplication]) -> sird_core::Result<()> {
    let mut out = Vec::new();
    for op in trace {
        let line = serde_json::to_string(op)
            .map_err(|e| SirdError::Parse { file: "trace".into(), msg: e.to_string() })?;
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_report(path: &Path, report: &SparsificationReport) -> sird_core::Result<()> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| SirdError::Parse { file: "report".into(), msg: e.to_string() })?;
    let mut f = fs::File::create(path)?;
    writeln!(f, "{json}")?;
    Ok(())
}

/// End-to-end run; every artifact write is deterministic, so identical
/// config plus inputs give byte-identical outputs.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineArtifacts, StageError> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| StageError { stage: "setup", source: SirdError::Io(e) })?;
    let out = |name: &str| cfg.out_dir.join(name);

    let (embedding, graph, embeddings_path) = match cfg.kind {
        InputKind::Transitions => {
            let table = stage("embed", TransitionTable::from_csv_file(&cfg.input))?;
            let e = stage("embed", learn_embeddings(&table, cfg.dim))?;
            let path = out("embeddings.csv");
            stage("embed", e.to_csv_file(&path))?;
            let g = stage("graph", correlation_graph(&e))?;
            (e, g, Some(path))
        }
        InputKind::Embeddings => {
            let e = stage("embed", EmbeddingMatrix::from_csv_file(&cfg.input))?;
            let path = out("embeddings.csv");
            stage("embed", e.to_csv_file(&path))?;
            let g = stage("graph", correlation_graph(&e))?;
            (e, g, Some(path))
        }
        InputKind::Graph => {
            let g = stage("graph", WeightedGraph::from_tsv_file(&cfg.input))?;
            let e = stage("graph", indicator_embeddings(g.vertex_count()))?;
            (e, g, None)
        }
    };

    let graph_path = out("graph.tsv");
    stage("graph", graph.to_tsv_file(&graph_path))?;

    let (report, sparse) = stage("sparsify", sird_core::select_k_star(&graph))?;
    let sparse_path = out("sparse.tsv");
    stage("sparsify", sparse.to_tsv_file(&sparse_path))?;
    let report_path = out("report.json");
    stage("sparsify", write_report(&report_path, &report))?;

    let flat = stage("cluster", EncodingTree::flat(&sparse))?;
    let outcome = stage("cluster", optimize(&sparse, &flat, cfg.height))?;
    let tree_path = out("tree.json");
    stage("cluster", outcome.tree.to_json_file(&tree_path))?;
    let trace_path = out("trace.jsonl");
    stage("cluster", write_trace_file(&trace_path, &outcome.trace))?;

    let roles: RoleSet = stage("roles", extract_roles(&sparse, &outcome.tree, &embedding))?;
    let roles_path = out("roles.json");
    stage("roles", roles.to_json_file(&roles_path))?;
    let labels_path = out("labels.tsv");
    stage("roles", roles.to_labels_file(sparse.vertex_count(), &labels_path))?;

    Ok(PipelineArtifacts {
        embeddings: embeddings_path,
        graph: graph_path,
        sparse: sparse_path,
        report: report_path,
        tree: tree_path,
        trace: trace_path,
        roles: roles_path,
        labels: labels_path,
        k_star: report.k_star,
        entropy: outcome.tree.cached_entropy(),
        role_count: roles.roles.len(),
    })
}
