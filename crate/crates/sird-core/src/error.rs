use thiserror::Error;

/// Errors produced by graph construction, entropy evaluation, and the
/// pipeline stages built on top of them.
#[derive(Debug, Error)]
pub enum SirdError {
    // graph construction
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("negative weight {w} on edge ({u}, {v})")]
    NegativeWeight { u: usize, v: usize, w: f64 },
    #[error("vertex {v} out of range for graph of {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("vertex sets overlap (shared vertex {0})")]
    OverlappingSets(usize),

    // entropy
    #[error("graph has zero volume")]
    ZeroVolume,
    #[error("vertex {0} has zero degree")]
    ZeroDegreeVertex(usize),

    // embedding
    #[error("action {0} never appears in the transition table")]
    MissingAction(usize),
    #[error("embedding dimension {d} exceeds limit {max}")]
    DimensionTooLarge { d: usize, max: usize },
    #[error("embedding dimension {0} too small for correlation (need >= 2)")]
    DimensionTooSmall(usize),
    #[error("need at least 2 actions to build a correlation graph, got {0}")]
    TooFewActions(usize),

    // sparsification
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("k = {k} out of range [1, {max}]")]
    KOutOfRange { k: usize, max: usize },
    #[error("need at least 3 vertices for neighbor selection, got {0}")]
    TooFewVertices(usize),

    // encoding tree
    #[error("root node carries no entropy term")]
    RootHasNoTerm,
    #[error("node {0} has zero subtree volume")]
    ZeroSubtreeVolume(usize),
    #[error("invalid encoding tree: {0}")]
    InvalidTree(String),

    // optimizer
    #[error("nodes {0} and {1} are not brothers")]
    NotBrothers(usize, usize),
    #[error("combine at node {node} would exceed height cap {cap}")]
    HeightCapExceeded { node: usize, cap: usize },
    #[error("merge operand {0} is a leaf")]
    LeafOperand(usize),
    #[error("initial tree invalid: {0}")]
    InvalidInitialTree(String),

    // role extraction
    #[error("node {0} does not exist in the tree")]
    InvalidNode(usize),
    #[error("encoding tree is empty")]
    EmptyTree,

    // oracle
    #[error("graph of {n} vertices exceeds oracle limit {max}")]
    GraphTooLarge { n: usize, max: usize },

    // file formats
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error in {file}: {msg}")]
    Parse { file: String, msg: String },
}

pub type Result<T> = std::result::Result<T, SirdError>;
