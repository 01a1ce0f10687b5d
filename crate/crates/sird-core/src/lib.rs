//! Structural-entropy-guided role discovery over an action space:
//! correlation graph construction, entropy-minimizing k-NN
//! sparsification, greedy encoding-tree optimization, and hierarchical
//! role extraction, with a brute-force oracle for small instances.

pub mod embed;
pub mod error;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod roles;
pub mod sparsify;
pub mod synth;
pub mod tree;

#[cfg(test)]
pub(crate) mod testutil;

pub use embed::{correlation_graph, learn_embeddings, pearson, EmbeddingMatrix, TransitionTable};
pub use error::{Result, SirdError};
pub use graph::{WeightedGraph, WEIGHT_EPSILON};
pub use optimize::{
    apply_combine, apply_merge, delta_combine, delta_merge, optimize, optimize_scan, OpKind,
    OperatorApplication, OptimizeOutcome,
};
pub use oracle::{enumerate_optimal, OracleResult};
pub use roles::{aggregate_representation, extract_roles, Role, RoleSet};
pub use sparsify::{correct_weights, knn_graph, select_k_star, SparsificationReport};
pub use tree::{node_entropy_term, tree_entropy, EncodingTree, TreeSpec, ValidationReport};
