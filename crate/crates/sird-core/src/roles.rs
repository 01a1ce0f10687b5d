//! Roles, sub-roles, and restricted action spaces read off the optimal
//! encoding tree, with entropy-weighted representation aggregation.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingMatrix;
use crate::error::{Result, SirdError};
use crate::graph::WeightedGraph;
use crate::tree::EncodingTree;

/// A role (child of the root) or sub-role (deeper internal node), with
/// its restricted action space and aggregated representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Role {
    pub id: usize,
    /// Restricted action space A_j: the vertex subset of the tree node.
    pub actions: Vec<usize>,
    pub representation: Vec<f64>,
    /// Internal descendant nodes on the paths from this node to its
    /// leaves, recursively.
    pub subroles: Vec<Role>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoleSet {
    pub roles: Vec<Role>,
}

impl RoleSet {
    /// Partition of the action space induced by the roles: role index
    /// per action id.
    pub fn action_labels(&self, n: usize) -> Vec<usize> {
        let mut labels = vec![usize::MAX; n];
        for (j, role) in self.roles.iter().enumerate() {
            for &a in &role.actions {
                labels[a] = j;
            }
        }
        labels
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer(&mut out, self)
            .map_err(|e| SirdError::Parse { file: "roles json".into(), msg: e.to_string() })?;
        writeln!(out)?;
        Ok(())
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_json(&mut f)
    }

    /// Flat `action_id<TAB>role_id` file for external consumers.
    pub fn write_labels<W: Write>(&self, n: usize, mut out: W) -> Result<()> {
        let labels = self.action_labels(n);
        for (a, j) in labels.iter().enumerate() {
            writeln!(out, "{a}\t{j}")?;
        }
        Ok(())
    }

    pub fn to_labels_file(&self, n: usize, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_labels(n, &mut f)
    }
}

/// Bottom-up entropy-weighted aggregation of child representations:
/// z_α = Σ_i (term_i / Σ_j term_j) · z_i, with a uniform average when
/// every child term is 0. Leaves carry z_a from the embedding.
pub fn aggregate_representation(
    g: &WeightedGraph,
    t: &EncodingTree,
    alpha: usize,
    embedding: &EmbeddingMatrix,
) -> Result<Vec<f64>> {
    let node = t.try_node(alpha).ok_or(SirdError::InvalidNode(alpha))?;
    if let Some(v) = node.leaf_vertex() {
        if v >= embedding.action_count() {
            return Err(SirdError::VertexOutOfRange { v, n: embedding.action_count() });
        }
        return Ok(embedding.row(v).to_vec());
    }
    let children = node.children();
    if children.is_empty() {
        return Err(SirdError::InvalidNode(alpha));
    }
    let d = embedding.dim();
    let terms: Vec<f64> = children.iter().map(|&c| t.node(c).term()).collect();
    let total: f64 = terms.iter().sum();
    let mut z = vec![0.0; d];
    for (i, &c) in children.iter().enumerate() {
        let weight = if total > 0.0 { terms[i] / total } else { 1.0 / children.len() as f64 };
        let zc = aggregate_representation(g, t, c, embedding)?;
        for k in 0..d {
            z[k] += weight * zc[k];
        }
    }
    Ok(z)
}

fn extract_node(
    g: &WeightedGraph,
    t: &EncodingTree,
    id: usize,
    embedding: &EmbeddingMatrix,
) -> Result<Role> {
    let node = t.node(id);
    let subroles = node
        .children()
        .iter()
        .filter(|&&c| !t.node(c).is_leaf())
        .map(|&c| extract_node(g, t, c, embedding))
        .collect::<Result<Vec<Role>>>()?;
    Ok(Role {
        id,
        actions: node.vertices().to_vec(),
        representation: aggregate_representation(g, t, id, embedding)?,
        subroles,
    })
}

/// Read the role hierarchy off an optimized tree: roles are the
/// children of the root, sub-roles the internal nodes below them.
pub fn extract_roles(
    g: &WeightedGraph,
    t: &EncodingTree,
    embedding: &EmbeddingMatrix,
) -> Result<RoleSet> {
    if t.node_count() == 0 || !t.is_alive(t.root()) {
        return Err(SirdError::EmptyTree);
    }
    let roles = t
        .node(t.root())
        .children()
        .iter()
        .map(|&c| extract_node(g, t, c, embedding))
        .collect::<Result<Vec<Role>>>()?;
    Ok(RoleSet { roles })
}
