//! Encoding trees: rooted hierarchies over vertex subsets, with cached
//! per-node volume, boundary weight, and entropy term.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SirdError};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub(crate) parent: Option<usize>,
    pub(crate) children: Vec<usize>,
    pub(crate) leaf_vertex: Option<usize>,
    /// Sorted vertex subset T_α. Immutable for the lifetime of the node.
    pub(crate) vertices: Vec<usize>,
    /// Cached volume V_α = Σ_{v ∈ T_α} d_v.
    pub(crate) volume: f64,
    /// Cached boundary weight g_α = cut(T_α, V ∖ T_α).
    pub(crate) boundary: f64,
    /// Cached entropy term −(g_α/vol) log₂(V_α / V_{α⁻}); 0 at the root.
    pub(crate) term: f64,
}

impl TreeNode {
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }
    pub fn children(&self) -> &[usize] {
        &self.children
    }
    pub fn is_leaf(&self) -> bool {
        self.leaf_vertex.is_some()
    }
    pub fn leaf_vertex(&self) -> Option<usize> {
        self.leaf_vertex
    }
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn boundary(&self) -> f64 {
        self.boundary
    }
    pub fn term(&self) -> f64 {
        self.term
    }
}

/// Recursive construction spec: the shape of a subtree.
#[derive(Debug, Clone)]
pub enum TreeSpec {
    Leaf(usize),
    Cluster(Vec<TreeSpec>),
}

/// Rooted encoding tree over the vertices of a graph.
///
/// Nodes live in a slab; ids are assigned in creation order and never
/// reused, so deterministic construction yields deterministic ids.
#[derive(Debug, Clone)]
pub struct EncodingTree {
    pub(crate) nodes: Vec<Option<TreeNode>>,
    pub(crate) root: usize,
}

/// Entropy term of a node given the graph volume: −(g/vol)·log₂(V/V_parent).
/// The g = 0 case is pinned to 0 (limit convention).
pub(crate) fn entropy_term(vol: f64, g: f64, v: f64, v_parent: f64) -> f64 {
    if g == 0.0 {
        0.0
    } else {
        -(g / vol) * (v / v_parent).log2()
    }
}

impl EncodingTree {
    /// Root with one singleton leaf per vertex; height 1.
    pub fn flat(g: &WeightedGraph) -> Result<Self> {
        let spec: Vec<TreeSpec> = (0..g.vertex_count()).map(TreeSpec::Leaf).collect();
        Self::from_spec(g, &spec)
    }

    /// Build a tree whose root has the given children subtrees.
    pub fn from_spec(g: &WeightedGraph, root_children: &[TreeSpec]) -> Result<Self> {
        if g.volume() <= 0.0 {
            return Err(SirdError::ZeroVolume);
        }
        let mut tree = EncodingTree { nodes: Vec::new(), root: 0 };
        tree.nodes.push(Some(TreeNode {
            parent: None,
            children: Vec::new(),
            leaf_vertex: None,
            vertices: (0..g.vertex_count()).collect(),
            volume: g.volume(),
            boundary: 0.0,
            term: 0.0,
        }));
        for spec in root_children {
            let child = tree.build_spec(spec, 0)?;
            tree.node_mut(0).children.push(child);
        }
        tree.rebuild_caches(g)?;
        let report = tree.validate(g);
        if !report.is_valid() {
            return Err(SirdError::InvalidTree(report.summary()));
        }
        Ok(tree)
    }

    fn build_spec(&mut self, spec: &TreeSpec, parent: usize) -> Result<usize> {
        let id = self.nodes.len();
        match spec {
            TreeSpec::Leaf(v) => {
                self.nodes.push(Some(TreeNode {
                    parent: Some(parent),
                    children: Vec::new(),
                    leaf_vertex: Some(*v),
                    vertices: vec![*v],
                    volume: 0.0,
                    boundary: 0.0,
                    term: 0.0,
                }));
            }
            TreeSpec::Cluster(children) => {
                self.nodes.push(Some(TreeNode {
                    parent: Some(parent),
                    children: Vec::new(),
                    leaf_vertex: None,
                    vertices: Vec::new(),
                    volume: 0.0,
                    boundary: 0.0,
                    term: 0.0,
                }));
                for c in children {
                    let cid = self.build_spec(c, id)?;
                    self.node_mut(id).children.push(cid);
                }
                let mut verts: Vec<usize> = Vec::new();
                for &cid in self.node(id).children.to_vec().iter() {
                    verts.extend_from_slice(&self.node(cid).vertices);
                }
                verts.sort_unstable();
                self.node_mut(id).vertices = verts;
            }
        }
        Ok(id)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        self.nodes[id].as_ref().expect("live tree node")
    }

    pub(crate) fn node_mut(&mut self, id: usize) -> &mut TreeNode {
        self.nodes[id].as_mut().expect("live tree node")
    }

    /// Slab-allocate a node with fully specified caches. Ids are never
    /// reused.
    pub(crate) fn alloc_node(
        &mut self,
        parent: Option<usize>,
        children: Vec<usize>,
        leaf_vertex: Option<usize>,
        vertices: Vec<usize>,
        volume: f64,
        boundary: f64,
        term: f64,
    ) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Some(TreeNode {
            parent,
            children,
            leaf_vertex,
            vertices,
            volume,
            boundary,
            term,
        }));
        id
    }

    pub(crate) fn free_node(&mut self, id: usize) {
        self.nodes[id] = None;
    }

    pub fn try_node(&self, id: usize) -> Option<&TreeNode> {
        self.nodes.get(id).and_then(|n| n.as_ref())
    }

    pub fn is_alive(&self, id: usize) -> bool {
        self.nodes.get(id).map_or(false, |n| n.is_some())
    }

    /// Ids of all live nodes in ascending order.
    pub fn node_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|_| i))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    pub fn depth(&self, id: usize) -> usize {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.node(cur).parent {
            cur = p;
            d += 1;
        }
        d
    }

    pub fn subtree_height(&self, id: usize) -> usize {
        let node = self.node(id);
        if node.is_leaf() {
            0
        } else {
            1 + node.children.iter().map(|&c| self.subtree_height(c)).max().unwrap_or(0)
        }
    }

    /// Maximum leaf depth with the root at depth 0.
    pub fn height(&self) -> usize {
        self.subtree_height(self.root)
    }

    /// Sum of cached entropy terms over all non-root nodes.
    pub fn cached_entropy(&self) -> f64 {
        self.node_ids().filter(|&id| id != self.root).map(|id| self.node(id).term).sum()
    }

    /// Recompute V, g, and term for every node from the vertex sets.
    pub(crate) fn rebuild_caches(&mut self, g: &WeightedGraph) -> Result<()> {
        let ids: Vec<usize> = self.node_ids().collect();
        let mut mask = vec![false; g.vertex_count()];
        for id in ids {
            let verts = self.node(id).vertices.clone();
            let volume: f64 = verts.iter().map(|&v| g.degree(v)).sum();
            for &v in &verts {
                mask[v] = true;
            }
            let mut boundary = 0.0;
            for &v in &verts {
                for &(u, w) in g.neighbors(v) {
                    if !mask[u] {
                        boundary += w;
                    }
                }
            }
            for &v in &verts {
                mask[v] = false;
            }
            let node = self.node_mut(id);
            node.volume = volume;
            node.boundary = boundary;
            node.term = 0.0;
        }
        // second pass for terms, once every volume is fresh
        let ids: Vec<usize> = self.node_ids().collect();
        for id in ids {
            if let Some(p) = self.node(id).parent {
                if self.node(id).volume <= 0.0 {
                    return Err(SirdError::ZeroSubtreeVolume(id));
                }
                let term = entropy_term(
                    g.volume(),
                    self.node(id).boundary,
                    self.node(id).volume,
                    self.node(p).volume,
                );
                self.node_mut(id).term = term;
            }
        }
        Ok(())
    }

    /// Splice out internal nodes with exactly one child. Their entropy
    /// term is 0 and their child's term is unchanged, so the total
    /// entropy is preserved.
    pub fn prune_pass_through(&mut self) {
        loop {
            let mut target = None;
            for id in self.node_ids() {
                let node = self.node(id);
                if !node.is_leaf() && node.children.len() == 1 && node.parent.is_some() {
                    target = Some(id);
                    break;
                }
            }
            // root with a single internal child: splice the child instead
            if target.is_none() {
                let r = self.node(self.root);
                if r.children.len() == 1 && !self.node(r.children[0]).is_leaf() {
                    target = Some(r.children[0]);
                }
            }
            let Some(id) = target else { break };
            let parent = self.node(id).parent.expect("non-root");
            let children = self.node(id).children.clone();
            let pos = self.node(parent).children.iter().position(|&c| c == id).unwrap();
            let pchildren = &mut self.node_mut(parent).children;
            pchildren.splice(pos..=pos, children.iter().copied());
            // adopted children answer to a parent of different volume;
            // their terms move from the spliced node's denominator to
            // its parent's
            let vol = self.node(self.root).volume;
            let v_parent = self.node(parent).volume;
            for &c in &children {
                let node = self.node_mut(c);
                node.parent = Some(parent);
                node.term = entropy_term(vol, node.boundary, node.volume, v_parent);
            }
            self.nodes[id] = None;
        }
    }

    /// Full validity audit: the five encoding-tree properties plus cache
    /// consistency, rebuilt from scratch.
    pub fn validate(&self, g: &WeightedGraph) -> ValidationReport {
        let mut violations = Vec::new();
        let n = g.vertex_count();
        let mut push = |node: Option<usize>, msg: String| violations.push(Violation { node, message: msg });

        if !self.is_alive(self.root) {
            push(None, "root node is not alive".into());
            return ValidationReport { violations };
        }
        if self.node(self.root).parent.is_some() {
            push(Some(self.root), "root has a parent".into());
        }

        // reachability
        let mut reachable = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if !self.is_alive(id) {
                push(Some(id), "child pointer to dead node".into());
                continue;
            }
            reachable[id] = true;
            for &c in self.node(id).children() {
                match self.try_node(c) {
                    Some(cn) if cn.parent == Some(id) => stack.push(c),
                    Some(_) => push(Some(c), format!("parent pointer does not match owner {id}")),
                    None => push(Some(c), "child pointer to dead node".into()),
                }
            }
        }
        for id in self.node_ids() {
            if !reachable[id] {
                push(Some(id), "node unreachable from root".into());
            }
        }

        // property 1: vertex subsets of V
        for id in self.node_ids() {
            for &v in self.node(id).vertices() {
                if v >= n {
                    push(Some(id), format!("vertex {v} out of range"));
                }
            }
        }
        // property 2: T_λ = V
        let root_set = self.node(self.root).vertices();
        if root_set.len() != n || root_set.iter().enumerate().any(|(i, &v)| v != i) {
            push(Some(self.root), "root vertex set is not all of V".into());
        }
        // properties 4 and 5
        for id in self.node_ids() {
            let node = self.node(id);
            if node.is_leaf() {
                if node.vertices.len() != 1 || !node.children.is_empty() {
                    push(Some(id), "leaf must own exactly one vertex and no children".into());
                }
                if node.leaf_vertex != node.vertices.first().copied() {
                    push(Some(id), "leaf_vertex disagrees with vertex set".into());
                }
            } else {
                if node.children.is_empty() {
                    push(Some(id), "internal node with no children".into());
                }
                let mut union: Vec<usize> = Vec::new();
                for &c in node.children() {
                    if let Some(cn) = self.try_node(c) {
                        union.extend_from_slice(&cn.vertices);
                    }
                }
                union.sort_unstable();
                if union.windows(2).any(|w| w[0] == w[1]) {
                    push(Some(id), "children vertex sets are not disjoint".into());
                } else if union != node.vertices {
                    push(Some(id), "children vertex sets do not union to parent set".into());
                }
            }
        }

        // cache consistency against full recomputation
        let mut mask = vec![false; n];
        for id in self.node_ids() {
            let node = self.node(id);
            let volume: f64 = node.vertices.iter().map(|&v| g.degree(v)).sum();
            for &v in &node.vertices {
                mask[v] = true;
            }
            let mut boundary = 0.0;
            for &v in &node.vertices {
                for &(u, w) in g.neighbors(v) {
                    if !mask[u] {
                        boundary += w;
                    }
                }
            }
            for &v in &node.vertices {
                mask[v] = false;
            }
            if (node.volume - volume).abs() > 1e-9 {
                push(Some(id), format!("stale cached volume {} (recomputed {})", node.volume, volume));
            }
            if (node.boundary - boundary).abs() > 1e-9 {
                push(Some(id), format!("stale cached boundary {} (recomputed {})", node.boundary, boundary));
            }
            if let Some(p) = node.parent {
                let pv: f64 = self.node(p).vertices.iter().map(|&v| g.degree(v)).sum();
                let term = entropy_term(g.volume(), boundary, volume, pv);
                if (node.term - term).abs() > 1e-9 {
                    push(Some(id), format!("stale cached term {} (recomputed {})", node.term, term));
                }
            }
        }

        ValidationReport { violations }
    }

    // --- JSON format ---

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let mut nodes: Vec<JsonNode> = Vec::new();
        let mut ids: Vec<usize> = self.node_ids().collect();
        // root first, then ascending id
        ids.sort_by_key(|&id| (id != self.root, id));
        for id in ids {
            let node = self.node(id);
            nodes.push(JsonNode {
                id,
                parent: node.parent,
                children: node.children.clone(),
                leaf_vertex: node.leaf_vertex,
                v: node.volume,
                g: node.boundary,
                term: node.term,
            });
        }
        let doc = JsonTree { nodes };
        serde_json::to_writer(&mut out, &doc)
            .map_err(|e| SirdError::Parse { file: "tree json".into(), msg: e.to_string() })?;
        writeln!(out)?;
        Ok(())
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_json(&mut f)
    }

    pub fn read_json<R: BufRead>(reader: R, name: &str) -> Result<Self> {
        let doc: JsonTree = serde_json::from_reader(reader)
            .map_err(|e| SirdError::Parse { file: name.to_string(), msg: e.to_string() })?;
        if doc.nodes.is_empty() {
            return Err(SirdError::EmptyTree);
        }
        let max_id = doc.nodes.iter().map(|n| n.id).max().unwrap();
        let mut nodes: Vec<Option<TreeNode>> = vec![None; max_id + 1];
        let mut root = None;
        for jn in &doc.nodes {
            if nodes[jn.id].is_some() {
                return Err(SirdError::Parse {
                    file: name.to_string(),
                    msg: format!("duplicate node id {}", jn.id),
                });
            }
            if jn.parent.is_none() {
                root = Some(jn.id);
            }
            nodes[jn.id] = Some(TreeNode {
                parent: jn.parent,
                children: jn.children.clone(),
                leaf_vertex: jn.leaf_vertex,
                vertices: jn.leaf_vertex.map(|v| vec![v]).unwrap_or_default(),
                volume: jn.v,
                boundary: jn.g,
                term: jn.term,
            });
        }
        let root = root.ok_or_else(|| SirdError::Parse {
            file: name.to_string(),
            msg: "no root node (parent = null) found".into(),
        })?;
        let mut tree = EncodingTree { nodes, root };
        tree.fill_vertex_sets(root)?;
        Ok(tree)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_json(std::io::BufReader::new(f), &path.display().to_string())
    }

    fn fill_vertex_sets(&mut self, id: usize) -> Result<()> {
        if self.node(id).is_leaf() {
            return Ok(());
        }
        let children = self.node(id).children.clone();
        let mut verts = Vec::new();
        for c in children {
            if !self.is_alive(c) {
                return Err(SirdError::InvalidTree(format!("node {id} references dead child {c}")));
            }
            self.fill_vertex_sets(c)?;
            verts.extend_from_slice(&self.node(c).vertices);
        }
        verts.sort_unstable();
        self.node_mut(id).vertices = verts;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonTree {
    nodes: Vec<JsonNode>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    parent: Option<usize>,
    children: Vec<usize>,
    leaf_vertex: Option<usize>,
    #[serde(rename = "V")]
    v: f64,
    g: f64,
    term: f64,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub node: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| match v.node {
                Some(id) => format!("node {id}: {}", v.message),
                None => v.message.clone(),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Entropy term of node `alpha`, recomputed from the vertex sets rather
/// than the caches. Audit path for the incremental bookkeeping.
pub fn node_entropy_term(g: &WeightedGraph, t: &EncodingTree, alpha: usize) -> Result<f64> {
    let node = t.try_node(alpha).ok_or(SirdError::InvalidNode(alpha))?;
    let parent = node.parent.ok_or(SirdError::RootHasNoTerm)?;
    let volume: f64 = node.vertices.iter().map(|&v| g.degree(v)).sum();
    if volume <= 0.0 {
        return Err(SirdError::ZeroSubtreeVolume(alpha));
    }
    let mut mask = vec![false; g.vertex_count()];
    for &v in &node.vertices {
        mask[v] = true;
    }
    let mut boundary = 0.0;
    for &v in &node.vertices {
        for &(u, w) in g.neighbors(v) {
            if !mask[u] {
                boundary += w;
            }
        }
    }
    let parent_volume: f64 = t.node(parent).vertices.iter().map(|&v| g.degree(v)).sum();
    Ok(entropy_term(g.volume(), boundary, volume, parent_volume))
}

/// K-dimensional structural entropy of `g` under the fixed tree `t`:
/// the sum of per-node terms over all non-root nodes, recomputed from
/// the vertex sets.
pub fn tree_entropy(g: &WeightedGraph, t: &EncodingTree) -> Result<f64> {
    // light structural check: leaves must biject onto the vertex set
    let mut seen = vec![false; g.vertex_count()];
    let mut leaves = 0;
    for id in t.node_ids() {
        if let Some(v) = t.node(id).leaf_vertex {
            if v >= g.vertex_count() || seen[v] {
                return Err(SirdError::InvalidTree(format!("leaf vertex {v} duplicated or out of range")));
            }
            seen[v] = true;
            leaves += 1;
        }
    }
    if leaves != g.vertex_count() {
        return Err(SirdError::InvalidTree(format!(
            "{leaves} leaves for {} vertices",
            g.vertex_count()
        )));
    }
    let mut total = 0.0;
    for id in t.node_ids() {
        if id != t.root() {
            total += node_entropy_term(g, t, id)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{k4, two_triangles_bridge, two_triangles_spec};

    #[test]
    fn flat_tree_shape() {
        let g = k4();
        let t = EncodingTree::flat(&g).unwrap();
        assert_eq!(t.node_count(), 5);
        assert_eq!(t.node(t.root()).children().len(), 4);
        assert_eq!(t.height(), 1);
        for &c in t.node(t.root()).children() {
            assert!(t.node(c).is_leaf());
        }
    }

    #[test]
    fn flat_tree_rejects_zero_volume() {
        let g = WeightedGraph::build(3, vec![]).unwrap();
        assert!(matches!(EncodingTree::flat(&g), Err(SirdError::ZeroVolume)));
    }

    #[test]
    fn flat_leaf_caches_equal_degree() {
        let g = two_triangles_bridge(0.0);
        let t = EncodingTree::flat(&g).unwrap();
        for &c in t.node(t.root()).children() {
            let node = t.node(c);
            let v = node.leaf_vertex().unwrap();
            assert!((node.volume() - g.degree(v)).abs() < 1e-12);
            assert!((node.boundary() - g.degree(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_flat_leaf_term() {
        let g = k4();
        let t = EncodingTree::flat(&g).unwrap();
        let leaf = t.node(t.root()).children()[0];
        assert!((node_entropy_term(&g, &t, leaf).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn root_has_no_term() {
        let g = k4();
        let t = EncodingTree::flat(&g).unwrap();
        assert!(matches!(node_entropy_term(&g, &t, t.root()), Err(SirdError::RootHasNoTerm)));
    }

    #[test]
    fn whole_component_cluster_term_is_zero() {
        let g = two_triangles_bridge(0.0);
        let t = EncodingTree::from_spec(&g, &two_triangles_spec()).unwrap();
        let cluster = t.node(t.root()).children()[0];
        assert_eq!(node_entropy_term(&g, &t, cluster).unwrap(), 0.0);
    }

    #[test]
    fn triangle_cluster_leaf_term() {
        // leaf of a triangle cluster: g=2, V=2, parent V=6, vol=12
        let g = two_triangles_bridge(0.0);
        let t = EncodingTree::from_spec(&g, &two_triangles_spec()).unwrap();
        let cluster = t.node(t.root()).children()[0];
        let leaf = t.node(cluster).children()[0];
        let expected = (1.0 / 6.0) * 3.0f64.log2();
        assert!((node_entropy_term(&g, &t, leaf).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.264160).abs() < 1e-5);
    }

    #[test]
    fn flat_entropy_matches_one_dim() {
        for g in [k4(), two_triangles_bridge(0.1)] {
            let t = EncodingTree::flat(&g).unwrap();
            let h = tree_entropy(&g, &t).unwrap();
            assert!((h - g.one_dim_entropy().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_cluster_insertion_preserves_entropy() {
        let g = k4();
        let spec = vec![TreeSpec::Cluster((0..4).map(TreeSpec::Leaf).collect())];
        let t = EncodingTree::from_spec(&g, &spec).unwrap();
        let h = tree_entropy(&g, &t).unwrap();
        assert!((h - g.one_dim_entropy().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn two_triangle_cluster_tree_entropy() {
        let g = two_triangles_bridge(0.0);
        let t = EncodingTree::from_spec(&g, &two_triangles_spec()).unwrap();
        let h = tree_entropy(&g, &t).unwrap();
        assert!((h - 3.0f64.log2()).abs() < 1e-12);
        assert!((h - 1.584963).abs() < 1e-5);
    }

    #[test]
    fn validate_accepts_flat_tree() {
        let g = two_triangles_bridge(0.1);
        let t = EncodingTree::flat(&g).unwrap();
        assert!(t.validate(&g).is_valid());
    }

    #[test]
    fn validate_catches_duplicated_vertex() {
        let g = k4();
        let spec = vec![
            TreeSpec::Cluster(vec![TreeSpec::Leaf(0), TreeSpec::Leaf(1)]),
            TreeSpec::Cluster(vec![TreeSpec::Leaf(1), TreeSpec::Leaf(2), TreeSpec::Leaf(3)]),
        ];
        // from_spec itself validates, so the defect is rejected at build
        assert!(matches!(EncodingTree::from_spec(&g, &spec), Err(SirdError::InvalidTree(_))));
    }

    #[test]
    fn validate_catches_stale_cache() {
        let g = k4();
        let mut t = EncodingTree::flat(&g).unwrap();
        let leaf = t.node(t.root()).children()[0];
        t.node_mut(leaf).volume += 1.0;
        let report = t.validate(&g);
        assert!(!report.is_valid());
        assert!(report.summary().contains("stale cached volume"));
    }

    #[test]
    fn parent_volume_is_children_sum_and_boundary_subadditive() {
        let g = two_triangles_bridge(0.1);
        let t = EncodingTree::from_spec(&g, &two_triangles_spec()).unwrap();
        for id in t.node_ids() {
            let node = t.node(id);
            if node.is_leaf() {
                continue;
            }
            let vsum: f64 = node.children().iter().map(|&c| t.node(c).volume()).sum();
            assert!((node.volume() - vsum).abs() < 1e-12);
            let gsum: f64 = node.children().iter().map(|&c| t.node(c).boundary()).sum();
            assert!(node.boundary() <= gsum + 1e-12);
        }
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let g = two_triangles_bridge(0.1);
        let t = EncodingTree::from_spec(&g, &two_triangles_spec()).unwrap();
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let t2 = EncodingTree::read_json(std::io::Cursor::new(&buf), "mem").unwrap();
        let mut buf2 = Vec::new();
        t2.write_json(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
        assert!(t2.validate(&g).is_valid());
    }

    #[test]
    fn prune_pass_through_keeps_entropy_for_singleton_wrapper() {
        let g = k4();
        let spec = vec![
            TreeSpec::Cluster(vec![TreeSpec::Leaf(0)]),
            TreeSpec::Cluster(vec![TreeSpec::Leaf(1), TreeSpec::Leaf(2)]),
            TreeSpec::Leaf(3),
        ];
        let mut t = EncodingTree::from_spec(&g, &spec).unwrap();
        let h_before = tree_entropy(&g, &t).unwrap();
        t.prune_pass_through();
        assert!(t.validate(&g).is_valid());
        assert!((tree_entropy(&g, &t).unwrap() - h_before).abs() < 1e-12);
        assert!((t.cached_entropy() - h_before).abs() < 1e-12);
    }

    #[test]
    fn prune_pass_through_drops_unary_chain() {
        let g = k4();
        let spec = vec![TreeSpec::Cluster((0..4).map(TreeSpec::Leaf).collect())];
        let mut t = EncodingTree::from_spec(&g, &spec).unwrap();
        let h_before = tree_entropy(&g, &t).unwrap();
        t.prune_pass_through();
        assert_eq!(t.node(t.root()).children().len(), 4);
        assert_eq!(t.height(), 1);
        assert!(t.validate(&g).is_valid());
        assert!((tree_entropy(&g, &t).unwrap() - h_before).abs() < 1e-12);
    }
}
