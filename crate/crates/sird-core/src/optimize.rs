//! Greedy K-dimensional structural entropy minimization via merge and
//! combine operators on an encoding tree.
//!
//! Two interchangeable drivers share the same delta formulas and
//! tie-breaking, so they produce identical operator sequences:
//! [`optimize`] keeps candidates in lazily invalidated priority queues,
//! [`optimize_scan`] rescans every brother pair each iteration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SirdError};
use crate::graph::WeightedGraph;
use crate::tree::{entropy_term, EncodingTree};

/// Strict-improvement threshold. A literal "ΔSE > 0" loops forever on
/// floating-point noise.
pub const EPS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Merge,
    Combine,
}

/// One applied operator, as recorded in the optimization trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorApplication {
    pub kind: OpKind,
    pub beta1: usize,
    pub beta2: usize,
    /// Predicted entropy reduction; positive means improvement.
    pub delta_se: f64,
    /// Tree height after the application.
    pub height: usize,
}

/// Optimized tree plus the operator sequence that produced it.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub tree: EncodingTree,
    pub trace: Vec<OperatorApplication>,
}

fn brothers_parent(t: &EncodingTree, b1: usize, b2: usize) -> Result<usize> {
    if b1 == b2 {
        return Err(SirdError::NotBrothers(b1, b2));
    }
    let p1 = t.try_node(b1).and_then(|n| n.parent());
    let p2 = t.try_node(b2).and_then(|n| n.parent());
    match (p1, p2) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(SirdError::NotBrothers(b1, b2)),
    }
}

/// Cut weight between the vertex sets of two nodes. Iterates the set of
/// the lower-id node against a mask of the other, so the summation order
/// is deterministic for a given pair.
fn node_cut(g: &WeightedGraph, t: &EncodingTree, b1: usize, b2: usize, mask: &mut [bool]) -> f64 {
    let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
    let lo_verts = t.node(lo).vertices();
    let hi_verts = t.node(hi).vertices();
    // leaf-leaf pairs dominate; resolve them by direct edge lookup
    if lo_verts.len() == 1 && hi_verts.len() == 1 {
        return g.edge_weight(lo_verts[0], hi_verts[0]);
    }
    for &v in hi_verts {
        mask[v] = true;
    }
    let cut = g.cut_against_mask(lo_verts, mask);
    for &v in hi_verts {
        mask[v] = false;
    }
    cut
}

/// ΔSE of inserting a new parent over (b1, b2): only the new node's term
/// and the two operands' denominators change.
fn combine_dse(vol: f64, v_parent: f64, v1: f64, g1: f64, v2: f64, g2: f64, cut: f64) -> f64 {
    let v_new = v1 + v2;
    let g_new = g1 + g2 - 2.0 * cut;
    let old = entropy_term(vol, g1, v1, v_parent) + entropy_term(vol, g2, v2, v_parent);
    let new = entropy_term(vol, g_new, v_new, v_parent)
        + entropy_term(vol, g1, v1, v_new)
        + entropy_term(vol, g2, v2, v_new);
    old - new
}

/// ΔSE of replacing (b1, b2) by one node adopting all their children.
/// `s1`, `s2` are the boundary-weight sums over the operands' children,
/// whose terms shift denominator from V_b to V_new.
fn merge_dse(
    vol: f64,
    v_parent: f64,
    v1: f64,
    g1: f64,
    s1: f64,
    v2: f64,
    g2: f64,
    s2: f64,
    cut: f64,
) -> f64 {
    let v_new = v1 + v2;
    let g_new = g1 + g2 - 2.0 * cut;
    let old = entropy_term(vol, g1, v1, v_parent) + entropy_term(vol, g2, v2, v_parent);
    let new = entropy_term(vol, g_new, v_new, v_parent);
    let child_shift = (s1 / vol) * (v1 / v_new).log2() + (s2 / vol) * (v2 / v_new).log2();
    old - new + child_shift
}

fn children_boundary_sum(t: &EncodingTree, id: usize) -> f64 {
    t.node(id).children().iter().map(|&c| t.node(c).boundary()).sum()
}

/// Height of the tree if (b1, b2) were combined under their parent.
fn height_after_combine(t: &EncodingTree, parent: usize, b1: usize, b2: usize) -> usize {
    let local = t.depth(parent) + 2 + t.subtree_height(b1).max(t.subtree_height(b2));
    local.max(t.height())
}

/// Predicted entropy reduction of combining brothers (b1, b2), enforcing
/// the height cap.
pub fn delta_combine(
    g: &WeightedGraph,
    t: &EncodingTree,
    b1: usize,
    b2: usize,
    height_cap: usize,
) -> Result<f64> {
    let parent = brothers_parent(t, b1, b2)?;
    if height_after_combine(t, parent, b1, b2) > height_cap {
        return Err(SirdError::HeightCapExceeded { node: b1, cap: height_cap });
    }
    let mut mask = vec![false; g.vertex_count()];
    let cut = node_cut(g, t, b1, b2, &mut mask);
    let (n1, n2, np) = (t.node(b1), t.node(b2), t.node(parent));
    Ok(combine_dse(
        g.volume(),
        np.volume(),
        n1.volume(),
        n1.boundary(),
        n2.volume(),
        n2.boundary(),
        cut,
    ))
}

/// Predicted entropy reduction of merging non-leaf brothers (b1, b2).
pub fn delta_merge(g: &WeightedGraph, t: &EncodingTree, b1: usize, b2: usize) -> Result<f64> {
    let parent = brothers_parent(t, b1, b2)?;
    for b in [b1, b2] {
        if t.node(b).is_leaf() {
            return Err(SirdError::LeafOperand(b));
        }
    }
    let mut mask = vec![false; g.vertex_count()];
    let cut = node_cut(g, t, b1, b2, &mut mask);
    let (n1, n2, np) = (t.node(b1), t.node(b2), t.node(parent));
    Ok(merge_dse(
        g.volume(),
        np.volume(),
        n1.volume(),
        n1.boundary(),
        children_boundary_sum(t, b1),
        n2.volume(),
        n2.boundary(),
        children_boundary_sum(t, b2),
        cut,
    ))
}

fn merged_vertices(t: &EncodingTree, b1: usize, b2: usize) -> Vec<usize> {
    let mut verts: Vec<usize> = t.node(b1).vertices().to_vec();
    verts.extend_from_slice(t.node(b2).vertices());
    verts.sort_unstable();
    verts
}

/// Insert a new parent over brothers (b1, b2). Caches of exactly the
/// affected nodes are updated. Returns the new node id.
pub fn apply_combine(
    g: &WeightedGraph,
    t: &mut EncodingTree,
    b1: usize,
    b2: usize,
    height_cap: usize,
) -> Result<usize> {
    let parent = brothers_parent(t, b1, b2)?;
    if height_after_combine(t, parent, b1, b2) > height_cap {
        return Err(SirdError::HeightCapExceeded { node: b1, cap: height_cap });
    }
    let (b1, b2) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
    let mut mask = vec![false; g.vertex_count()];
    let cut = node_cut(g, t, b1, b2, &mut mask);
    let vol = g.volume();
    let v_parent = t.node(parent).volume();
    let (v1, g1) = (t.node(b1).volume(), t.node(b1).boundary());
    let (v2, g2) = (t.node(b2).volume(), t.node(b2).boundary());
    let v_new = v1 + v2;
    let g_new = g1 + g2 - 2.0 * cut;

    let new_id = t.alloc_node(
        Some(parent),
        vec![b1, b2],
        None,
        merged_vertices(t, b1, b2),
        v_new,
        g_new,
        entropy_term(vol, g_new, v_new, v_parent),
    );
    let pc = &mut t.node_mut(parent).children;
    pc.retain(|&c| c != b1 && c != b2);
    pc.push(new_id);
    for b in [b1, b2] {
        let node = t.node_mut(b);
        node.parent = Some(new_id);
        node.term = entropy_term(vol, node.boundary, node.volume, v_new);
    }
    Ok(new_id)
}

/// Replace non-leaf brothers (b1, b2) by one node adopting all their
/// children. Height never increases. Returns the new node id.
pub fn apply_merge(g: &WeightedGraph, t: &mut EncodingTree, b1: usize, b2: usize) -> Result<usize> {
    let parent = brothers_parent(t, b1, b2)?;
    for b in [b1, b2] {
        if t.node(b).is_leaf() {
            return Err(SirdError::LeafOperand(b));
        }
    }
    let (b1, b2) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
    let mut mask = vec![false; g.vertex_count()];
    let cut = node_cut(g, t, b1, b2, &mut mask);
    let vol = g.volume();
    let v_parent = t.node(parent).volume();
    let (v1, g1) = (t.node(b1).volume(), t.node(b1).boundary());
    let (v2, g2) = (t.node(b2).volume(), t.node(b2).boundary());
    let v_new = v1 + v2;
    let g_new = g1 + g2 - 2.0 * cut;

    let mut children = t.node(b1).children().to_vec();
    children.extend_from_slice(t.node(b2).children());
    let new_id = t.alloc_node(
        Some(parent),
        children.clone(),
        None,
        merged_vertices(t, b1, b2),
        v_new,
        g_new,
        entropy_term(vol, g_new, v_new, v_parent),
    );
    for &c in &children {
        let node = t.node_mut(c);
        node.parent = Some(new_id);
        node.term = entropy_term(vol, node.boundary, node.volume, v_new);
    }
    let pc = &mut t.node_mut(parent).children;
    pc.retain(|&c| c != b1 && c != b2);
    pc.push(new_id);
    t.free_node(b1);
    t.free_node(b2);
    Ok(new_id)
}

/// Candidate ordering: higher ΔSE first, ties to the lexicographically
/// smallest (b1, b2). ΔSE values are finite by construction.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    dse: f64,
    b1: usize,
    b2: usize,
    epoch1: u64,
    epoch2: u64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dse
            .partial_cmp(&other.dse)
            .expect("ΔSE is never NaN")
            .then_with(|| other.b1.cmp(&self.b1))
            .then_with(|| other.b2.cmp(&self.b2))
    }
}

/// Returns true when `cand` still describes live brothers whose inputs
/// are unchanged since it was scored.
fn candidate_fresh(t: &EncodingTree, epochs: &[u64], cand: &Candidate) -> bool {
    t.is_alive(cand.b1)
        && t.is_alive(cand.b2)
        && epochs[cand.b1] == cand.epoch1
        && epochs[cand.b2] == cand.epoch2
}

struct HeapState {
    merges: BinaryHeap<Candidate>,
    combines: BinaryHeap<Candidate>,
    epochs: Vec<u64>,
    mask: Vec<bool>,
    /// Tree height, refreshed once per application instead of per
    /// candidate; must always equal `t.height()`.
    height: usize,
    /// Memoized children boundary sums, cleared on epoch bump.
    child_sums: Vec<Option<f64>>,
}

impl HeapState {
    fn epoch(&mut self, id: usize) -> u64 {
        if id >= self.epochs.len() {
            self.epochs.resize(id + 1, 0);
        }
        self.epochs[id]
    }

    fn bump(&mut self, id: usize) {
        if id >= self.epochs.len() {
            self.epochs.resize(id + 1, 0);
        }
        self.epochs[id] += 1;
        if id >= self.child_sums.len() {
            self.child_sums.resize(id + 1, None);
        }
        self.child_sums[id] = None;
    }

    fn child_sum(&mut self, t: &EncodingTree, id: usize) -> f64 {
        if id >= self.child_sums.len() {
            self.child_sums.resize(id + 1, None);
        }
        if let Some(s) = self.child_sums[id] {
            return s;
        }
        let s = children_boundary_sum(t, id);
        self.child_sums[id] = Some(s);
        s
    }

    /// Same predicate as [`height_after_combine`] `<= cap`, with the
    /// tree height read from the per-application cache.
    fn combine_feasible(&self, t: &EncodingTree, parent: usize, b1: usize, b2: usize, cap: usize) -> bool {
        if self.height > cap {
            return false;
        }
        t.depth(parent) + 2 + t.subtree_height(b1).max(t.subtree_height(b2)) <= cap
    }

    /// Score and enqueue both operator kinds for one brother pair.
    fn push_pair(&mut self, g: &WeightedGraph, t: &EncodingTree, height_cap: usize, a: usize, b: usize) {
        let (b1, b2) = if a < b { (a, b) } else { (b, a) };
        let cut = node_cut(g, t, b1, b2, &mut self.mask);
        self.push_scored(g, t, height_cap, b1, b2, cut);
    }

    /// Enqueue a pair whose cut is already known; `b1 < b2` and the cut
    /// must match `node_cut`'s summation order.
    fn push_scored(&mut self, g: &WeightedGraph, t: &EncodingTree, height_cap: usize, b1: usize, b2: usize, cut: f64) {
        let parent = match brothers_parent(t, b1, b2) {
            Ok(p) => p,
            Err(_) => return,
        };
        let vol = g.volume();
        let v_parent = t.node(parent).volume();
        let (v1, g1) = (t.node(b1).volume(), t.node(b1).boundary());
        let (v2, g2) = (t.node(b2).volume(), t.node(b2).boundary());
        let epoch1 = self.epoch(b1);
        let epoch2 = self.epoch(b2);
        if !t.node(b1).is_leaf() && !t.node(b2).is_leaf() {
            let s1 = self.child_sum(t, b1);
            let s2 = self.child_sum(t, b2);
            let dse = merge_dse(vol, v_parent, v1, g1, s1, v2, g2, s2, cut);
            self.merges.push(Candidate { dse, b1, b2, epoch1, epoch2 });
        }
        // the height check is repeated at pop time: depths only grow, so
        // a pair can turn infeasible while queued but never the reverse
        if self.combine_feasible(t, parent, b1, b2, height_cap) {
            let dse = combine_dse(vol, v_parent, v1, g1, v2, g2, cut);
            self.combines.push(Candidate { dse, b1, b2, epoch1, epoch2 });
        }
    }

    fn push_pairs_with_siblings(&mut self, g: &WeightedGraph, t: &EncodingTree, height_cap: usize, id: usize) {
        let Some(parent) = t.node(id).parent() else { return };
        let siblings: Vec<usize> =
            t.node(parent).children().iter().copied().filter(|&s| s != id).collect();
        if siblings.iter().all(|&s| s < id) {
            // `id` is the masked side of every pair: set its mask once
            // and sweep each sibling's adjacency against it, matching
            // node_cut's per-pair summation order exactly
            for &v in t.node(id).vertices() {
                self.mask[v] = true;
            }
            let cuts: Vec<f64> = siblings
                .iter()
                .map(|&s| g.cut_against_mask(t.node(s).vertices(), &self.mask))
                .collect();
            for &v in t.node(id).vertices() {
                self.mask[v] = false;
            }
            for (&sib, cut) in siblings.iter().zip(cuts) {
                self.push_scored(g, t, height_cap, sib, id, cut);
            }
        } else {
            for &sib in &siblings {
                self.push_pair(g, t, height_cap, id, sib);
            }
        }
    }

    fn pop_best(&mut self, t: &EncodingTree, height_cap: usize, kind: OpKind) -> Option<Candidate> {
        loop {
            let cand = match kind {
                OpKind::Merge => self.merges.pop()?,
                OpKind::Combine => self.combines.pop()?,
            };
            if !candidate_fresh(t, &self.epochs, &cand) {
                continue;
            }
            if kind == OpKind::Combine {
                let parent = t.node(cand.b1).parent().expect("brothers have a parent");
                if !self.combine_feasible(t, parent, cand.b1, cand.b2, height_cap) {
                    continue;
                }
            }
            return Some(cand);
        }
    }
}

/// Wraps every leaf child of the root in its own singleton cluster.
/// A bare leaf cannot take part in a merge, so without this step the
/// greedy could only grow even-sized clusters under a height cap of 2.
/// The wrap is entropy-neutral (the leaf's old term moves to the
/// wrapper and its own term becomes 0) and surviving singletons are
/// spliced out by the final pass-through prune.
fn lift_root_leaves(g: &WeightedGraph, t: &mut EncodingTree) {
    let root = t.root();
    let vol = g.volume();
    let root_volume = t.node(root).volume();
    for child in t.node(root).children().to_vec() {
        if !t.node(child).is_leaf() {
            continue;
        }
        let v = t.node(child).volume();
        let b = t.node(child).boundary();
        let vertices = t.node(child).vertices().to_vec();
        let wrapper = t.alloc_node(
            Some(root),
            vec![child],
            None,
            vertices,
            v,
            b,
            entropy_term(vol, b, v, root_volume),
        );
        let rc = &mut t.node_mut(root).children;
        let pos = rc.iter().position(|&c| c == child).expect("child of root");
        rc[pos] = wrapper;
        let node = t.node_mut(child);
        node.parent = Some(wrapper);
        node.term = entropy_term(vol, node.boundary, node.volume, v);
    }
}

fn check_initial(g: &WeightedGraph, t0: &EncodingTree, height_cap: usize) -> Result<()> {
    if height_cap < 2 {
        return Err(SirdError::InvalidInitialTree(format!(
            "height cap must be at least 2, got {height_cap}"
        )));
    }
    let report = t0.validate(g);
    if !report.is_valid() {
        return Err(SirdError::InvalidInitialTree(report.summary()));
    }
    Ok(())
}

/// Greedy entropy minimization with priority queues over candidate
/// pairs, invalidated locally after each application.
pub fn optimize(g: &WeightedGraph, t0: &EncodingTree, height_cap: usize) -> Result<OptimizeOutcome> {
    check_initial(g, t0, height_cap)?;
    let mut t = t0.clone();
    lift_root_leaves(g, &mut t);
    let mut state = HeapState {
        merges: BinaryHeap::new(),
        combines: BinaryHeap::new(),
        epochs: Vec::new(),
        mask: vec![false; g.vertex_count()],
        height: t.height(),
        child_sums: Vec::new(),
    };
    let internals: Vec<usize> = t.node_ids().filter(|&id| !t.node(id).is_leaf()).collect();
    for alpha in internals {
        let children = t.node(alpha).children().to_vec();
        for i in 0..children.len() {
            for j in i + 1..children.len() {
                state.push_pair(g, &t, height_cap, children[i], children[j]);
            }
        }
    }

    let mut trace = Vec::new();
    loop {
        if let Some(cand) = state.pop_best(&t, height_cap, OpKind::Merge) {
            if cand.dse > EPS_TOL {
                let parent = t.node(cand.b1).parent().expect("brothers");
                let new_id = apply_merge(g, &mut t, cand.b1, cand.b2)?;
                state.height = t.height();
                after_merge(&mut state, g, &t, height_cap, parent, new_id);
                trace.push(OperatorApplication {
                    kind: OpKind::Merge,
                    beta1: cand.b1,
                    beta2: cand.b2,
                    delta_se: cand.dse,
                    height: t.height(),
                });
                continue;
            }
        }
        if let Some(cand) = state.pop_best(&t, height_cap, OpKind::Combine) {
            if cand.dse > EPS_TOL {
                let parent = t.node(cand.b1).parent().expect("brothers");
                let new_id = apply_combine(g, &mut t, cand.b1, cand.b2, height_cap)?;
                state.height = t.height();
                after_combine(&mut state, g, &t, height_cap, parent, cand.b1, cand.b2, new_id);
                trace.push(OperatorApplication {
                    kind: OpKind::Combine,
                    beta1: cand.b1,
                    beta2: cand.b2,
                    delta_se: cand.dse,
                    height: t.height(),
                });
                continue;
            }
        }
        break;
    }

    t.prune_pass_through();
    Ok(OptimizeOutcome { tree: t, trace })
}

fn after_combine(
    state: &mut HeapState,
    g: &WeightedGraph,
    t: &EncodingTree,
    height_cap: usize,
    parent: usize,
    b1: usize,
    b2: usize,
    new_id: usize,
) {
    state.bump(b1);
    state.bump(b2);
    state.bump(parent);
    state.bump(new_id);
    // operands are now brothers under the new node
    state.push_pair(g, t, height_cap, b1, b2);
    state.push_pairs_with_siblings(g, t, height_cap, new_id);
    // parent's children changed, so merge scores involving it moved
    state.push_pairs_with_siblings(g, t, height_cap, parent);
}

fn after_merge(
    state: &mut HeapState,
    g: &WeightedGraph,
    t: &EncodingTree,
    height_cap: usize,
    parent: usize,
    new_id: usize,
) {
    state.bump(parent);
    state.bump(new_id);
    let adopted = t.node(new_id).children().to_vec();
    for &c in &adopted {
        state.bump(c);
    }
    // leaf-leaf pairs can only combine, and every such pair under
    // new_id shares the same resulting height; skip the quadratic
    // re-push entirely when that height is out of reach
    let leaf_pair_feasible =
        state.height <= height_cap && t.depth(new_id) + 2 <= height_cap;
    for i in 0..adopted.len() {
        for j in i + 1..adopted.len() {
            let both_leaves = t.node(adopted[i]).is_leaf() && t.node(adopted[j]).is_leaf();
            if both_leaves && !leaf_pair_feasible {
                continue;
            }
            state.push_pair(g, t, height_cap, adopted[i], adopted[j]);
        }
    }
    state.push_pairs_with_siblings(g, t, height_cap, new_id);
    state.push_pairs_with_siblings(g, t, height_cap, parent);
}

/// Reference driver: full scan over all brother pairs each iteration.
/// Same formulas and tie-breaking as [`optimize`]; outputs are identical.
pub fn optimize_scan(g: &WeightedGraph, t0: &EncodingTree, height_cap: usize) -> Result<OptimizeOutcome> {
    check_initial(g, t0, height_cap)?;
    let mut t = t0.clone();
    lift_root_leaves(g, &mut t);
    let mut trace = Vec::new();
    loop {
        if let Some((dse, b1, b2)) = best_pair(g, &t, height_cap, OpKind::Merge) {
            if dse > EPS_TOL {
                apply_merge(g, &mut t, b1, b2)?;
                trace.push(OperatorApplication {
                    kind: OpKind::Merge,
                    beta1: b1,
                    beta2: b2,
                    delta_se: dse,
                    height: t.height(),
                });
                continue;
            }
        }
        if let Some((dse, b1, b2)) = best_pair(g, &t, height_cap, OpKind::Combine) {
            if dse > EPS_TOL {
                apply_combine(g, &mut t, b1, b2, height_cap)?;
                trace.push(OperatorApplication {
                    kind: OpKind::Combine,
                    beta1: b1,
                    beta2: b2,
                    delta_se: dse,
                    height: t.height(),
                });
                continue;
            }
        }
        break;
    }
    t.prune_pass_through();
    Ok(OptimizeOutcome { tree: t, trace })
}

fn best_pair(
    g: &WeightedGraph,
    t: &EncodingTree,
    height_cap: usize,
    kind: OpKind,
) -> Option<(f64, usize, usize)> {
    let mut mask = vec![false; g.vertex_count()];
    let mut best: Option<(f64, usize, usize)> = None;
    let internals: Vec<usize> = t.node_ids().filter(|&id| !t.node(id).is_leaf()).collect();
    for alpha in internals {
        let mut children = t.node(alpha).children().to_vec();
        children.sort_unstable();
        for i in 0..children.len() {
            for j in i + 1..children.len() {
                let (b1, b2) = (children[i], children[j]);
                let dse = match kind {
                    OpKind::Merge => {
                        if t.node(b1).is_leaf() || t.node(b2).is_leaf() {
                            continue;
                        }
                        let cut = node_cut(g, t, b1, b2, &mut mask);
                        merge_dse(
                            g.volume(),
                            t.node(alpha).volume(),
                            t.node(b1).volume(),
                            t.node(b1).boundary(),
                            children_boundary_sum(t, b1),
                            t.node(b2).volume(),
                            t.node(b2).boundary(),
                            children_boundary_sum(t, b2),
                            cut,
                        )
                    }
                    OpKind::Combine => {
                        if height_after_combine(t, alpha, b1, b2) > height_cap {
                            continue;
                        }
                        let cut = node_cut(g, t, b1, b2, &mut mask);
                        combine_dse(
                            g.volume(),
                            t.node(alpha).volume(),
                            t.node(b1).volume(),
                            t.node(b1).boundary(),
                            t.node(b2).volume(),
                            t.node(b2).boundary(),
                            cut,
                        )
                    }
                };
                let better = match best {
                    None => true,
                    Some((bd, bb1, bb2)) => {
                        dse > bd || (dse == bd && (b1, b2) < (bb1, bb2))
                    }
                };
                if better {
                    best = Some((dse, b1, b2));
                }
            }
        }
    }
    best
}
