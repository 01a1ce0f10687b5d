//! Weighted undirected graph with degree/volume/cut queries and
//! one-dimensional structural entropy.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Result, SirdError};

/// Minimum edge weight kept when building graphs from correlations.
/// Prevents zero-degree vertices, which would make the entropy undefined.
pub const WEIGHT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Undirected weighted graph over dense vertex ids `0..n`.
///
/// Immutable after construction; degrees and volume are cached at build
/// time and never updated.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
    degrees: Vec<f64>,
    volume: f64,
}

impl WeightedGraph {
    /// Build a canonical graph from an edge list. Edges must satisfy
    /// `u < v < n` with nonnegative weight; duplicates are rejected.
    pub fn build(n: usize, edge_list: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (u, v, w) in edge_list {
            if u == v {
                return Err(SirdError::SelfLoop(u));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if v >= n {
                return Err(SirdError::VertexOutOfRange { v, n });
            }
            if w < 0.0 || !w.is_finite() {
                return Err(SirdError::NegativeWeight { u, v, w });
            }
            edges.push(Edge { u, v, w });
        }
        edges.sort_by(|a, b| (a.u, a.v).cmp(&(b.u, b.v)));
        for pair in edges.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(SirdError::DuplicateEdge(pair[0].u, pair[0].v));
            }
        }

        let mut adj = vec![Vec::new(); n];
        let mut degrees = vec![0.0; n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
            degrees[e.u] += e.w;
            degrees[e.v] += e.w;
        }
        for nbrs in &mut adj {
            nbrs.sort_by(|a, b| a.0.cmp(&b.0));
        }
        let volume = degrees.iter().sum();
        Ok(WeightedGraph { n, edges, adj, degrees, volume })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// vol(G) = sum of all degrees = twice the total edge weight.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Neighbors of `v` with weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Weight of edge (u, v), or 0 if absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        self.adj[u]
            .binary_search_by(|probe| probe.0.cmp(&v))
            .map(|i| self.adj[u][i].1)
            .unwrap_or(0.0)
    }

    /// Total weight of edges with one endpoint in each of two disjoint sets.
    pub fn cut_weight(&self, s1: &[usize], s2: &[usize]) -> Result<f64> {
        let mut mask = vec![false; self.n];
        for &v in s2 {
            mask[v] = true;
        }
        for &v in s1 {
            if mask[v] {
                return Err(SirdError::OverlappingSets(v));
            }
        }
        Ok(self.cut_against_mask(s1, &mask))
    }

    /// Cut weight between `s1` and the vertices marked in `mask`.
    /// Iteration order is fixed (s1 as given, neighbors by id) so the
    /// floating-point sum is deterministic.
    pub(crate) fn cut_against_mask(&self, s1: &[usize], mask: &[bool]) -> f64 {
        let mut total = 0.0;
        for &v in s1 {
            for &(u, w) in &self.adj[v] {
                if mask[u] {
                    total += w;
                }
            }
        }
        total
    }

    /// One-dimensional structural entropy
    /// H¹(G) = −Σ_v (d_v / vol) log₂(d_v / vol).
    pub fn one_dim_entropy(&self) -> Result<f64> {
        if self.volume <= 0.0 {
            return Err(SirdError::ZeroVolume);
        }
        let mut h = 0.0;
        for (v, &d) in self.degrees.iter().enumerate() {
            if d <= 0.0 {
                return Err(SirdError::ZeroDegreeVertex(v));
            }
            let p = d / self.volume;
            h -= p * p.log2();
        }
        Ok(h)
    }

    /// Same graph with every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::build(self.n, self.edges.iter().map(|e| (e.u, e.v, e.w * c)))
    }

    // --- TSV format: header `#n=<count>`, then `u<TAB>v<TAB>w` lines ---

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#n={}", self.n)?;
        for e in &self.edges {
            writeln!(out, "{}\t{}\t{}", e.u, e.v, format_float(e.w))?;
        }
        Ok(())
    }

    pub fn to_tsv_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_tsv(&mut f)
    }

    pub fn read_tsv<R: BufRead>(reader: R, name: &str) -> Result<Self> {
        let parse_err = |msg: String| SirdError::Parse { file: name.to_string(), msg };
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| parse_err("empty file".into()))??;
        let n: usize = header
            .strip_prefix("#n=")
            .ok_or_else(|| parse_err(format!("expected `#n=<count>` header, got `{header}`")))?
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("bad vertex count: {e}")))?;
        let mut edge_list = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err(format!("line {}: expected 3 tab-separated fields", i + 2)));
            }
            let u: usize = fields[0]
                .parse()
                .map_err(|e| parse_err(format!("line {}: bad u: {e}", i + 2)))?;
            let v: usize = fields[1]
                .parse()
                .map_err(|e| parse_err(format!("line {}: bad v: {e}", i + 2)))?;
            let w: f64 = fields[2]
                .parse()
                .map_err(|e| parse_err(format!("line {}: bad weight: {e}", i + 2)))?;
            if u >= v {
                return Err(parse_err(format!("line {}: edges must satisfy u < v", i + 2)));
            }
            edge_list.push((u, v, w));
        }
        Self::build(n, edge_list)
    }

    pub fn from_tsv_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_tsv(BufReader::new(f), &path.display().to_string())
    }
}

/// 17 significant digits; enough for exact f64 round trips.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
