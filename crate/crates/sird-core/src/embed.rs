//! Action representations and the complete correlation graph.
//!
//! The embedding learner is a deterministic stand-in for a trained
//! encoder-decoder: it regresses transition targets on observations,
//! averages the residuals per action, and takes a rank-d factorization
//! of the resulting effect-profile matrix. Externally trained
//! embeddings can also be ingested directly from CSV.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Result, SirdError};
use crate::graph::{format_float, WeightedGraph, WEIGHT_EPSILON};

/// n×d matrix of action representations, one row per action.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>, // row-major
}

impl EmbeddingMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n * d);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(SirdError::Parse {
                    file: "embedding".into(),
                    msg: format!("row {a} has {} entries, expected {d}", row.len()),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(SirdError::Parse {
                    file: "embedding".into(),
                    msg: format!("row {a} contains a non-finite entry"),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(EmbeddingMatrix { n, d, data })
    }

    pub fn action_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, a: usize) -> &[f64] {
        &self.data[a * self.d..(a + 1) * self.d]
    }

    // --- CSV: header `action_id,z_0,...,z_{d-1}` ---

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let cols: Vec<String> = (0..self.d).map(|j| format!("z_{j}")).collect();
        writeln!(out, "action_id,{}", cols.join(","))?;
        for a in 0..self.n {
            let vals: Vec<String> = self.row(a).iter().map(|&x| format_float(x)).collect();
            writeln!(out, "{a},{}", vals.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_csv(&mut f)
    }

    pub fn read_csv<R: BufRead>(reader: R, name: &str) -> Result<Self> {
        let parse_err = |msg: String| SirdError::Parse { file: name.to_string(), msg };
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| parse_err("empty file".into()))??;
        if !header.starts_with("action_id,") {
            return Err(parse_err("expected header `action_id,z_0,...`".into()));
        }
        let d = header.split(',').count() - 1;
        let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != d + 1 {
                return Err(parse_err(format!("line {}: expected {} fields", i + 2, d + 1)));
            }
            let a: usize = fields[0]
                .parse()
                .map_err(|e| parse_err(format!("line {}: bad action id: {e}", i + 2)))?;
            let row: std::result::Result<Vec<f64>, _> =
                fields[1..].iter().map(|s| s.parse::<f64>()).collect();
            let row = row.map_err(|e| parse_err(format!("line {}: bad float: {e}", i + 2)))?;
            rows.push((a, row));
        }
        rows.sort_by_key(|(a, _)| *a);
        for (expect, (a, _)) in rows.iter().enumerate() {
            if *a != expect {
                return Err(parse_err(format!("action ids must be dense 0..n, missing {expect}")));
            }
        }
        Self::from_rows(rows.into_iter().map(|(_, r)| r).collect())
    }

    pub fn from_csv_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(BufReader::new(f), &path.display().to_string())
    }
}

#[derive(Debug, Clone)]
pub struct TransitionRow {
    pub action: usize,
    pub obs: Vec<f64>,
    pub obs_next: Vec<f64>,
    pub reward: f64,
}

/// Rows of (action, observation, next observation, reward) feeding the
/// embedding learner.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    action_count: usize,
    obs_dim: usize,
    rows: Vec<TransitionRow>,
}

impl TransitionTable {
    pub fn new(action_count: usize, rows: Vec<TransitionRow>) -> Result<Self> {
        let obs_dim = rows.first().map_or(0, |r| r.obs.len());
        for r in &rows {
            if r.action >= action_count {
                return Err(SirdError::VertexOutOfRange { v: r.action, n: action_count });
            }
            if r.obs.len() != obs_dim || r.obs_next.len() != obs_dim {
                return Err(SirdError::Parse {
                    file: "transitions".into(),
                    msg: "inconsistent observation dimension".into(),
                });
            }
        }
        Ok(TransitionTable { action_count, obs_dim, rows })
    }

    pub fn action_count(&self) -> usize {
        self.action_count
    }

    pub fn obs_dim(&self) -> usize {
        self.obs_dim
    }

    pub fn rows(&self) -> &[TransitionRow] {
        &self.rows
    }

    // --- CSV: header `action_id,o_0..o_{p-1},onext_0..onext_{p-1},reward` ---

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut cols = vec!["action_id".to_string()];
        cols.extend((0..self.obs_dim).map(|j| format!("o_{j}")));
        cols.extend((0..self.obs_dim).map(|j| format!("onext_{j}")));
        cols.push("reward".into());
        writeln!(out, "{}", cols.join(","))?;
        for r in &self.rows {
            let mut fields = vec![r.action.to_string()];
            fields.extend(r.obs.iter().map(|&x| format_float(x)));
            fields.extend(r.obs_next.iter().map(|&x| format_float(x)));
            fields.push(format_float(r.reward));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_file(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_csv(&mut f)
    }

    pub fn read_csv<R: BufRead>(reader: R, name: &str) -> Result<Self> {
        let parse_err = |msg: String| SirdError::Parse { file: name.to_string(), msg };
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| parse_err("empty file".into()))??;
        let ncols = header.split(',').count();
        if !header.starts_with("action_id,") || ncols < 4 || (ncols - 2) % 2 != 0 {
            return Err(parse_err("expected header `action_id,o_*,onext_*,reward`".into()));
        }
        let p = (ncols - 2) / 2;
        let mut rows = Vec::new();
        let mut max_action = 0usize;
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != ncols {
                return Err(parse_err(format!("line {}: expected {ncols} fields", i + 2)));
            }
            let action: usize = fields[0]
                .parse()
                .map_err(|e| parse_err(format!("line {}: bad action id: {e}", i + 2)))?;
            let nums: std::result::Result<Vec<f64>, _> =
                fields[1..].iter().map(|s| s.parse::<f64>()).collect();
            let nums = nums.map_err(|e| parse_err(format!("line {}: bad float: {e}", i + 2)))?;
            max_action = max_action.max(action);
            rows.push(TransitionRow {
                action,
                obs: nums[..p].to_vec(),
                obs_next: nums[p..2 * p].to_vec(),
                reward: nums[2 * p],
            });
        }
        Self::new(max_action + 1, rows)
    }

    pub fn from_csv_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(BufReader::new(f), &path.display().to_string())
    }
}

/// Learn a deterministic d-dimensional embedding from transitions.
///
/// Targets (o_next, r) are regressed on o (with intercept) by least
/// squares; the per-action mean residual vectors form an n×(p+1) effect
/// matrix whose rank-d factorization yields the rows. Actions with
/// identical effect profiles receive identical rows.
pub fn learn_embeddings(table: &TransitionTable, d: usize) -> Result<EmbeddingMatrix> {
    let n = table.action_count();
    let p = table.obs_dim();
    let max_d = n.min(p + 1);
    if d > max_d {
        return Err(SirdError::DimensionTooLarge { d, max: max_d });
    }
    let mut counts = vec![0usize; n];
    for r in table.rows() {
        counts[r.action] += 1;
    }
    if let Some(a) = counts.iter().position(|&c| c == 0) {
        return Err(SirdError::MissingAction(a));
    }

    let m = table.rows().len();
    // X = [o | 1], Y = [o_next | r]
    let mut x = DMatrix::<f64>::zeros(m, p + 1);
    let mut y = DMatrix::<f64>::zeros(m, p + 1);
    for (i, r) in table.rows().iter().enumerate() {
        for j in 0..p {
            x[(i, j)] = r.obs[j];
            y[(i, j)] = r.obs_next[j];
        }
        x[(i, p)] = 1.0;
        y[(i, p)] = r.reward;
    }

    let svd = x.clone().svd(true, true);
    let beta = svd
        .solve(&y, 1e-12)
        .map_err(|e| SirdError::Parse { file: "transitions".into(), msg: e.to_string() })?;
    let residuals = &y - &x * beta;

    // Per-action mean residual: the action's conditional effect profile.
    let mut effect = DMatrix::<f64>::zeros(n, p + 1);
    for (i, r) in table.rows().iter().enumerate() {
        for j in 0..p + 1 {
            effect[(r.action, j)] += residuals[(i, j)];
        }
    }
    for a in 0..n {
        for j in 0..p + 1 {
            effect[(a, j)] /= counts[a] as f64;
        }
    }

    // Rank-d factorization: rows are U_d scaled by singular values, each
    // direction sign-fixed so its largest-magnitude U coordinate is positive.
    let svd = effect.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let sigma = &svd.singular_values;
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap().then(a.cmp(&b)));

    let mut rows = vec![vec![0.0; d]; n];
    for (out_j, &j) in order.iter().take(d).enumerate() {
        let mut sign = 1.0;
        let mut best = 0.0;
        for i in 0..n {
            let v = u[(i, j)];
            if v.abs() > best {
                best = v.abs();
                sign = if v >= 0.0 { 1.0 } else { -1.0 };
            }
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[out_j] = sign * u[(i, j)] * sigma[j];
        }
    }
    EmbeddingMatrix::from_rows(rows)
}

/// Pearson correlation over the d components of two representations.
/// Returns 0 when either vector is constant.
pub fn pearson(zi: &[f64], zj: &[f64]) -> Result<f64> {
    let d = zi.len();
    if d < 2 || zj.len() < 2 {
        return Err(SirdError::DimensionTooSmall(d.min(zj.len())));
    }
    assert_eq!(d, zj.len(), "representation dimensions must match");
    let dn = d as f64;
    let mi: f64 = zi.iter().sum::<f64>() / dn;
    let mj: f64 = zj.iter().sum::<f64>() / dn;
    let mut cov = 0.0;
    let mut vi = 0.0;
    let mut vj = 0.0;
    for k in 0..d {
        let a = zi[k] - mi;
        let b = zj[k] - mj;
        cov += a * b;
        vi += a * a;
        vj += b * b;
    }
    if vi <= 0.0 || vj <= 0.0 {
        return Ok(0.0);
    }
    Ok(cov / (vi.sqrt() * vj.sqrt()))
}

/// Complete action graph weighted by |pearson|, clamped to at least
/// `WEIGHT_EPSILON` so every vertex keeps a positive degree.
pub fn correlation_graph(embedding: &EmbeddingMatrix) -> Result<WeightedGraph> {
    let n = embedding.action_count();
    if n < 2 {
        return Err(SirdError::TooFewActions(n));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let c = pearson(embedding.row(i), embedding.row(j))?;
            edges.push((i, j, c.abs().max(WEIGHT_EPSILON)));
        }
    }
    WeightedGraph::build(n, edges)
}
