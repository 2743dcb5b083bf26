//! Coarsened graph construction from a partition.
//!
//! The projected Laplacian `Cᵀ L C` of a binary projection `C` is integral:
//! off-diagonal entries are minus the number of original edges between two
//! balls and the diagonal is the number of edges leaving a ball. It is stored
//! sparsely and materialized densely only on request.

use crate::engine::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::SymMatrix;

/// Sparse encoding of the binary node-to-supernode matrix `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    pub rows: usize,
    pub cols: usize,
    pub column_of: Vec<usize>,
}

impl ProjectionMap {
    /// Validates a raw assignment: every column in `[0, cols)` must be used.
    pub fn from_assignment(column_of: Vec<usize>) -> Result<Self> {
        let cols = column_of.iter().max().map_or(0, |&m| m + 1);
        let map = ProjectionMap {
            rows: column_of.len(),
            cols,
            column_of,
        };
        if let Some(empty) = map.column_sizes().iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("supernode {empty} is empty")));
        }
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        ProjectionMap {
            rows: n,
            cols: n,
            column_of: (0..n).collect(),
        }
    }

    /// Diagonal of `CᵀC`.
    pub fn column_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cols];
        for &c in &self.column_of {
            sizes[c] += 1;
        }
        sizes
    }

    /// `Cᵀ x`: per-supernode sums.
    pub fn restrict(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &c) in self.column_of.iter().enumerate() {
            out[c] += x[i];
        }
        out
    }

    /// `C y`: copies each supernode value to its members.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        self.column_of.iter().map(|&c| y[c]).collect()
    }
}

pub fn build_projection(p: &Partition, n: usize) -> Result<ProjectionMap> {
    if p.node_count() != n {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, expected {n}",
            p.node_count()
        )));
    }
    p.validate()?;
    Ok(ProjectionMap {
        rows: n,
        cols: p.len(),
        column_of: p.assignment.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarsenedGraph {
    pub supernode_count: usize,
    /// Unordered supernode pairs `(a, b)`, `a < b`, sorted.
    pub superedges: Vec<(usize, usize)>,
    /// Original edges crossing each superedge, aligned with `superedges`.
    pub crossing_counts: Vec<u64>,
    /// Diagonal of `Cᵀ L C`.
    pub laplacian_diagonal: Vec<i64>,
}

impl CoarsenedGraph {
    pub fn superedge_count(&self) -> usize {
        self.superedges.len()
    }

    /// Entry `(a, b)` of the projected Laplacian.
    pub fn projected_entry(&self, a: usize, b: usize) -> i64 {
        if a == b {
            return self.laplacian_diagonal[a];
        }
        let key = (a.min(b), a.max(b));
        match self.superedges.binary_search(&key) {
            Ok(i) => -(self.crossing_counts[i] as i64),
            Err(_) => 0,
        }
    }

    /// Dense integer `Cᵀ L C`.
    pub fn projected_laplacian_exact(&self) -> Vec<Vec<i64>> {
        let n = self.supernode_count;
        let mut m = vec![vec![0i64; n]; n];
        for (a, row) in m.iter_mut().enumerate() {
            row[a] = self.laplacian_diagonal[a];
        }
        for (&(a, b), &w) in self.superedges.iter().zip(&self.crossing_counts) {
            m[a][b] = -(w as i64);
            m[b][a] = -(w as i64);
        }
        m
    }

    pub fn projected_laplacian(&self) -> SymMatrix {
        let n = self.supernode_count;
        let mut m = SymMatrix::zeros(n);
        for a in 0..n {
            m.set(a, a, self.laplacian_diagonal[a] as f64);
        }
        for (&(a, b), &w) in self.superedges.iter().zip(&self.crossing_counts) {
            m.set_sym(a, b, -(w as f64));
        }
        m
    }

    /// Unweighted supernode graph (`Ā` with entries in {0, 1}).
    pub fn superedge_graph(&self) -> Graph {
        Graph::from_edge_list(self.supernode_count, &self.superedges)
            .expect("superedges index valid supernodes")
    }
}

/// Builds superedges and `Cᵀ L C` in integer arithmetic.
pub fn build_coarse_graph(g: &Graph, c: &ProjectionMap) -> Result<CoarsenedGraph> {
    if c.rows != g.node_count() {
        return Err(Error::InvalidPartition(format!(
            "projection has {} rows for a graph with {} nodes",
            c.rows,
            g.node_count()
        )));
    }
    let mut degree_sum = vec![0i64; c.cols];
    let mut internal = vec![0i64; c.cols];
    for v in 0..g.node_count() {
        degree_sum[c.column_of[v]] += g.degree(v) as i64;
    }
    let mut crossing = Vec::new();
    for (u, v) in g.edges() {
        let (a, b) = (c.column_of[u], c.column_of[v]);
        if a == b {
            internal[a] += 1;
        } else {
            crossing.push((a.min(b), a.max(b)));
        }
    }
    crossing.sort_unstable();
    let mut superedges: Vec<(usize, usize)> = Vec::new();
    let mut crossing_counts: Vec<u64> = Vec::new();
    for pair in crossing {
        if superedges.last() == Some(&pair) {
            *crossing_counts.last_mut().unwrap() += 1;
        } else {
            superedges.push(pair);
            crossing_counts.push(1);
        }
    }
    let laplacian_diagonal = degree_sum
        .iter()
        .zip(&internal)
        .map(|(&d, &e)| d - 2 * e)
        .collect();
    Ok(CoarsenedGraph {
        supernode_count: c.cols,
        superedges,
        crossing_counts,
        laplacian_diagonal,
    })
}
