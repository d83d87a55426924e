//! ε-neighborhood graph in compressed sparse row form and the matrix-free
//! Laplacian operator L = D − W.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{sq_dist, PointSet};

/// Dimensionality above which the uniform grid index degrades (3^d candidate
/// cells) and the builder falls back to the all-pairs scan.
const GRID_MAX_DIM: usize = 4;

/// Symmetric binary adjacency in CSR form, neighbor lists sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseGraph {
    pub row_offsets: Vec<usize>,
    pub neighbors: Vec<u32>,
    pub degrees: Vec<u32>,
    pub n: usize,
    pub edge_count: usize,
}

impl SparseGraph {
    #[inline]
    pub fn neighbors_of(&self, i: usize) -> &[u32] {
        &self.neighbors[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i] as usize
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0) as usize
    }

    fn from_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let n = adj.len();
        let mut row_offsets = Vec::with_capacity(n + 1);
        row_offsets.push(0usize);
        let mut neighbors = Vec::new();
        let mut degrees = Vec::with_capacity(n);
        for list in &adj {
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]));
            neighbors.extend_from_slice(list);
            degrees.push(list.len() as u32);
            row_offsets.push(neighbors.len());
        }
        let edge_count = neighbors.len() / 2;
        SparseGraph {
            row_offsets,
            neighbors,
            degrees,
            n,
            edge_count,
        }
    }
}

fn validate_eps(eps: f64) -> Result<()> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(())
}

/// Connects every pair of points at Euclidean distance ≤ eps.
///
/// Uses a uniform grid with cell side eps so the expected cost is
/// near-linear for bounded local density; for d > 4 the candidate-cell
/// count 3^d outgrows the saving and the all-pairs scan is used instead.
pub fn build_epsilon_graph(points: &PointSet, eps: f64) -> Result<SparseGraph> {
    validate_eps(eps)?;
    if points.dim() > GRID_MAX_DIM {
        return brute_force_graph(points, eps);
    }
    let n = points.len();
    let d = points.dim();
    let eps_sq = eps * eps;

    let cell_of =
        |row: &[f64]| -> Vec<i64> { row.iter().map(|&x| (x / eps).floor() as i64).collect() };

    let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    for (i, row) in points.rows().enumerate() {
        cells.entry(cell_of(row)).or_default().push(i as u32);
    }

    // 3^d offsets in {-1,0,1}^d.
    let mut offsets: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        offsets = offsets
            .into_iter()
            .flat_map(|base| {
                [-1i64, 0, 1].iter().map(move |&o| {
                    let mut v = base.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }

    let adj: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let pi = points.row(i);
            let home = cell_of(pi);
            let mut list = Vec::new();
            for off in &offsets {
                let key: Vec<i64> = home.iter().zip(off).map(|(c, o)| c + o).collect();
                if let Some(candidates) = cells.get(&key) {
                    for &j in candidates {
                        if j as usize != i && sq_dist(pi, points.row(j as usize)) <= eps_sq {
                            list.push(j);
                        }
                    }
                }
            }
            list.sort_unstable();
            list
        })
        .collect();

    Ok(SparseGraph::from_adjacency(adj))
}

/// All-pairs reference builder with the same contract as
/// [`build_epsilon_graph`]; kept as the testing oracle.
pub fn brute_force_graph(points: &PointSet, eps: f64) -> Result<SparseGraph> {
    validate_eps(eps)?;
    let n = points.len();
    let eps_sq = eps * eps;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if sq_dist(points.row(i), points.row(j)) <= eps_sq {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    // i < j pushes keep each list already ascending
    Ok(SparseGraph::from_adjacency(adj))
}

/// y = L·x with L = D − W, never materializing a dense matrix.
pub fn laplacian_apply(graph: &SparseGraph, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != graph.n {
        return Err(Error::DimensionMismatch {
            expected: graph.n,
            got: x.len(),
        });
    }
    let mut y = vec![0.0; graph.n];
    y.par_iter_mut().enumerate().for_each(|(i, yi)| {
        let mut acc = graph.degrees[i] as f64 * x[i];
        for &j in graph.neighbors_of(i) {
            acc -= x[j as usize];
        }
        *yi = acc;
    });
    Ok(y)
}

/// In-place variant of [`laplacian_apply`] for the power-iteration hot loop.
pub(crate) fn laplacian_apply_into(graph: &SparseGraph, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), graph.n);
    debug_assert_eq!(y.len(), graph.n);
    y.par_iter_mut().enumerate().for_each(|(i, yi)| {
        let mut acc = graph.degrees[i] as f64 * x[i];
        for &j in graph.neighbors_of(i) {
            acc -= x[j as usize];
        }
        *yi = acc;
    });
}
