//! Dominant eigenpair of the sparse Laplacian via power iteration.
//!
//! L is positive semidefinite, so the largest-magnitude eigenvalue is the
//! largest eigenvalue and no shift is needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{laplacian_apply_into, SparseGraph};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 5000;

/// Largest eigenvalue of L and an associated unit eigenvector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    /// False when the loop hit `max_iter` before meeting the residual
    /// target; the best current vector is still returned.
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn seeded_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nv = norm(&v);
    if nv > 0.0 {
        v.iter_mut().for_each(|x| *x /= nv);
    } else {
        v[0] = 1.0;
    }
    v
}

/// Power iteration on L using the matrix-free operator.
///
/// Stops when ‖L·v − λ·v‖₂ ≤ tol·max(λ, 1) with λ the Rayleigh quotient,
/// or after `max_iter` iterations (recorded via `converged = false`).
pub fn dominant_eigenpair(
    graph: &SparseGraph,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<EigenPair> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if graph.edge_count == 0 {
        return Err(Error::NoEdges);
    }
    let n = graph.n;
    let mut v = seeded_unit_vector(n, seed);
    let mut w = vec![0.0; n];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut restarts = 0u64;
    for iter in 1..=max_iter {
        laplacian_apply_into(graph, &v, &mut w);
        // v is unit, so the Rayleigh quotient is just v·w
        lambda = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        residual = v
            .iter()
            .zip(&w)
            .map(|(a, b)| {
                let r = b - lambda * a;
                r * r
            })
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda.max(1.0) {
            return Ok(EigenPair {
                value: lambda,
                vector: v,
                iterations: iter,
                residual,
                converged: true,
            });
        }
        let nw = norm(&w);
        if nw == 0.0 {
            // start vector landed exactly in the null space; reseed
            restarts += 1;
            v = seeded_unit_vector(n, seed.wrapping_add(restarts));
            continue;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    Ok(EigenPair {
        value: lambda,
        vector: v,
        iterations: max_iter,
        residual,
        converged: false,
    })
}

/// Elementwise |v|; removes the global sign ambiguity of power iteration.
pub fn abs_components(pair: &EigenPair) -> Vec<f64> {
    pair.vector.iter().map(|x| x.abs()).collect()
}
