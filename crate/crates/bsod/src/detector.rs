//! The BSOD boosting loop: standardize, build the ε-graph, split on the
//! magnitudes of the dominant Laplacian eigenvector, keep the larger
//! cluster, repeat until the retained set is no bigger than n·c. The
//! survivors are the reported outliers.

use serde::{Deserialize, Serialize};

use crate::cluster1d::{two_means_1d, DEGENERATE_RANGE};
use crate::error::{Error, Result};
use crate::graph::build_epsilon_graph;
use crate::points::PointSet;
use crate::spectral::{abs_components, dominant_eigenpair};

/// Default power-iteration budget per round. Deliberately small: a fully
/// converged dominant eigenvector localizes on the single densest spot and
/// the loop shaves tiny slivers (slower AND slightly worse empirically),
/// while a budgeted iterate spreads over the whole dense region and
/// removes it in large, clean rounds.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-4;
pub const DEFAULT_EIGEN_MAX_ITER: usize = 150;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BsodConfig {
    /// Assumed outlier fraction, 0 < c < 1.
    pub contamination: f64,
    pub eps: f64,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
    pub seed: u64,
}

impl BsodConfig {
    pub fn new(contamination: f64) -> Result<Self> {
        if !(contamination > 0.0 && contamination < 1.0) {
            return Err(Error::InvalidContamination(contamination));
        }
        Ok(Self {
            contamination,
            eps: 0.5,
            eigen_tol: DEFAULT_EIGEN_TOL,
            eigen_max_iter: DEFAULT_EIGEN_MAX_ITER,
            seed: 0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.contamination > 0.0 && self.contamination < 1.0) {
            return Err(Error::InvalidContamination(self.contamination));
        }
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(Error::InvalidEpsilon(self.eps));
        }
        if self.eigen_tol.is_nan() || self.eigen_tol <= 0.0 {
            return Err(Error::InvalidTolerance(self.eigen_tol));
        }
        Ok(())
    }
}

/// Why a round could not split its input. These stop the loop and declare
/// all remaining points outliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateExit {
    /// Every remaining point is isolated at scale eps.
    GraphHasNoEdges,
    /// All |v_n| components equal; 2-means has nothing to separate.
    DegenerateEigenvector,
    /// Fewer than two points remain.
    TooFewPoints,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round_index: usize,
    pub input_size: usize,
    /// Indices into the ORIGINAL dataset of points removed this round.
    pub removed_indices: Vec<usize>,
    pub kept_size: usize,
    pub eigenvalue: Option<f64>,
    pub eigen_iterations: Option<usize>,
    /// (smaller, larger) cluster sizes of the 2-means split.
    pub cluster_sizes: Option<(usize, usize)>,
    pub degenerate_exit: Option<DegenerateExit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionResult {
    /// The final retained set X*, as indices into the original dataset.
    pub outlier_indices: Vec<usize>,
    pub rounds: Vec<RoundTrace>,
    /// Removal-round rank in [0,1]; survivors score 1.0 (most
    /// outlier-like), earlier removal scores lower.
    pub scores: Vec<f64>,
}

/// Per-feature: subtract the sample mean and divide by the sample standard
/// deviation (n−1 denominator). Features with sd < 1e−12 are centered only.
pub fn standardize(points: &PointSet) -> Result<PointSet> {
    let n = points.len();
    let d = points.dim();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let mut means = vec![0.0; d];
    for row in points.rows() {
        for (m, &x) in means.iter_mut().zip(row) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut vars = vec![0.0; d];
    for row in points.rows() {
        for ((v, &x), &m) in vars.iter_mut().zip(row).zip(&means) {
            let t = x - m;
            *v += t * t;
        }
    }
    let sds: Vec<f64> = vars.iter().map(|v| (v / (n - 1) as f64).sqrt()).collect();
    let mut data = Vec::with_capacity(n * d);
    for row in points.rows() {
        for j in 0..d {
            let centered = row[j] - means[j];
            data.push(if sds[j] < 1e-12 {
                centered
            } else {
                centered / sds[j]
            });
        }
    }
    PointSet::new(data, n, d)
}

pub enum RoundOutcome {
    Split {
        trace: RoundTrace,
        kept_points: PointSet,
        kept_indices: Vec<usize>,
    },
    Degenerate(RoundTrace),
}

/// One weak learner: standardize → ε-graph → |v_n| → 2-means → keep the
/// larger cluster. `original_indices[i]` maps row i back to the original
/// dataset.
pub fn bsod_round(
    points: &PointSet,
    original_indices: &[usize],
    round_index: usize,
    config: &BsodConfig,
) -> Result<RoundOutcome> {
    let input_size = points.len();
    debug_assert_eq!(input_size, original_indices.len());

    let degenerate = |exit: DegenerateExit, eigenvalue, eigen_iterations| {
        RoundOutcome::Degenerate(RoundTrace {
            round_index,
            input_size,
            removed_indices: Vec::new(),
            kept_size: input_size,
            eigenvalue,
            eigen_iterations,
            cluster_sizes: None,
            degenerate_exit: Some(exit),
        })
    };

    if input_size < 2 {
        return Ok(degenerate(DegenerateExit::TooFewPoints, None, None));
    }
    let standardized = standardize(points)?;
    let graph = build_epsilon_graph(&standardized, config.eps)?;
    if graph.edge_count == 0 {
        return Ok(degenerate(DegenerateExit::GraphHasNoEdges, None, None));
    }
    let pair = dominant_eigenpair(&graph, config.eigen_tol, config.eigen_max_iter, config.seed)?;
    let magnitudes = abs_components(&pair);
    let max = magnitudes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    if max - min < DEGENERATE_RANGE {
        return Ok(degenerate(
            DegenerateExit::DegenerateEigenvector,
            Some(pair.value),
            Some(pair.iterations),
        ));
    }
    let split = two_means_1d(&magnitudes)?;

    // keep the larger cluster; on a size tie keep the low-centroid one,
    // i.e. remove the high-magnitude cluster
    let keep_cluster: u8 = if split.sizes.1 > split.sizes.0 { 1 } else { 0 };
    let mut kept_indices = Vec::with_capacity(split.sizes.0.max(split.sizes.1));
    let mut kept_rows = Vec::new();
    let mut removed_indices = Vec::new();
    for (row, &assignment) in split.assignments.iter().enumerate() {
        if assignment == keep_cluster {
            kept_rows.push(row);
            kept_indices.push(original_indices[row]);
        } else {
            removed_indices.push(original_indices[row]);
        }
    }
    let kept_points = points.select(&kept_rows);
    let trace = RoundTrace {
        round_index,
        input_size,
        removed_indices,
        kept_size: kept_indices.len(),
        eigenvalue: Some(pair.value),
        eigen_iterations: Some(pair.iterations),
        cluster_sizes: Some((
            split.sizes.0.min(split.sizes.1),
            split.sizes.0.max(split.sizes.1),
        )),
        degenerate_exit: None,
    };
    Ok(RoundOutcome::Split {
        trace,
        kept_points,
        kept_indices,
    })
}

/// Runs weak learners until the retained set is no bigger than n·c (the
/// real-valued threshold, exactly as the loop bound is written), then
/// reports the retained set as the outliers.
///
/// Each non-degenerate round removes at least one point, so the loop
/// always halts; degenerate rounds stop it early and declare all
/// remaining points outliers.
pub fn bsod_detect(points: &PointSet, config: &BsodConfig) -> Result<DetectionResult> {
    config.validate()?;
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let threshold = n as f64 * config.contamination;

    let mut current = points.clone();
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rounds: Vec<RoundTrace> = Vec::new();
    let mut removal_round = vec![0usize; n]; // 0 = never removed

    let mut round_index = 0;
    while indices.len() as f64 > threshold {
        round_index += 1;
        match bsod_round(&current, &indices, round_index, config)? {
            RoundOutcome::Split {
                trace,
                kept_points,
                kept_indices,
            } => {
                for &i in &trace.removed_indices {
                    removal_round[i] = round_index;
                }
                rounds.push(trace);
                current = kept_points;
                indices = kept_indices;
            }
            RoundOutcome::Degenerate(trace) => {
                rounds.push(trace);
                break;
            }
        }
    }

    let total_rounds = round_index.max(1);
    let scores = removal_round
        .iter()
        .map(|&r| {
            if r == 0 {
                1.0
            } else {
                r as f64 / (total_rounds + 1) as f64
            }
        })
        .collect();
    Ok(DetectionResult {
        outlier_indices: indices,
        rounds,
        scores,
    })
}
