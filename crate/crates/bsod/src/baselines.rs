//! Local Outlier Factor and Isolation Forest baselines, self-contained
//! re-implementations of the standard definitions.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::{sq_dist, PointSet};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LofConfig {
    pub k_neighbors: usize,
}

impl Default for LofConfig {
    fn default() -> Self {
        Self { k_neighbors: 20 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IForestConfig {
    pub n_trees: usize,
    pub subsample: usize,
    pub seed: u64,
}

impl Default for IForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 100,
            subsample: 256,
            seed: 0,
        }
    }
}

/// k nearest neighbors of every point by exact distances, ties broken by
/// lower index. Returns (neighbor indices, k-distance) per point.
fn knn(points: &PointSet, k: usize) -> Vec<(Vec<usize>, f64)> {
    let n = points.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let pi = points.row(i);
            let mut dists: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (sq_dist(pi, points.row(j)), j))
                .collect();
            dists.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut head: Vec<(f64, usize)> = dists[..k].to_vec();
            head.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let k_dist = head[k - 1].0.sqrt();
            (head.into_iter().map(|(_, j)| j).collect(), k_dist)
        })
        .collect()
}

/// Classic LOF scores: reach_k(a,b) = max(k-dist(b), dist(a,b)),
/// lrd(a) = 1 / mean reach over a's k-NN, score(a) = mean lrd(b)/lrd(a).
pub fn lof_scores(points: &PointSet, config: &LofConfig) -> Result<Vec<f64>> {
    let n = points.len();
    let k = config.k_neighbors;
    if k < 1 || n <= k {
        return Err(Error::TooFewPoints {
            need: k + 1,
            got: n,
        });
    }
    let neighborhoods = knn(points, k);

    let lrd: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (ref neigh, _) = neighborhoods[i];
            let mean_reach: f64 = neigh
                .iter()
                .map(|&j| {
                    let d = sq_dist(points.row(i), points.row(j)).sqrt();
                    d.max(neighborhoods[j].1)
                })
                .sum::<f64>()
                / k as f64;
            if mean_reach > 0.0 {
                1.0 / mean_reach
            } else {
                f64::INFINITY
            }
        })
        .collect();

    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let (ref neigh, _) = neighborhoods[i];
            neigh
                .iter()
                .map(|&j| {
                    if lrd[j].is_infinite() && lrd[i].is_infinite() {
                        1.0
                    } else {
                        lrd[j] / lrd[i]
                    }
                })
                .sum::<f64>()
                / k as f64
        })
        .collect())
}

/// Average path length of an unsuccessful BST search in a tree of m
/// external nodes; the normalization constant of the isolation forest.
pub fn average_path_length(m: usize) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    match m {
        0 | 1 => 0.0,
        2 => 1.0,
        _ => {
            let m = m as f64;
            let harmonic = (m - 1.0).ln() + EULER_GAMMA;
            2.0 * harmonic - 2.0 * (m - 1.0) / m
        }
    }
}

enum Node {
    Internal {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    External {
        depth: usize,
        size: usize,
    },
}

struct IsolationTree {
    nodes: Vec<Node>,
}

impl IsolationTree {
    fn build(
        points: &PointSet,
        sample_rows: &[usize],
        height_limit: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut nodes = Vec::new();
        let mut stack: Vec<(Vec<usize>, usize, usize)> = Vec::new(); // rows, depth, node slot
        nodes.push(Node::External { depth: 0, size: 0 });
        stack.push((sample_rows.to_vec(), 0, 0));
        while let Some((rows, depth, slot)) = stack.pop() {
            let split = if rows.len() >= 2 && depth < height_limit {
                pick_split(points, &rows, rng)
            } else {
                None
            };
            match split {
                Some((feature, threshold)) => {
                    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                        .iter()
                        .partition(|&&r| points.row(r)[feature] < threshold);
                    let left = nodes.len();
                    nodes.push(Node::External { depth: 0, size: 0 });
                    let right = nodes.len();
                    nodes.push(Node::External { depth: 0, size: 0 });
                    nodes[slot] = Node::Internal {
                        feature,
                        threshold,
                        left,
                        right,
                    };
                    stack.push((left_rows, depth + 1, left));
                    stack.push((right_rows, depth + 1, right));
                }
                None => {
                    nodes[slot] = Node::External {
                        depth,
                        size: rows.len(),
                    };
                }
            }
        }
        Self { nodes }
    }

    fn path_length(&self, row: &[f64]) -> f64 {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                Node::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] < *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                Node::External { depth, size } => {
                    return *depth as f64 + average_path_length(*size);
                }
            }
        }
    }
}

/// Random feature with a nonzero value range in this node, random
/// threshold strictly inside the range. None when nothing separates.
fn pick_split(points: &PointSet, rows: &[usize], rng: &mut ChaCha8Rng) -> Option<(usize, f64)> {
    let d = points.dim();
    let splittable: Vec<usize> = (0..d)
        .filter(|&j| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &r in rows {
                let v = points.row(r)[j];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            hi > lo
        })
        .collect();
    if splittable.is_empty() {
        return None;
    }
    let feature = splittable[rng.random_range(0..splittable.len())];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &r in rows {
        let v = points.row(r)[feature];
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let threshold = rng.random_range(lo..hi);
    // guard against a sample exactly at lo giving an empty left child
    Some((feature, if threshold > lo { threshold } else { hi }))
}

/// Standard isolation forest anomaly scores in (0,1); higher means more
/// anomalous.
pub fn iforest_scores(points: &PointSet, config: &IForestConfig) -> Result<Vec<f64>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let psi = config.subsample.min(n).max(2);
    let height_limit = (psi as f64).log2().ceil() as usize;

    let trees: Vec<IsolationTree> = (0..config.n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(t as u64));
            let rows: Vec<usize> = sample(&mut rng, n, psi).into_iter().collect();
            IsolationTree::build(points, &rows, height_limit, &mut rng)
        })
        .collect();

    let c_psi = average_path_length(psi);
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mean_depth: f64 = trees
                .iter()
                .map(|t| t.path_length(points.row(i)))
                .sum::<f64>()
                / config.n_trees as f64;
            2f64.powf(-mean_depth / c_psi)
        })
        .collect())
}

/// Indices of the ⌈n·c⌉ highest scores, ties broken by lower index.
pub fn flag_top_fraction(scores: &[f64], contamination: f64) -> Result<Vec<usize>> {
    if !(contamination > 0.0 && contamination < 1.0) {
        return Err(Error::InvalidContamination(contamination));
    }
    let n = scores.len();
    let count = ((n as f64 * contamination).ceil() as usize).clamp(1, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut flagged = order[..count].to_vec();
    flagged.sort_unstable();
    Ok(flagged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_grid(side: usize, step: f64) -> PointSet {
        let mut rows = Vec::new();
        for i in 0..side {
            for j in 0..side {
                rows.push(vec![i as f64 * step, j as f64 * step]);
            }
        }
        PointSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn lof_interior_grid_point_scores_near_one() {
        let p = uniform_grid(10, 1.0);
        let scores = lof_scores(&p, &LofConfig { k_neighbors: 8 }).unwrap();
        // center of the grid
        let center = 5 * 10 + 5;
        assert!(
            (scores[center] - 1.0).abs() <= 0.2,
            "interior score {}",
            scores[center]
        );
    }

    #[test]
    fn lof_far_point_has_max_score() {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for i in 0..10 {
            for j in 0..10 {
                rows.push(vec![i as f64 * 0.1, j as f64 * 0.1]);
            }
        }
        rows.push(vec![50.0, 50.0]);
        let p = PointSet::from_rows(&rows).unwrap();
        let scores = lof_scores(&p, &LofConfig::default()).unwrap();
        let far = rows.len() - 1;
        let max_idx = (0..scores.len())
            .max_by(|&a, &b| scores[a].total_cmp(&scores[b]))
            .unwrap();
        assert_eq!(max_idx, far);
        assert!(scores[far] > 10.0, "far score {}", scores[far]);
    }

    #[test]
    fn lof_rejects_k_geq_n() {
        let p = uniform_grid(2, 1.0);
        assert!(matches!(
            lof_scores(&p, &LofConfig { k_neighbors: 4 }),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn iforest_isolates_extreme_point() {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            rows.push(vec![
                rng.random_range(-0.1..0.1),
                rng.random_range(-0.1..0.1),
            ]);
        }
        rows.push(vec![10.0, 10.0]);
        let p = PointSet::from_rows(&rows).unwrap();
        let scores = iforest_scores(&p, &IForestConfig::default()).unwrap();
        let max_idx = (0..scores.len())
            .max_by(|&a, &b| scores[a].total_cmp(&scores[b]))
            .unwrap();
        assert_eq!(max_idx, 200);
        assert!(scores.iter().all(|&s| s > 0.0 && s < 1.0));
    }

    #[test]
    fn iforest_identical_points_score_equally() {
        let p = PointSet::new(vec![1.0; 40], 20, 2).unwrap();
        let scores = iforest_scores(&p, &IForestConfig::default()).unwrap();
        for &s in &scores {
            assert_eq!(s, scores[0]);
        }
        assert!((scores[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn iforest_deterministic_per_seed() {
        let p = uniform_grid(8, 0.3);
        let c = IForestConfig {
            seed: 5,
            ..Default::default()
        };
        assert_eq!(
            iforest_scores(&p, &c).unwrap(),
            iforest_scores(&p, &c).unwrap()
        );
    }

    #[test]
    fn iforest_constant_feature_is_inert() {
        // appending a constant feature must not change scores
        let base = uniform_grid(6, 0.5);
        let with_const: Vec<Vec<f64>> = base.rows().map(|r| vec![r[0], r[1], 7.0]).collect();
        let p3 = PointSet::from_rows(&with_const).unwrap();
        let c = IForestConfig {
            seed: 11,
            ..Default::default()
        };
        let s2 = iforest_scores(&base, &c).unwrap();
        let s3 = iforest_scores(&p3, &c).unwrap();
        for (a, b) in s2.iter().zip(&s3) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn flag_top_fraction_examples() {
        assert_eq!(
            flag_top_fraction(&[0.1, 0.9, 0.5, 0.2], 0.25).unwrap(),
            vec![1]
        );
        assert_eq!(
            flag_top_fraction(&[0.5, 0.5, 0.1], 0.5).unwrap(),
            vec![0, 1]
        );
        let scores = vec![0.3; 100];
        assert_eq!(flag_top_fraction(&scores, 1e-9).unwrap(), vec![0]);
        assert!(flag_top_fraction(&scores, 1.5).is_err());
    }

    #[test]
    fn flagged_scores_dominate_unflagged() {
        let scores = vec![0.2, 0.8, 0.4, 0.8, 0.1, 0.6];
        let flagged = flag_top_fraction(&scores, 0.5).unwrap();
        assert_eq!(flagged.len(), 3);
        let min_flagged = flagged
            .iter()
            .map(|&i| scores[i])
            .fold(f64::INFINITY, f64::min);
        for (i, &s) in scores.iter().enumerate() {
            if !flagged.contains(&i) {
                assert!(s <= min_flagged);
            }
        }
    }
}
