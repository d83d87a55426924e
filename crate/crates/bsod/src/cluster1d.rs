//! Exact two-cluster k-means on one-dimensional values.
//!
//! In 1-D the optimal 2-means partition is a threshold split of the sorted
//! values, so a single scan over the n−1 contiguous splits with prefix sums
//! finds the global optimum. No Lloyd loop, no random initialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEGENERATE_RANGE: f64 = 1e-15;

/// Globally optimal 2-means partition; cluster 1 is the one with the
/// larger centroid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Split2 {
    pub assignments: Vec<u8>,
    pub sizes: (usize, usize),
    pub centroids: (f64, f64),
    pub sse: f64,
}

/// Exact 1-D 2-means by threshold scan.
///
/// On SSE ties, the split with fewer points in the high-centroid cluster
/// wins.
pub fn two_means_1d(values: &[f64]) -> Result<Split2> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewPoints { need: 2, got: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let range = sorted[n - 1] - sorted[0];
    if range < DEGENERATE_RANGE {
        return Err(Error::DegenerateValues(range));
    }

    let mut prefix_sum = vec![0.0; n + 1];
    let mut prefix_sq = vec![0.0; n + 1];
    for (i, &v) in sorted.iter().enumerate() {
        prefix_sum[i + 1] = prefix_sum[i] + v;
        prefix_sq[i + 1] = prefix_sq[i] + v * v;
    }
    let seg_sse = |lo: usize, hi: usize| -> f64 {
        // SSE of sorted[lo..hi] around its mean
        let m = (hi - lo) as f64;
        let s = prefix_sum[hi] - prefix_sum[lo];
        let sq = prefix_sq[hi] - prefix_sq[lo];
        (sq - s * s / m).max(0.0)
    };

    // split t: cluster 0 = sorted[..t], cluster 1 = sorted[t..]
    let mut best_t = 1;
    let mut best_sse = f64::INFINITY;
    for t in 1..n {
        let sse = seg_sse(0, t) + seg_sse(t, n);
        // >= keeps later splits on ties, shrinking the high cluster
        if best_sse >= sse {
            best_sse = sse;
            best_t = t;
        }
    }

    let mut assignments = vec![0u8; n];
    for &i in &order[best_t..] {
        assignments[i] = 1;
    }
    let mean0 = (prefix_sum[best_t] - prefix_sum[0]) / best_t as f64;
    let mean1 = (prefix_sum[n] - prefix_sum[best_t]) / (n - best_t) as f64;
    Ok(Split2 {
        assignments,
        sizes: (best_t, n - best_t),
        centroids: (mean0, mean1),
        sse: best_sse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_masses() {
        let s = two_means_1d(&[0.0, 0.0, 10.0, 10.0, 10.0]).unwrap();
        assert_eq!(s.sizes, (2, 3));
        assert_eq!(s.centroids, (0.0, 10.0));
        assert_eq!(s.sse, 0.0);
        assert_eq!(s.assignments, vec![0, 0, 1, 1, 1]);
    }

    #[test]
    fn lone_high_value_splits_off() {
        // splits of [0,1,2,9]: {0}|{1,2,9} sse 38.67, {0,1}|{2,9} sse 25,
        // {0,1,2}|{9} sse 2
        let s = two_means_1d(&[0.0, 1.0, 2.0, 9.0]).unwrap();
        assert_eq!(s.sizes, (3, 1));
        assert!((s.sse - 2.0).abs() < 1e-12);
        assert_eq!(s.assignments, vec![0, 0, 0, 1]);
    }

    #[test]
    fn identical_values_are_degenerate() {
        assert!(matches!(
            two_means_1d(&[5.0, 5.0, 5.0]),
            Err(Error::DegenerateValues(_))
        ));
    }

    #[test]
    fn tie_prefers_smaller_high_cluster() {
        // [0, 1] then [0, 0, 1, 1]: symmetric ties
        let s = two_means_1d(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.sizes, (2, 2));
        // both-zero SSE tie across t=1..3 resolves to the latest split
        let s = two_means_1d(&[0.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.sizes, (1, 3));
        // symmetric three-way tie on [-1, 0, 1]-style data
        let s = two_means_1d(&[-1.0, 0.0, 1.0, 2.0]).unwrap();
        assert!(
            s.sizes.1 <= s.sizes.0,
            "high cluster not minimized: {:?}",
            s.sizes
        );
    }

    #[test]
    fn centroid_order_invariant() {
        let s = two_means_1d(&[3.0, -2.0, 7.0, 7.5, -2.5]).unwrap();
        assert!(s.centroids.0 < s.centroids.1);
        assert_eq!(s.sizes.0 + s.sizes.1, 5);
    }

    #[test]
    fn single_value_is_too_few() {
        assert!(matches!(
            two_means_1d(&[1.0]),
            Err(Error::TooFewPoints { .. })
        ));
    }
}
