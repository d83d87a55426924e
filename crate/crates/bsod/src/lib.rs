//! Boosted spectral outlier detection (BSOD) on sparse ε-neighborhood
//! graph Laplacians, plus Local Outlier Factor and Isolation Forest
//! baselines, synthetic dataset generators and a benchmark harness.

pub mod baselines;
pub mod bench;
pub mod cluster1d;
pub mod datasets;
pub mod detector;
pub mod error;
pub mod graph;
pub mod points;
pub mod spectral;

pub use error::{Error, Result};
pub use points::PointSet;
