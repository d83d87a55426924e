//! Demo operations behind the wasm exports, kept free of wasm types so
//! they can be tested natively.

use serde::Serialize;

use bsod::baselines::{flag_top_fraction, iforest_scores, lof_scores, IForestConfig, LofConfig};
use bsod::datasets::{gen_circle, gen_moons};
use bsod::detector::{bsod_detect, BsodConfig};
use bsod::{Error, PointSet, Result};

#[derive(Debug, Serialize)]
pub struct DatasetOut {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub labels: Vec<u8>,
    pub realized_contamination: f64,
}

#[derive(Debug, Serialize)]
pub struct RoundOut {
    pub removed: Vec<usize>,
    pub input_size: usize,
    pub kept_size: usize,
    pub eigenvalue: Option<f64>,
    pub degenerate_exit: bool,
}

#[derive(Debug, Serialize)]
pub struct BsodOut {
    pub flagged: Vec<usize>,
    pub scores: Vec<f64>,
    pub rounds: Vec<RoundOut>,
}

#[derive(Debug, Serialize)]
pub struct BaselineOut {
    pub flagged: Vec<usize>,
    pub scores: Vec<f64>,
}

pub fn generate_dataset(
    kind: &str,
    n_inliers: usize,
    contamination: f64,
    seed: u64,
) -> Result<DatasetOut> {
    let ds = match kind {
        "circle" => gen_circle(n_inliers, contamination, seed)?,
        "moons" => gen_moons(n_inliers, contamination, seed)?,
        other => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("unknown dataset `{other}` (expected circle or moons)"),
            })
        }
    };
    let xs = ds.points.rows().map(|r| r[0]).collect();
    let ys = ds.points.rows().map(|r| r[1]).collect();
    let labels = ds
        .labels
        .as_ref()
        .map(|l| l.iter().map(|&b| b as u8).collect())
        .unwrap_or_default();
    Ok(DatasetOut {
        xs,
        ys,
        labels,
        realized_contamination: ds.contamination.unwrap_or(f64::NAN),
    })
}

fn point_set(xs: &[f64], ys: &[f64]) -> Result<PointSet> {
    if xs.len() != ys.len() {
        return Err(Error::RowCountMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let mut data = Vec::with_capacity(xs.len() * 2);
    for (&x, &y) in xs.iter().zip(ys) {
        data.push(x);
        data.push(y);
    }
    PointSet::new(data, xs.len(), 2)
}

pub fn run_bsod(
    xs: &[f64],
    ys: &[f64],
    contamination: f64,
    eps: f64,
    seed: u64,
) -> Result<BsodOut> {
    let points = point_set(xs, ys)?;
    let mut config = BsodConfig::new(contamination)?;
    config.eps = eps;
    config.seed = seed;
    config.validate()?;
    let result = bsod_detect(&points, &config)?;
    let rounds = result
        .rounds
        .iter()
        .map(|t| RoundOut {
            removed: t.removed_indices.clone(),
            input_size: t.input_size,
            kept_size: t.kept_size,
            eigenvalue: t.eigenvalue,
            degenerate_exit: t.degenerate_exit.is_some(),
        })
        .collect();
    let mut flagged = result.outlier_indices;
    flagged.sort_unstable();
    Ok(BsodOut {
        flagged,
        scores: result.scores,
        rounds,
    })
}

pub fn run_baseline(
    method: &str,
    xs: &[f64],
    ys: &[f64],
    contamination: f64,
    seed: u64,
) -> Result<BaselineOut> {
    let points = point_set(xs, ys)?;
    let scores = match method {
        "lof" => lof_scores(&points, &LofConfig::default())?,
        "iforest" => iforest_scores(
            &points,
            &IForestConfig {
                seed,
                ..Default::default()
            },
        )?,
        other => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("unknown method `{other}` (expected lof or iforest)"),
            })
        }
    };
    let flagged = flag_top_fraction(&scores, contamination)?;
    Ok(BaselineOut { flagged, scores })
}
