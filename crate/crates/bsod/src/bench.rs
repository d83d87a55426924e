//! Precision/recall evaluation and the full benchmark grid:
//! datasets × contamination levels × methods × seeds.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{flag_top_fraction, iforest_scores, lof_scores, IForestConfig, LofConfig};
use crate::datasets::{gen_circle, gen_moons, LabeledDataset};
use crate::detector::{bsod_detect, BsodConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DatasetKind {
    Circle,
    Moons,
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetKind::Circle => write!(f, "circle"),
            DatasetKind::Moons => write!(f, "moons"),
        }
    }
}

impl DatasetKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "circle" => Some(DatasetKind::Circle),
            "moons" => Some(DatasetKind::Moons),
            _ => None,
        }
    }

    pub fn generate(self, n_inliers: usize, c: f64, seed: u64) -> Result<LabeledDataset> {
        match self {
            DatasetKind::Circle => gen_circle(n_inliers, c, seed),
            DatasetKind::Moons => gen_moons(n_inliers, c, seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Bsod,
    IForest,
    Lof,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Bsod => write!(f, "BSOD"),
            Method::IForest => write!(f, "IF"),
            Method::Lof => write!(f, "LOF"),
        }
    }
}

impl Method {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bsod" | "BSOD" => Some(Method::Bsod),
            "iforest" | "IF" | "if" => Some(Method::IForest),
            "lof" | "LOF" => Some(Method::Lof),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub datasets: Vec<DatasetKind>,
    pub contaminations: Vec<f64>,
    pub methods: Vec<Method>,
    pub n_inliers: usize,
    pub seeds: Vec<u64>,
    pub eps: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            datasets: vec![DatasetKind::Circle, DatasetKind::Moons],
            contaminations: vec![0.01, 0.05, 0.10, 0.15],
            methods: vec![Method::Bsod, Method::IForest, Method::Lof],
            n_inliers: 10_000,
            seeds: (0..5).collect(),
            eps: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRow {
    pub dataset: DatasetKind,
    pub method: Method,
    pub contamination: f64,
    pub seed: u64,
    pub precision: f64,
    pub recall: f64,
    pub flagged_count: usize,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub dataset: DatasetKind,
    pub method: Method,
    pub contamination: f64,
    pub mean_precision: f64,
    pub mean_recall: f64,
    /// None with a single seed.
    pub sd_precision: Option<f64>,
    pub sd_recall: Option<f64>,
    pub seeds: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellFailure {
    pub dataset: DatasetKind,
    pub method: Method,
    pub contamination: f64,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<MetricsRow>,
    pub aggregates: Vec<Aggregate>,
    pub failures: Vec<CellFailure>,
}

/// precision = |flagged ∩ outliers| / |flagged| (0 for an empty flagged
/// set), recall = |flagged ∩ outliers| / |outliers|.
pub fn precision_recall(flagged: &[usize], labels: &[bool]) -> Result<(f64, f64)> {
    let true_outliers = labels.iter().filter(|&&b| b).count();
    if true_outliers == 0 {
        return Err(Error::NoTrueOutliers);
    }
    let tp = flagged.iter().filter(|&&i| labels[i]).count();
    let precision = if flagged.is_empty() {
        0.0
    } else {
        tp as f64 / flagged.len() as f64
    };
    let recall = tp as f64 / true_outliers as f64;
    Ok((precision, recall))
}

/// Runs one method on a labeled dataset with the true contamination and
/// returns (flagged indices, precision, recall).
pub fn evaluate_method(
    dataset: &LabeledDataset,
    method: Method,
    contamination: f64,
    eps: f64,
    seed: u64,
) -> Result<(Vec<usize>, f64, f64)> {
    let labels = dataset.labels.as_ref().ok_or(Error::NoTrueOutliers)?;
    let flagged = run_method(dataset, method, contamination, eps, seed)?;
    let (p, r) = precision_recall(&flagged, labels)?;
    Ok((flagged, p, r))
}

/// Flagged index set of a method on a (possibly unlabeled) dataset.
pub fn run_method(
    dataset: &LabeledDataset,
    method: Method,
    contamination: f64,
    eps: f64,
    seed: u64,
) -> Result<Vec<usize>> {
    match method {
        Method::Bsod => {
            let mut config = BsodConfig::new(contamination)?;
            config.eps = eps;
            config.seed = seed;
            let result = bsod_detect(&dataset.points, &config)?;
            let mut flagged = result.outlier_indices;
            flagged.sort_unstable();
            Ok(flagged)
        }
        Method::IForest => {
            let config = IForestConfig {
                seed,
                ..Default::default()
            };
            let scores = iforest_scores(&dataset.points, &config)?;
            flag_top_fraction(&scores, contamination)
        }
        Method::Lof => {
            let scores = lof_scores(&dataset.points, &LofConfig::default())?;
            flag_top_fraction(&scores, contamination)
        }
    }
}

/// Runs every grid cell, recording failures per cell instead of aborting.
pub fn run_grid(config: &GridConfig) -> BenchReport {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &dataset_kind in &config.datasets {
        for &c in &config.contaminations {
            for &seed in &config.seeds {
                let dataset = match dataset_kind.generate(config.n_inliers, c, seed) {
                    Ok(d) => d,
                    Err(e) => {
                        for &method in &config.methods {
                            failures.push(CellFailure {
                                dataset: dataset_kind,
                                method,
                                contamination: c,
                                seed,
                                message: e.to_string(),
                            });
                        }
                        continue;
                    }
                };
                for &method in &config.methods {
                    let start = Instant::now();
                    match evaluate_method(&dataset, method, c, config.eps, seed) {
                        Ok((flagged, precision, recall)) => rows.push(MetricsRow {
                            dataset: dataset_kind,
                            method,
                            contamination: c,
                            seed,
                            precision,
                            recall,
                            flagged_count: flagged.len(),
                            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
                        }),
                        Err(e) => failures.push(CellFailure {
                            dataset: dataset_kind,
                            method,
                            contamination: c,
                            seed,
                            message: e.to_string(),
                        }),
                    }
                }
            }
        }
    }
    let aggregates = aggregate(&rows, config);
    BenchReport {
        rows,
        aggregates,
        failures,
    }
}

fn aggregate(rows: &[MetricsRow], config: &GridConfig) -> Vec<Aggregate> {
    let mut out = Vec::new();
    for &dataset in &config.datasets {
        for &method in &config.methods {
            for &c in &config.contaminations {
                let cell: Vec<&MetricsRow> = rows
                    .iter()
                    .filter(|r| r.dataset == dataset && r.method == method && r.contamination == c)
                    .collect();
                if cell.is_empty() {
                    continue;
                }
                let k = cell.len() as f64;
                let mp = cell.iter().map(|r| r.precision).sum::<f64>() / k;
                let mr = cell.iter().map(|r| r.recall).sum::<f64>() / k;
                let (sp, sr) = if cell.len() > 1 {
                    let vp =
                        cell.iter().map(|r| (r.precision - mp).powi(2)).sum::<f64>() / (k - 1.0);
                    let vr = cell.iter().map(|r| (r.recall - mr).powi(2)).sum::<f64>() / (k - 1.0);
                    (Some(vp.sqrt()), Some(vr.sqrt()))
                } else {
                    (None, None)
                };
                out.push(Aggregate {
                    dataset,
                    method,
                    contamination: c,
                    mean_precision: mp,
                    mean_recall: mr,
                    sd_precision: sp,
                    sd_recall: sr,
                    seeds: cell.len(),
                });
            }
        }
    }
    out
}

impl BenchReport {
    pub fn aggregate_for(
        &self,
        dataset: DatasetKind,
        method: Method,
        c: f64,
    ) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| {
            a.dataset == dataset && a.method == method && (a.contamination - c).abs() < 1e-12
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
    Json,
}

/// Deterministic text rendering of a report. Metrics use fixed 2-decimal
/// formatting; the CSV carries the per-seed rows, the markdown the
/// aggregate tables, the JSON everything including runtimes.
pub fn render_report(report: &BenchReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    match format {
        ReportFormat::Csv => Ok(render_csv(report)),
        ReportFormat::Markdown => Ok(render_markdown(report)),
        ReportFormat::Json => serde_json::to_string_pretty(report).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        }),
    }
}

fn render_csv(report: &BenchReport) -> String {
    let mut out =
        String::from("dataset,method,contamination,seed,precision,recall,flagged_count\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{:.2},{:.2},{}\n",
            r.dataset, r.method, r.contamination, r.seed, r.precision, r.recall, r.flagged_count
        ));
    }
    out
}

/// Parses the text produced by the CSV renderer back into rows
/// (runtimes are not part of the CSV and come back as zero).
pub fn parse_report_csv(text: &str) -> Result<Vec<MetricsRow>> {
    let mut rows = Vec::new();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "dataset,method,contamination,seed,precision,recall,flagged_count")) => {
        }
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "bad report header".to_string(),
            })
        }
    }
    for (i, line) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        rows.push(MetricsRow {
            dataset: DatasetKind::parse(fields[0])
                .ok_or_else(|| parse_err(format!("unknown dataset `{}`", fields[0])))?,
            method: Method::parse(fields[1])
                .ok_or_else(|| parse_err(format!("unknown method `{}`", fields[1])))?,
            contamination: fields[2]
                .parse()
                .map_err(|_| parse_err("bad contamination".into()))?,
            seed: fields[3]
                .parse()
                .map_err(|_| parse_err("bad seed".into()))?,
            precision: fields[4]
                .parse()
                .map_err(|_| parse_err("bad precision".into()))?,
            recall: fields[5]
                .parse()
                .map_err(|_| parse_err("bad recall".into()))?,
            flagged_count: fields[6]
                .parse()
                .map_err(|_| parse_err("bad flagged_count".into()))?,
            runtime_ms: 0.0,
        });
    }
    Ok(rows)
}

fn render_markdown(report: &BenchReport) -> String {
    let mut datasets: Vec<DatasetKind> = Vec::new();
    for a in &report.aggregates {
        if !datasets.contains(&a.dataset) {
            datasets.push(a.dataset);
        }
    }
    let mut out = String::new();
    for dataset in datasets {
        let aggs: Vec<&Aggregate> = report
            .aggregates
            .iter()
            .filter(|a| a.dataset == dataset)
            .collect();
        let mut contaminations: Vec<f64> = Vec::new();
        let mut methods: Vec<Method> = Vec::new();
        for a in &aggs {
            if !contaminations
                .iter()
                .any(|&c| (c - a.contamination).abs() < 1e-12)
            {
                contaminations.push(a.contamination);
            }
            if !methods.contains(&a.method) {
                methods.push(a.method);
            }
        }
        contaminations.sort_by(f64::total_cmp);

        out.push_str(&format!("## Results on dataset `{dataset}`\n\n"));
        out.push_str("| Method |");
        for &c in &contaminations {
            out.push_str(&format!(" c={:.0}% P | c={:.0}% R |", c * 100.0, c * 100.0));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in &contaminations {
            out.push_str("---|---|");
        }
        out.push('\n');
        for &method in &methods {
            out.push_str(&format!("| {method} |"));
            for &c in &contaminations {
                match aggs
                    .iter()
                    .find(|a| a.method == method && (a.contamination - c).abs() < 1e-12)
                {
                    Some(a) => {
                        let sd = |s: Option<f64>| match s {
                            Some(v) => format!("±{v:.2}"),
                            None => String::new(),
                        };
                        out.push_str(&format!(
                            " {:.2}{} | {:.2}{} |",
                            a.mean_precision,
                            sd(a.sd_precision),
                            a.mean_recall,
                            sd(a.sd_recall)
                        ));
                    }
                    None => out.push_str(" - | - |"),
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    if !report.failures.is_empty() {
        out.push_str("## Failed cells\n\n");
        for f in &report.failures {
            out.push_str(&format!(
                "- {} / {} / c={} / seed={}: {}\n",
                f.dataset, f.method, f.contamination, f.seed, f.message
            ));
        }
    }
    out
}
