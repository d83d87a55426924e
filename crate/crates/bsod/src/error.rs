use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains a non-finite coordinate at row {row}, column {col}")]
    NonFiniteInput { row: usize, col: usize },
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph has no edges; Laplacian is zero and has no dominant direction")]
    NoEdges,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("values are degenerate (range {0:e} below threshold); no meaningful 2-means split")]
    DegenerateValues(f64),
    #[error("too few points: need at least {need}, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("contamination must lie in (0, 1), got {0}")]
    InvalidContamination(f64),
    #[error("labels contain no true outlier; recall is undefined")]
    NoTrueOutliers,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row count mismatch: {left} vs {right}")]
    RowCountMismatch { left: usize, right: usize },
    #[error("report is empty")]
    EmptyReport,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
