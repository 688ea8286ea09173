use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("missing header column `{column}` in {path}")]
    MissingColumn { path: PathBuf, column: String },
    #[error("no_affiliations: centroid requested for an empty affiliation list")]
    NoAffiliations,
    #[error("invalid_gdp: GDP per capita must be positive, got {0}")]
    InvalidGdp(f64),
    #[error("inconsistent_counts: c_i={c_i}, c_j={c_j}, c_ij={c_ij}")]
    InconsistentCounts { c_i: u64, c_j: u64, c_ij: u64 },
    #[error("network needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("unknown country `{0}`")]
    UnknownCountry(String),
    #[error("no_copublications: every pair weight is zero")]
    NoCopublications,
    #[error("histogram needs at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("degenerate_column: `{0}` is constant")]
    DegenerateColumn(String),
    #[error("singular_system: matrix is not positive definite")]
    SingularSystem,
    #[error("collinear_design: column `{column}` is collinear with the others")]
    CollinearDesign { column: String },
    #[error("objective is not finite at {context}")]
    NonFinite { context: String },
    #[error("one_inflation_unsupported: response equal to 1 in row {0}")]
    OneInflationUnsupported(usize),
    #[error("response {value} outside [0, 1] in row {row}")]
    ResponseOutOfRange { row: usize, value: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
