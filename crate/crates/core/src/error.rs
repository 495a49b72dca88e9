use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A construction or call parameter violates a stated constraint.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("node {0} has zero degree")]
    ZeroDegree(usize),

    #[error("graph is disconnected ({zero_modes} zero Laplacian eigenvalues)")]
    Disconnected { zero_modes: usize },

    #[error("spectrum has no zero eigenvalue; not a graph Laplacian")]
    NoZeroMode,

    #[error("received power {power} is below the minimum {p_min}")]
    BelowMinimumPower { power: f64, p_min: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("all {trials} walks hit the step cap")]
    AllTruncated { trials: u64 },

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
