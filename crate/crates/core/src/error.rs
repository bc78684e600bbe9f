use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected 2 tokens, found {found}")]
    Parse { line: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance has {n} nodes, above the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("{0} is undefined for this input")]
    Undefined(&'static str),

    #[error("{measure} did not converge within {iterations} iterations")]
    NoConvergence { measure: &'static str, iterations: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
