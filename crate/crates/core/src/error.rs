use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown distribution family `{0}`")]
    UnknownFamily(String),

    #[error("expectation diverges: {0}")]
    DivergentMean(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("dominance holds for every degree up to k_max = {certified_up_to}")]
    KMaxExhausted { certified_up_to: u32 },

    #[error("no second-order dominance: {0}")]
    NoDominance(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("sample size {sample} does not match null table size {table}")]
    SizeMismatch { sample: usize, table: usize },

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
