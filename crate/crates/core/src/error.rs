//! Shared error type for model construction, solving, and I/O.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("assignment has {got} bits but the model has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("constraint `{label}` cannot be embedded as a quadratic penalty: {reason}")]
    UnsupportedEmbedding { label: String, reason: String },

    #[error("metric undefined for a model with zero variables")]
    UndefinedMetric,

    #[error("unknown term group `{0}`")]
    UnknownGroup(String),

    #[error("invalid bounds: lower {lower} exceeds upper {upper}")]
    InvalidBounds { lower: i64, upper: i64 },

    #[error("value {value} outside encoding range [{lower}, {upper}]")]
    ValueOutOfRange { value: i64, lower: i64, upper: i64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("unknown amino acid `{letter}` at position {position}")]
    UnknownAminoAcid { letter: char, position: usize },

    #[error("invalid codon table: {0}")]
    InvalidCodonTable(String),

    #[error("invalid nucleotide `{0}`")]
    InvalidNucleotide(char),

    #[error("invalid protein sequence: {0}")]
    InvalidProtein(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("problem exceeds solver budget: {0}")]
    BudgetExceeded(String),

    #[error("no feasible assignment exists")]
    NoFeasibleSolution,

    #[error("no records for solver group `{0}`")]
    EmptyGroup(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
