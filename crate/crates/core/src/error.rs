use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n_players} players exceeds the dense-simulation cap of {cap}")]
    DimensionCap { n_players: usize, cap: usize },

    #[error("at least 3 players are required, got {0}")]
    TooFewPlayers(usize),

    #[error("eigenvalue {0:e} is below the PSD tolerance")]
    NegativeEigenvalue(f64),

    #[error("malformed subsystem layout: {0}")]
    Layout(String),

    #[error("record has an odd number of Y bases ({0})")]
    OddYCount(usize),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("state source exhausted after {0} states")]
    SourceExhausted(usize),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
}
