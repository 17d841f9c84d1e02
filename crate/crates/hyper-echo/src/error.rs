use thiserror::Error;

/// Errors produced while building or running a simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid stark profile: {0}")]
    InvalidStark(String),

    #[error("invalid pulse sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("oracle input: {0}")]
    OracleInput(String),

    #[error("numerical failure at t = {time} us: {context}")]
    Numerical { time: f64, context: String },

    #[error("noise estimation: {0}")]
    NoiseEstimation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
