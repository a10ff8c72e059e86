use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument x = {x} outside the supported domain [0, 1)")]
    Domain { x: f64 },
    #[error("gamma - alpha - beta = {excess} is within 1e-8 of an integer; connection formula unusable at x = {x}")]
    DegenerateParameters { excess: f64, x: f64 },
    #[error("hypergeometric series did not converge within {terms} terms")]
    NonConvergence { terms: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("energy {eps} is not on the requested spectrum (expected eps^2 = {expected_eps_sq})")]
    OffSpectrum { eps: f64, expected_eps_sq: f64 },
    #[error("elimination singular: eps + m = 0 ({0})")]
    SingularElimination(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
