use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("hypergeometric series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("c = {c} is within tolerance of a nonpositive integer")]
    PoleAtC { c: Complex64 },

    #[error("|y| = {abs_y} exceeds the series radius bound {bound}")]
    DomainError { abs_y: f64, bound: f64 },

    #[error("complex power evaluated on the branch cut (argument {arg})")]
    BranchPowerError { arg: Complex64 },

    #[error("matching matrix is numerically singular (condition estimate {condition:e})")]
    SingularMatching { condition: f64 },

    #[error("root refinement did not converge near E = {seed} (|det| = {residual:e})")]
    NoConvergence { seed: Complex64, residual: f64 },

    #[error("integrator exceeded {max_steps} steps")]
    StepLimitExceeded { max_steps: usize },

    #[error("integrator step underflow at z = {z}")]
    StepUnderflow { z: f64 },

    #[error("mismatch does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("lost track of the ground state at mu2 = {mu2} (last good mu2 = {last_good})")]
    ContinuationLost { mu2: f64, last_good: f64 },

    #[error("bound state index {index} requested but only {available} found")]
    UnknownBoundIndex { index: usize, available: usize },

    #[error("invalid device parameters: {0}")]
    InvalidParams(String),

    #[error("scattering requires E > V0 (E = {energy}, V0 = {v0})")]
    BelowThreshold { energy: f64, v0: f64 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
