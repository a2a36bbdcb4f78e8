use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "orbital count {n_orb} with {n_alpha} alpha / {n_beta} beta electrons is not representable"
    )]
    Domain {
        n_orb: usize,
        n_alpha: usize,
        n_beta: usize,
    },
    #[error("invalid input: {0}")]
    Input(&'static str),
    #[error("duplicate determinant at positions {first} and {second}")]
    DuplicateDeterminant { first: usize, second: usize },
    #[error("capacity exceeded: {what} is {size}, limit {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParameterLength { expected: usize, got: usize },
    #[error("davidson did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("no sector-valid configurations after resampling at iteration {iteration}")]
    EmptySample { iteration: usize },
}
