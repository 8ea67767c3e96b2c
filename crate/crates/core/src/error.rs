use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("side length L={0} rejected: L must be at least 4")]
    SideTooSmall(usize),
    #[error("side length L={0} must be even for this operation")]
    OddSide(usize),
    #[error("dimension d={0} not supported here: {1}")]
    Dimension(usize, &'static str),
    #[error("coordinate vector has length {got}, expected {expected}")]
    CoordLength { expected: usize, got: usize },
    #[error("site {0} out of range")]
    BadSite(usize),
    #[error("reflection axis {0} invalid (allowed 1..={1})")]
    BadAxis(usize, usize),
    #[error("instance infeasible: {0}")]
    Infeasible(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
