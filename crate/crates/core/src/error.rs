use thiserror::Error;

use crate::polyexpr::ParseError;

pub type Point = [f64; 3];

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("frame degenerate at {point:?}: |det| = {det:e} below {threshold:e}")]
    Degenerate { point: Point, det: f64, threshold: f64 },
    #[error("normal-form boundary condition violated: {0}")]
    BoundaryCondition(String),
    #[error("pole of a rational coefficient at {0:?}")]
    Pole(Point),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step limit of {limit} reached at t = {t}")]
    TooManySteps { limit: usize, t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("asymptotic domain breaks down: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("no conjugate time before t = {limit}")]
    NotFound { limit: f64 },
    #[error("ill-conditioned fit: {0}")]
    Conditioning(String),
    #[error("extrapolation order {order:.3} below {min}")]
    Convergence { order: f64, min: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
