use thiserror::Error;

use crate::csp::{CspError, ParseError, TriangleFreeReport, ValidationReport};
use crate::fourier::FourierError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Csp(#[from] CspError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid instance:\n{0}")]
    Invalid(ValidationReport),
    #[error("instance is not triangle-free: {0}")]
    NotTriangleFree(TriangleFreeReport),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{what} supports at most {max} variables, instance has {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for errors caused by the input violating an algorithm's
    /// requirements, as opposed to malformed parameters.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::NotTriangleFree(_) | Error::Precondition(_) | Error::TooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
