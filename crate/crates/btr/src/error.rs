use correlators::CorrelatorError;
use curve::CurveError;
use exact_core::{Complex64, ExactError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BtrError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Correlator(#[from] CorrelatorError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid contour: {0}")]
    BadContour(String),
    #[error("non-finite integrand at contour node {node} (point {point})")]
    Node { node: usize, point: Complex64 },
    #[error("kernel singular: {0}")]
    KernelSingular(String),
    #[error("no stable residue circle around {center} after {attempts} shrinks")]
    NoStableRadius { center: Complex64, attempts: usize },
    #[error("argument {0} is not a regular point")]
    Irregular(String),
}
