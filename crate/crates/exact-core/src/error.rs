use thiserror::Error;

/// Errors raised by exact arithmetic.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("series not invertible: constant term is zero")]
    SeriesNotInvertible,
    #[error("derivative singularity: division by a quantity with zero base part")]
    DerivativeSingularity,
    #[error("series has nonzero constant term {0}; cannot divide by lambda")]
    NonzeroConstant(String),
    #[error("direction index {index} out of range for {dirs} directions")]
    DirectionOutOfRange { index: usize, dirs: usize },
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("invalid spectrum: {0}")]
    BadSpectrum(String),
    #[error("invalid contour: {0}")]
    BadContour(String),
}

/// Failure of a contour extraction, tagged with the node where it happened.
#[derive(Debug, Error)]
pub enum CauchyError<E: std::error::Error + 'static> {
    #[error("invalid contour: {0}")]
    BadContour(String),
    #[error("evaluation failed at contour node {node}: {source}")]
    Node {
        node: usize,
        #[source]
        source: E,
    },
    #[error("non-finite value at contour node {node}")]
    NonFinite { node: usize },
}
