use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error(transparent)]
    Exact(#[from] exact_core::ExactError),
    #[error(transparent)]
    Curve(#[from] curve::CurveError),
    #[error(transparent)]
    Correlator(#[from] correlators::CorrelatorError),
    #[error("recursion denominators vanish: coincident values {0} and {1}")]
    CoincidentValues(String, String),
    #[error("invalid index: {0}")]
    BadIndex(String),
    #[error("contour extraction failed: {0}")]
    Contour(String),
}
