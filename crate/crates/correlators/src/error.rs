use curve::CurveError;
use exact_core::ExactError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrelatorError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("pole of {form}: {detail}")]
    Pole { form: &'static str, detail: String },
    #[error("point is a ramification point (R' = 0)")]
    AtRamification,
    #[error("outside real phase: 4e^2 + 12 lambda = {0} < 0")]
    OutsideRealPhase(f64),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("free energy needs a solved d=1 curve with real coupling")]
    NeedsOneValueCurve,
    #[error("contour node {node} failed: {detail}")]
    Contour { node: usize, detail: String },
}
