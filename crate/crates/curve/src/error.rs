use exact_core::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("invalid model: {0}")]
    BadModel(String),
    #[error("continuation failed at lambda={lambda} (last good lambda={last_good})")]
    ContinuationFailed { lambda: Complex64, last_good: Complex64 },
    #[error("evaluation at pole -epsilon_{index} (z={z})")]
    Pole { z: Complex64, index: usize },
    #[error("root finder did not converge (max residual {residual:e})")]
    RootFinder { residual: f64 },
    #[error("no critical coupling in [{lo}, {hi}]")]
    NoCritical { lo: f64, hi: f64 },
    #[error("involution selection ambiguous at q={q}")]
    AmbiguousInvolution { q: Complex64 },
    #[error("branch index {index} out of range for {count} ramification points")]
    BadBranch { index: usize, count: usize },
}
