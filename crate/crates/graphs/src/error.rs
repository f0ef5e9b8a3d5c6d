use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("not connected")]
    NotConnected,
    #[error("degenerate spectrum: zero propagator denominator")]
    DegenerateSpectrum,
    #[error("enumeration budget exceeded: about {estimated:.3e} diagrams at v={v}, n={n} (budget {budget})")]
    Budget { v: usize, n: usize, estimated: f64, budget: u64 },
    #[error("invalid boundary: {0}")]
    BadBoundary(String),
    #[error(transparent)]
    Exact(#[from] exact_core::ExactError),
}
