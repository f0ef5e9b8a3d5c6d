use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("bad argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Exact(#[from] exact_core::ExactError),
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error(transparent)]
    Curve(#[from] curve::CurveError),
    #[error(transparent)]
    Correlator(#[from] correlators::CorrelatorError),
    #[error(transparent)]
    Identity(#[from] identities::IdentityError),
    #[error(transparent)]
    Btr(#[from] btr::BtrError),
}
