use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("expected a directed graph")]
    NotDirected,

    #[error("expected an undirected graph")]
    NotUndirected,

    #[error("graph contains a directed cycle")]
    Cyclic,

    #[error("size mismatch: expected {expected} nodes, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("incomparable runs: {0}")]
    Incomparable(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
