use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) out of range for a graph with {node_count} nodes")]
    EdgeOutOfRange { u: usize, v: usize, node_count: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("granular-ball has no members")]
    EmptyBall,

    #[error("granular-ball with a single member cannot be split")]
    NotSplittable,

    #[error("coarsening ratio {0} is outside (0, 1)")]
    InvalidRatio(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NonSymmetric { row: usize, col: usize },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("missing required file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{}:{line}: edge ({u}, {v}) spans graphs {graph_u} and {graph_v}", path.display())]
    CrossGraphEdge {
        path: PathBuf,
        line: usize,
        u: usize,
        v: usize,
        graph_u: usize,
        graph_v: usize,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
