use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    BadGraph(String),

    #[error("graph is not 2-connected (cut vertex witness: {cut_vertex:?})")]
    NotTwoConnected { cut_vertex: Option<usize> },

    #[error("invalid list assignment: {0}")]
    BadListAssignment(String),

    #[error("invalid witness: {0}")]
    BadWitness(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
