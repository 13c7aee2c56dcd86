use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("instance too large for the exact solver: n = {n} exceeds the limit {limit}")]
    Capacity { n: usize, limit: usize },

    /// A local pair selected both endpoints of an edge.
    #[error("local pair is not compatible: both endpoints of edge ({l}, {r}) were selected")]
    Compatibility { l: u32, r: u32 },

    #[error("vertex {vertex:?} is out of range for n = {n}")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("graph text, line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
