use thiserror::Error;

/// Errors surfaced by the batch operations.
///
/// Structural preconditions that cannot be checked cheaply (joining a
/// non-endpoint, linking a cycle) are only detected in debug builds.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} items vs {right} flags")]
    LengthMismatch { left: usize, right: usize },

    #[error("duplicate key {0} within one batch")]
    DuplicateKey(u64),

    #[error("duplicate endpoint at batch positions {first} and {second}")]
    DuplicateEndpoint { first: usize, second: usize },

    #[error("successor chain starting at node {0} does not terminate")]
    CycleDetected(usize),

    #[error("dictionary is full ({capacity} slots); reserve before inserting")]
    DictionaryFull { capacity: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("edge ({0}, {1}) is not in the forest")]
    MissingEdge(u32, u32),

    #[error("batch items {indices:?} name edges that are not in the forest")]
    MissingEdges { indices: Vec<usize> },

    #[error("linking ({0}, {1}) would create a cycle or duplicate an edge")]
    WouldCreateCycle(u32, u32),

    #[error("elements are not in the same list")]
    DifferentLists,
}

pub type Result<T> = std::result::Result<T, Error>;
