use crate::digraph::VertexId;
use crate::packing::Violation;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library API.
///
/// `Internal` signals a violated invariant that the underlying theory
/// guarantees cannot happen on valid inputs; hitting one means either the
/// input sneaked past validation or there is a bug worth reporting.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(usize, usize),
    #[error("arc {0} out of range (graph has {1} arcs)")]
    ArcOutOfRange(usize, usize),
    #[error("source vertex {0} must not belong to the sink set")]
    SourceInSinks(VertexId),
    #[error("sink set must be nonempty")]
    EmptySinks,
    #[error("flow cap limit must be at least 1")]
    ZeroCapLimit,
    #[error("instance requires a root vertex")]
    MissingRoot,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("arc set is infeasible: {0}")]
    Infeasible(Violation),
    #[error("enumeration budget exceeded: {arcs} arcs (limit {limit})")]
    BudgetExceeded { arcs: usize, limit: usize },
    #[error("matroids must share ground set and rank")]
    MatroidMismatch,
    #[error("matroid has no {0} pairwise disjoint bases")]
    NoDisjointBases(usize),
    #[error("family of common bases is empty")]
    NoCommonBases,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("json: {0}")]
    Json(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
