use thiserror::Error;

/// Errors raised while building, parsing or querying trees.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("empty input: expected a vertex count on the first line")]
    EmptyInput,
    #[error("line {line}: malformed input {content:?}")]
    Malformed { line: usize, content: String },
    #[error("vertex count must be positive")]
    ZeroVertices,
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: edge {u}-{v} closes a cycle")]
    Cycle { line: usize, u: usize, v: usize },
    #[error("expected {expected} edges, found {found}")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("adjacency is not symmetric at {u}-{v}")]
    Asymmetric { u: usize, v: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    NoSuchVertex { vertex: usize, n: usize },
}

/// Invalid generator or experiment parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is below the minimum {min}")]
    BelowMinimum { name: &'static str, value: i64, min: i64 },
    #[error("{0}")]
    Invalid(String),
}

/// Brute-force enumeration refused the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tree has {n} vertices, above the enumeration cap of {cap}")]
pub struct CapExceeded {
    pub n: usize,
    pub cap: usize,
}
