use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: self-loop on vertex `{token}`")]
    SelfLoop { line: usize, token: String },

    #[error("line {line}: expected two vertex tokens, found `{content}`")]
    MalformedLine { line: usize, content: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("sample size {size} exceeds vertex count {n}")]
    SampleTooLarge { size: usize, n: usize },

    #[error("no sample with at least one edge after {attempts} attempts; source graph is too sparse")]
    SparseSource { attempts: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error("{what} requires at least {min} vertices, got {n}")]
    TooFewVertices { what: &'static str, min: usize, n: usize },

    #[error("{what} supports at most {max} vertices, got {n}")]
    TooManyVertices { what: &'static str, max: usize, n: usize },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("power-law fit: {0}")]
    PowerLaw(String),

    #[error("invalid profile `{name}`: {reason}")]
    InvalidProfile { name: String, reason: String },

    #[error("unknown profile `{0}`")]
    UnknownProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{points} distinct points cannot form {k} clusters")]
    TooFewDistinctPoints { points: usize, k: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
