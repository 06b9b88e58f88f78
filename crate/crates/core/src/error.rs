use thiserror::Error;

/// Errors raised by graph construction, parsing and the algorithms built on top.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arc #{index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("arc #{index} ({tail},{head}) is a duplicate")]
    DuplicateArc { index: usize, tail: usize, head: usize },
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("digraph is not strongly connected")]
    NotStrong,
    #[error("vertex {root} does not out-generate the digraph")]
    RootNotGenerating { root: usize },
    #[error("not a permutation of 0..{n}")]
    InvalidPermutation { n: usize },
    #[error("needs at least {min} vertices, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("input of size {n} exceeds the exhaustive-search cap of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("vertex {vertex} is not on the left path")]
    NotOnLeftPath { vertex: usize },
    #[error("vertex {child} is not a child of {parent}")]
    NotAChild { parent: usize, child: usize },
    #[error("no arc closes a cycle from the left subtree onto the left path")]
    NoClosingArc,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid bi-tree: {0}")]
    InvalidBiTree(String),
    #[error("cycle is empty")]
    EmptyCycle,
    #[error("label {label} is used by more than one arc")]
    DuplicateLabel { label: u64 },
    #[error("schedule does not match the arc set: {0}")]
    ScheduleMismatch(String),
    #[error("arc ({tail},{head}) has no reverse arc")]
    NotBioriented { tail: usize, head: usize },
    #[error("underlying graph is disconnected")]
    Disconnected,
    #[error("digraph contains a directed cycle")]
    Cyclic,
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors caused by ill-formed input data rather than by a
    /// well-formed input that violates an algorithm's precondition.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::SelfLoop { .. }
                | Error::DuplicateArc { .. }
                | Error::VertexOutOfRange { .. }
                | Error::Parse { .. }
                | Error::InvalidPermutation { .. }
                | Error::DuplicateLabel { .. }
                | Error::ScheduleMismatch(_)
                | Error::InvalidRequest(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
