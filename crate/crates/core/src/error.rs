use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Input-shaped problems (bad graphs, bad clusters, bad vectors) are kept
/// separate from [`Error::Invariant`], which signals that an internal
/// cross-check between two independent computations disagreed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid cluster: {0}")]
    InvalidCluster(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),

    #[error("invalid polynomial: {0}")]
    Polynomial(String),

    #[error("missing tangent data for free point p{0}")]
    MissingTangent(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The B_0 estimate needs an indeterminacy point, i.e. a positive
    /// coefficient on the attaching component.
    #[error("coefficient on attaching component is 0: the wedge lifts and the B0 estimate does not apply")]
    NoIndeterminacy,

    #[error("knowledge base: {0}")]
    KnowledgeBase(String),

    #[error("conflicting verdict for key {key}: stored {stored}, offered {offered}")]
    VerdictConflict {
        key: String,
        stored: String,
        offered: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
