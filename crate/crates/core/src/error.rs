use thiserror::Error;

/// Things that can go wrong across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A bigraph or flag violates one of its structural invariants.
    #[error("invalid bigraph: {0}")]
    InvalidBigraph(String),

    /// A vertex id that does not exist in the host bigraph.
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    /// An edge that does not exist in the host bigraph.
    #[error("unknown edge ({0}, {1})")]
    UnknownEdge(String, String),

    /// Size or numeric parameter out of its allowed range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The labeled parts of two flags are not of the same type.
    #[error("flag type mismatch: {0}")]
    TypeMismatch(String),

    /// A step bigraphon violates one of its invariants.
    #[error("invalid kernel field `{field}`: {message}")]
    InvalidKernel { field: String, message: String },

    /// A tree decomposition is malformed (not a tree, empty bag, ...).
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    /// A mathematical precondition of a transform or check does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Input could not be parsed.
    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    /// Two routes that must agree did not.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn kernel(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidKernel {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors that signal a violated mathematical precondition
    /// rather than malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
