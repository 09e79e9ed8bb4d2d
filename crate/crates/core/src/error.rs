use thiserror::Error;

/// Errors shared by every topoforge operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopoError {
    #[error("universe mismatch: expected a subset of {expected} points, got one over {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("resource cap exceeded: {what} = {requested} is above the cap of {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl TopoError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        TopoError::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        TopoError::Precondition(msg.into())
    }
}

pub type Result<T, E = TopoError> = std::result::Result<T, E>;
