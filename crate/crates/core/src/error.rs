use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would exceed a memory or search budget.
    #[error("scale refusal: {what} (bound: {bound})")]
    ScaleRefusal { what: String, bound: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn refusal(what: impl Into<String>, bound: impl Into<String>) -> Self {
        Error::ScaleRefusal { what: what.into(), bound: bound.into() }
    }

    /// True for budget/resource failures (as opposed to bad arguments).
    pub fn is_scale_refusal(&self) -> bool {
        matches!(self, Error::ScaleRefusal { .. })
    }
}
