use thiserror::Error;

/// Errors surfaced by parsing, site resolution, mining, and dataset loading.
#[derive(Debug, Error)]
pub enum Error {
    /// Braces cannot be balanced at the top level of a source file; the
    /// parser has no anchor left to recover at.
    #[error("{path}:{line}:{col}: unrecoverable input: {message}")]
    UnrecoverableInput {
        path: String,
        line: usize,
        col: usize,
        message: String,
    },

    /// A requested source span does not resolve to an expression node.
    #[error("{path}: no expression found at {start}..{end}")]
    SiteResolution {
        path: String,
        start: usize,
        end: usize,
    },

    /// A caller violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A curation file entry could not be understood.
    #[error("malformed curation entry: {entry}")]
    MalformedCuration { entry: String },

    #[error("dataset schema error: {0}")]
    DatasetSchema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
