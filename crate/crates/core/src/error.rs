use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input document (PGM image or match-graph file).
    #[error("format error: {0}")]
    Format(String),

    /// A quale identifier that is not part of the match graph.
    #[error("unknown quale: {0}")]
    UnknownQuale(String),

    /// An internal invariant broke; this signals a bug, not bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
