//! Crate-wide error type.

use crate::dist::{DistributionSpec, Family};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by parsing, validation, fitting, and synthesis.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A CSV row could not be parsed. `line` is the 1-based line number in
    /// the input stream (the header is line 1).
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    /// A record field violates its invariant (for example a non-positive
    /// distance).
    #[error("invalid field {field}: {message}")]
    InvalidField {
        field: &'static str,
        message: String,
    },

    /// A row is bit-identical to an earlier one; duplicates are rejected
    /// rather than silently deduplicated so statistics never double count.
    #[error("line {line}: duplicate of an earlier record")]
    DuplicateRecord { line: u64 },

    /// Records sharing a `link_id` disagree on per-link metadata.
    #[error("link {link_id}: {message}")]
    InconsistentLink { link_id: String, message: String },

    /// A distribution specification violates its parameter domain.
    #[error("invalid {family} spec: {message}")]
    InvalidSpec { family: Family, message: String },

    /// Generic precondition violation (argument out of domain).
    #[error("{0}")]
    InvalidArgument(String),

    /// An operation that requires data received none.
    #[error("empty input: {0}")]
    EmptyData(&'static str),

    /// Too few points to fit the requested family.
    #[error("{family}: need at least {needed} points, got {got}")]
    TooFewPoints {
        family: Family,
        needed: usize,
        got: usize,
    },

    /// The optimizer exhausted its budget without meeting the convergence
    /// tolerance. The best parameters seen so far are carried along so the
    /// caller can still inspect them.
    #[error("{family}: optimizer did not converge within {evals} evaluations (best so far: {best})")]
    NonConvergence {
        family: Family,
        evals: usize,
        best: Box<DistributionSpec>,
    },

    /// The sample is degenerate for the requested operation (for example
    /// zero variance where spread is required).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// No fitted candidate satisfied the selection policy.
    #[error("no acceptable fit for {context}; candidates: {candidates}")]
    NoAcceptableFit { context: String, candidates: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
