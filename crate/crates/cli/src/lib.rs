//! Command surface of the `thinlie` tool: classifier sweeps, enumeration to
//! JSON lines, per-table analyses and verification reports.

mod commands;
mod document;
mod report;

use thinlie::arith::ArithError;
use thinlie::search::{AlgebraKind, SearchError};
use thiserror::Error;

pub use commands::{admissible, analyze, enumerate, read_documents, verify, Analysis, Target};
pub use document::{AlgebraDocument, MatrixDoc, Payload, SCHEMA_VERSION};
pub use report::{ReportDocument, ReportViolation};

/// Errors that stop a command before a report exists. All map to exit
/// status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("malformed document: {0}")]
    Document(String),
    #[error("analysis needs a {expected:?} document, found {found:?}")]
    KindMismatch { expected: AlgebraKind, found: AlgebraKind },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}
