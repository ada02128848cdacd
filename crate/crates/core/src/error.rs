use std::path::PathBuf;

use thiserror::Error;

use crate::pipeline::config::ConfigIssue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("input domain error: {0}")]
    InputDomain(String),

    /// The requested state has no support in the subspace being projected on.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// A spectral grid is too coarse to resolve the features it must carry.
    #[error("grid resolution error: {0}")]
    Resolution(String),

    /// The measurement set does not determine a two-qubit state.
    #[error("measurement set is not informationally complete: {0}")]
    InformationalCompleteness(String),

    #[error("invalid configuration ({} issue(s)):\n{}", .0.len(), format_issues(.0))]
    Config(Vec<ConfigIssue>),

    #[error("unknown scenario `{name}`; valid scenarios: {}", .valid.join(", "))]
    UnknownScenario { name: String, valid: Vec<&'static str> },

    #[error("malformed {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::InputDomain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn format_issues(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}
