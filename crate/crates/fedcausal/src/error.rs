//! Crate-wide error type.
//!
//! Variants are grouped by failure class so the CLI can map them onto
//! stable exit codes (usage/config -> 1, runtime -> 2, comparison -> 3).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A weight vector handed to belief normalization contained a
    /// non-finite entry.
    #[error("malformed weights: {0}")]
    MalformedWeights(String),

    /// A belief was constructed with a component below the full-support
    /// floor. Silent clamping is never performed; fix the inputs instead.
    #[error("full-support violation: {0}")]
    FullSupportViolation(String),

    /// Invalid domain object (hypothesis space, model, scenario, ...).
    #[error("invalid {what}: {why}")]
    InvalidInput { what: &'static str, why: String },

    /// An observation fell outside the support of a model.
    #[error("observation outside model support: {0}")]
    ObservationDomain(String),

    /// The requested operation is not defined for this model kind
    /// (e.g. sampling from a replayed likelihood stream).
    #[error("unsupported operation: {0}")]
    UnsupportedOperation(String),

    /// Informativeness is undefined for agents backed by likelihood
    /// streams; analytic impact paths are disabled for them.
    #[error("informativeness unavailable for agent {agent}: {why}")]
    InformativenessUnavailable { agent: usize, why: String },

    /// A likelihood-stream file failed to parse.
    #[error("likelihood stream format error at {path}:{line}: {why}")]
    StreamFormat {
        path: String,
        line: usize,
        why: String,
    },

    /// A trial asked for more steps than a stream source provides.
    #[error("likelihood stream for agent {agent} exhausted: trial horizon {requested} exceeds stream horizon {available}")]
    ExhaustedStream {
        agent: usize,
        requested: usize,
        available: usize,
    },

    /// A construction self-check failed (e.g. the participation recursion
    /// matrix lost row-stochasticity). Indicates a bug, not bad user input.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// One replica of an ensemble failed; the whole ensemble aborts.
    #[error("replica {replica} failed: {source}")]
    ReplicaFailed {
        replica: usize,
        #[source]
        source: Box<Error>,
    },

    /// The reduced steady-state system is singular or too ill-conditioned
    /// to solve reliably.
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// The asymmetric-vs-symmetric misinformation threshold is undefined
    /// at the requested participation probability.
    #[error("misinformation threshold undefined: {0}")]
    UndefinedThreshold(String),

    /// Results produced from different scenarios were paired up.
    #[error("scenario fingerprint mismatch: {0}")]
    FingerprintMismatch(String),

    /// Configuration file could not be parsed.
    #[error("config parse error in {path}: {why}")]
    ConfigParse { path: String, why: String },

    /// Configuration is syntactically valid but violates invariants.
    /// Every detected violation is listed, not just the first.
    #[error("invalid configuration:\n{}", problems.join("\n"))]
    ConfigInvalid { problems: Vec<String> },

    /// Command-line usage error.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            why: why.into(),
        }
    }

    /// Process exit code class for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::ConfigParse { .. } | Error::ConfigInvalid { .. } => 1,
            _ => 2,
        }
    }
}
