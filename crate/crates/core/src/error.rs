use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown element '{0}'")]
    UnknownElement(String),

    #[error("unknown gate '{0}'")]
    UnknownGate(String),

    #[error("duplicate gate '{0}'")]
    DuplicateGate(String),

    #[error("cycle detected: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("invalid {kind} '{name}': {}", violations.join("; "))]
    InvalidAlgebra {
        kind: &'static str,
        name: String,
        violations: Vec<String>,
    },

    #[error("{what} size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("phase limit exceeded after {0} phases (rank axioms or type assignment violated upstream)")]
    PhaseLimit(usize),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
