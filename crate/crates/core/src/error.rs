use thiserror::Error;

use crate::gauss::ArithmeticError;

#[derive(Debug, Error)]
pub enum DavnError {
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),

    #[error("site count mismatch: expected {expected}, found {found}")]
    SiteCountMismatch { expected: usize, found: usize },

    #[error("digit {digit} out of range for {levels}-level sites")]
    DigitOutOfRange { digit: u8, levels: u8 },

    #[error("site {site} out of range for a {n_sites}-site state")]
    InvalidSite { site: usize, n_sites: usize },

    #[error("operation requires {expected}-level sites, state has {found}")]
    LevelMismatch { expected: u8, found: u8 },

    #[error("operation requires a nonzero state")]
    ZeroState,

    #[error("amplitude {amplitude} of |{ket}> is not a unit fourth root")]
    NonUnitAmplitude { ket: String, amplitude: String },

    #[error("post-selection {pair} has probability 0")]
    ZeroProbabilitySelection { pair: String },

    #[error("post-selection needs two distinct sites, got {site} twice")]
    RepeatedSite { site: usize },

    #[error("outcome {outcome} has probability 0 (outside the support of the joint Z distribution)")]
    OutcomeOutsideSupport { outcome: String },

    #[error("outcome {outcome} does not belong to any paradox family")]
    Unclassified { outcome: String },

    #[error("constraint set is satisfiable; no unsatisfiable core exists")]
    Satisfiable,

    #[error("commutation audit needs an even dimension in 2..={max}, got {d}")]
    InvalidDimension { d: u32, max: u32 },

    #[error("sample run count must be positive")]
    ZeroRuns,

    #[error("parse error{}: {message}", location(*.line))]
    Parse { line: Option<usize>, message: String },

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn location(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

impl DavnError {
    pub(crate) fn parse(line: Option<usize>, message: impl Into<String>) -> Self {
        Self::Parse { line, message: message.into() }
    }
}

pub type Result<T, E = DavnError> = std::result::Result<T, E>;
