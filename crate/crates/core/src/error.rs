use thiserror::Error;

/// Which web invariant a malformed web breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WebFault {
    Degree,
    Orientation,
    Parts,
}

impl WebFault {
    pub fn as_str(self) -> &'static str {
        match self {
            WebFault::Degree => "degree",
            WebFault::Orientation => "orientation",
            WebFault::Parts => "parts",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid gauss code: {0}")]
    InvalidCode(String),
    #[error("invalid web ({}): {detail}", .fault.as_str())]
    InvalidWeb { fault: WebFault, detail: String },
    #[error("specialization point must be 1 or -1, got {0}")]
    BadSpecialization(i64),
    #[error("wrong code mode: {0}")]
    WrongMode(&'static str),
    #[error("web is not connected")]
    Disconnected,
    #[error("web carries {0} free circle(s)")]
    HasCircles(u32),
    #[error("input has no vertices or crossings")]
    Empty,
    #[error("stale reduction site: {0}")]
    StaleSite(String),
    #[error("quadrilateral has coincident vertices")]
    DegenerateSquare,
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error("invariance check failed: {0}")]
    InvarianceMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable class, printed by the CLI.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::InvalidCode(_) => "invalid-code",
            Error::InvalidWeb { .. } => "invalid-web",
            Error::BadSpecialization(_) => "bad-specialization",
            Error::WrongMode(_) => "wrong-mode",
            Error::Disconnected => "disconnected",
            Error::HasCircles(_) => "has-circles",
            Error::Empty => "empty",
            Error::StaleSite(_) => "stale-site",
            Error::DegenerateSquare => "degenerate-square",
            Error::MoveNotApplicable(_) => "move-not-applicable",
            Error::InvarianceMismatch(_) => "invariance-mismatch",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn web(fault: WebFault, detail: impl Into<String>) -> Self {
        Error::InvalidWeb {
            fault,
            detail: detail.into(),
        }
    }
}
