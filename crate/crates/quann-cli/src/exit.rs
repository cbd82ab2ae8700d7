//! Exit-code policy: 0 success, 2 verification failure, 3 resource or guard
//! limits, 64 usage, 65 data format.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Verification,
    Resource,
    Usage,
    Data,
}

impl ExitKind {
    pub fn code(self) -> u8 {
        match self {
            ExitKind::Verification => 2,
            ExitKind::Resource => 3,
            ExitKind::Usage => 64,
            ExitKind::Data => 65,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Data,
            message: message.into(),
        }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Resource,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Verification,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::resource(format!("i/o error: {err}"))
    }
}

impl From<quann::Error> for CliError {
    fn from(err: quann::Error) -> Self {
        let kind = match &err {
            quann::Error::Guard { .. } | quann::Error::SizeOverflow { .. } => ExitKind::Resource,
            quann::Error::TraceDrift { .. }
            | quann::Error::Numerical { .. }
            | quann::Error::NonFinite { .. } => ExitKind::Resource,
            _ => ExitKind::Usage,
        };
        CliError {
            kind,
            message: err.to_string(),
        }
    }
}

impl From<rqa::Error> for CliError {
    fn from(err: rqa::Error) -> Self {
        let kind = match &err {
            rqa::Error::Guard { .. } | rqa::Error::NoRecurrence { .. } => ExitKind::Resource,
            rqa::Error::SeriesTooShort { .. } | rqa::Error::ConstantSeries => ExitKind::Usage,
            rqa::Error::UndefinedProbability => ExitKind::Resource,
            rqa::Error::Invalid(_) => ExitKind::Usage,
        };
        CliError {
            kind,
            message: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
