use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const COMPUTATION: i32 = 1;
    /// Reserved for argument errors reported by clap.
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    /// The computation ran and produced a negative verdict.
    pub const NOT_CERTIFIED: i32 = 4;
    pub const CHARGE_EXCEEDS_RANGE: i32 = 5;
}

/// A malformed input document. Every offending field is listed.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{source_name}: {}", problems.join("; "))]
pub struct InputError {
    pub source_name: String,
    pub problems: Vec<String>,
}

impl InputError {
    pub fn new(source_name: impl Into<String>, problems: Vec<String>) -> Self {
        Self {
            source_name: source_name.into(),
            problems,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{module}: {source}")]
    Compute {
        module: &'static str,
        source: utfw_core::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot serialize report: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    pub fn compute(module: &'static str) -> impl FnOnce(utfw_core::Error) -> Self {
        move |source| Self::Compute { module, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Read { .. } => exit::INPUT,
            Self::Usage(_) => exit::USAGE,
            _ => exit::COMPUTATION,
        }
    }
}
