//! Library half of the `zkfp` command: configuration, sealed user seeds,
//! per-shape circuit key caching and the subcommands themselves.

pub mod circuits;
pub mod commands;
pub mod config;
pub mod seal;

use std::fmt;

use zkfp_core::{CircuitError, ConstraintError, Groth16Error, MatchError, MinutiaeError, RegistryError, TemplateError};

pub use config::Config;

/// Error classes with fixed process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input, configuration or encoded artifact: exit 2.
    Parse(String),
    /// No usable biometric signal or an unprovable statement: exit 3.
    Biometric(String),
    /// Store, ledger or key files unreadable or corrupted: exit 4.
    Storage(String),
    /// User key not registered: exit 5.
    UnknownKey(String),
    /// Anything else: exit 1.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Biometric(_) => 3,
            Failure::Storage(_) => 4,
            Failure::UnknownKey(_) => 5,
            Failure::Internal(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (class, msg) = match self {
            Failure::Parse(m) => ("input", m),
            Failure::Biometric(m) => ("biometric", m),
            Failure::Storage(m) => ("storage", m),
            Failure::UnknownKey(m) => ("unknown key", m),
            Failure::Internal(m) => ("internal", m),
        };
        write!(f, "{class} error: {msg}")
    }
}

impl std::error::Error for Failure {}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        match e {
            RegistryError::UnknownKey(_) => Failure::UnknownKey(e.to_string()),
            RegistryError::Decode(_) => Failure::Parse(e.to_string()),
            _ => Failure::Storage(e.to_string()),
        }
    }
}

impl From<MinutiaeError> for Failure {
    fn from(e: MinutiaeError) -> Self {
        match e {
            MinutiaeError::Dimension { .. } => Failure::Biometric(e.to_string()),
            _ => Failure::Parse(e.to_string()),
        }
    }
}

impl From<TemplateError> for Failure {
    fn from(e: TemplateError) -> Self {
        match e {
            TemplateError::Format(_) => Failure::Storage(e.to_string()),
            _ => Failure::Biometric(e.to_string()),
        }
    }
}

impl From<MatchError> for Failure {
    fn from(e: MatchError) -> Self {
        Failure::Biometric(e.to_string())
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Unsatisfied { .. } => Failure::Biometric(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<ConstraintError> for Failure {
    fn from(e: ConstraintError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<Groth16Error> for Failure {
    fn from(e: Groth16Error) -> Self {
        match e {
            Groth16Error::Decode(_) => Failure::Parse(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}
