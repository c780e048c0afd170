use std::fmt;

use ecp_core::Error;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Io(String),
    Invalid(String),
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
            CliError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Inconsistent(msg) => write!(f, "recovery failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent { t, residual } => CliError::Inconsistent(format!(
                "measurement vector exceeds sparsity budget t = {t} (relative residual {residual:.3e})"
            )),
            Error::EmptySupport => {
                CliError::Inconsistent("measurement vector exceeds sparsity budget: no locator roots".into())
            }
            Error::StepNotCoprime { n, k } => {
                CliError::Invalid(format!("gcd(n,k) ≠ 1 for n = {n}, k = {k}; the plan is not MDS"))
            }
            Error::RatioCondition { i, j, k } => CliError::Invalid(format!(
                "(beta_{i}/beta_{j})^{k} = 1; the ratio condition fails and the plan is not MDS"
            )),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
