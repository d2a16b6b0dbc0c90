//! Command-line driver: declarative run configurations, command dispatch,
//! CSV/JSON emission, and the corollary-style diagnostic report.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{Command, RunConfig};
pub use runner::{execute, ExecOutcome, RunOpts};

/// Driver errors, partitioned by process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or request (exit 3).
    Config(String),
    /// Unreadable or malformed input data (exit 2).
    Input(String),
    /// The requested computation hit a hard cap or floor (exit 4).
    Infeasible(String),
    /// Internal failure (exit 1).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    /// Classifies a math-layer error raised while evaluating a request whose
    /// inputs were already resolved: caps and floors are infeasibility, a
    /// monotonicity violation is an internal defect, everything else traces
    /// back to a configured parameter.
    pub fn from_math(e: equidist::Error) -> CliError {
        use equidist::Error as E;
        match e {
            E::SpectralInfeasible { .. }
            | E::TimeBelowFloor { .. }
            | E::BoundInapplicable(_)
            | E::CalibrationFailed(_) => CliError::Infeasible(e.to_string()),
            E::NotMonotone { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Input(m) => write!(f, "unreadable input: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible request: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
