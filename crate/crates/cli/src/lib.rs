//! Command-line surface for `llplan`: environment files, benchmark harness, SVG rendering and
//! the `llplan` binary's subcommands.

pub mod app;
pub mod bench;
pub mod envfile;
pub mod svg;

use std::path::Path;

pub use bench::{run_benchmark, BenchmarkConfig, BenchmarkReport, PlannerKind, PlannerSummary, TrialRecord};
pub use envfile::{load_environment, parse_environment, LoadedEnv};
pub use svg::{render_svg, Overlays};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    /// A planner returned a path that failed re-validation.
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("{0}")]
    PlanningFailed(String),
}

impl CliError {
    /// Process exit code: 1 for planning failures, 2 for usage and validation problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::PlanningFailed(_) | CliError::InvalidPath(_) => 1,
            CliError::Usage(_) | CliError::Invalid(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<llplan::Error> for CliError {
    fn from(e: llplan::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
