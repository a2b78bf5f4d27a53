use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {reason}")]
    Config { path: String, reason: String },
    #[error(transparent)]
    Numerical(#[from] dqpt_core::Error),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("I/O error on {}: {reason}", path.display())]
    Io { path: PathBuf, reason: String },
}

impl CliError {
    pub fn config(path: impl Into<String>, reason: impl ToString) -> Self {
        CliError::Config {
            path: path.into(),
            reason: reason.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, err: impl ToString) -> Self {
        CliError::Io {
            path: path.into(),
            reason: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 1,
            CliError::Numerical(_) | CliError::CheckFailed(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    /// Single-line JSON error record for stderr.
    pub fn record(&self) -> String {
        let v = match self {
            CliError::Config { path, reason } => json!({"error": "config", "path": path, "message": reason}),
            CliError::Numerical(e) => {
                json!({"error": "numerical", "kind": numerical_kind(e), "message": e.to_string()})
            }
            CliError::CheckFailed(m) => json!({"error": "numerical", "kind": "check_failed", "message": m}),
            CliError::Io { path, reason } => {
                json!({"error": "io", "path": path.display().to_string(), "message": reason})
            }
        };
        v.to_string()
    }
}

fn numerical_kind(e: &dqpt_core::Error) -> &'static str {
    use dqpt_core::Error::*;
    match e {
        GapClosure { .. } => "gap_closure",
        InvalidGrid(_) => "invalid_grid",
        NotCritical { .. } => "not_critical",
        NonFiniteRate { .. } => "non_finite_rate",
        BasisUnavailable => "basis_unavailable",
        InvalidModel(_) => "invalid_model",
        DimensionMismatch(_) => "dimension_mismatch",
        Dsl(_) => "dsl",
    }
}
