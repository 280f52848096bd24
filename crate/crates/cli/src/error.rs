use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config key `{key}`: {reason}")]
    Config { key: String, reason: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("output directory {0} is not empty; pass --overwrite to replace it")]
    OutputExists(String),
    #[error(transparent)]
    Core(#[from] pn_core::PnError),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::OutputExists(_) => "output_exists",
            CliError::Core(_) => "solver",
            CliError::Usage(_) => "usage",
        };
        let mut v = json!({ "error": kind, "message": self.to_string() });
        match self {
            CliError::Config { key, .. } => v["key"] = json!(key),
            CliError::Io { path, .. } => v["path"] = json!(path),
            _ => {}
        }
        v
    }
}
