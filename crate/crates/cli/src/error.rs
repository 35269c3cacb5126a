use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] auxit::Error),
    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: auxit::Error,
    },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// One-line machine-readable error report.
#[derive(Debug, Serialize)]
pub struct ErrorLine {
    pub error: &'static str,
    pub message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "library",
            CliError::Run { .. } => "run",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Pool(_) => "thread_pool",
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&ErrorLine {
            error: self.kind(),
            message: self.to_string(),
        })
        .expect("error line serializes")
    }
}
