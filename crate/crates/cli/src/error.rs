use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{name}: {reason}")]
    Config { name: String, reason: String },
    #[error(transparent)]
    Core(#[from] bipbis::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn config(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "config",
            CliError::Core(bipbis::Error::Capacity { .. }) => "capacity",
            CliError::Core(bipbis::Error::Io(_)) | CliError::Io(_) | CliError::File { .. } | CliError::Csv(_) => "io",
            CliError::Core(bipbis::Error::Parse { .. }) | CliError::Json(_) => "parse",
            CliError::Core(_) => "invalid",
        }
    }

    /// 2 for bad input, 3 for capacity, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "capacity" => 3,
            "io" => 4,
            _ => 2,
        }
    }

    /// `error kind=<kind> message="<text>"` on one line.
    pub fn line(&self) -> String {
        let message = self.to_string().replace('\n', " ");
        format!("error kind={} message={:?}", self.kind(), message)
    }
}
