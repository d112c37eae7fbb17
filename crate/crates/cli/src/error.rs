use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("reading {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: String,
        source: toml::de::Error,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] ansec::Error),
}

impl CliError {
    /// Process exit code: everything that stops a run before it produces
    /// rows is a configuration problem.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
