use std::path::PathBuf;

use kappa_core::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{label}: {source}\n  {text}\n  {caret:>width$}", caret = "^", width = source.offset + 1)]
    Expression {
        label: String,
        text: String,
        source: ParseError,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}
