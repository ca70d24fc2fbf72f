use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported workspace schema {0}")]
    Schema(u32),
    #[error("{location}: unknown name `{name}`")]
    Name { location: String, name: String },
    #[error("{location}: {message}")]
    Type { location: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("missing argument: {0}")]
    MissingArgument(&'static str),
    #[error(transparent)]
    Core(#[from] entroflow_core::Error),
}
