//! Library half of the `entroflow` command: workspace loading, reports,
//! verification suites and the command implementations.

pub mod commands;
pub mod error;
pub mod report;
pub mod suites;
pub mod workspace;

pub use commands::{cmd_entropy, cmd_eval, cmd_verify, resolve_options, EntropyArgs, OptionFlags, Target};
pub use error::CliError;
pub use report::{Item, Outcome, Report, Status};
pub use workspace::Workspace;
