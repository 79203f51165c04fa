//! Job files, the `compute` runner and the corpus check suite behind the
//! `chern` binary.

pub mod compute;
pub mod dispatch;
pub mod error;
pub mod instance;
pub mod job;
pub mod suite;

pub use compute::{run, Report, RunOptions};
pub use dispatch::FieldChoice;
pub use error::CliError;
pub use job::JobSpec;
pub use suite::{run_suite, SuiteOptions, SuiteReport};
