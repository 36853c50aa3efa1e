//! Command-line front end for `lemnis-core`: text reports, SVG snapshots and
//! CSV trajectory dumps.

pub mod commands;
pub mod reference;
pub mod report;
pub mod svg;
pub mod timespec;
pub mod trajectory;

pub use commands::{CliError, CliResult, ModulusChoice, VerifyOptions};
pub use report::RunReport;
pub use timespec::TimeSpec;
