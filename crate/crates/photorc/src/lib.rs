//! Files, configuration, sweeps and the `photorc` command line around
//! `photorc-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod plot;
pub mod presets;
pub mod report;
pub mod sweep;

pub use error::{CliError, Result};
