//! Batch runner for `irslab-core` experiments: TOML configs in, CSV/JSON/SVG artifacts and a
//! JSON report out, plus a built-in self-test.

pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod run;
pub mod selftest;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use report::RunReport;
