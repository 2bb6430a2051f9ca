//! Reproducible verification runs: a TOML [`ExperimentConfig`] in, a JSON
//! [`ExperimentReport`] out.

mod config;
pub mod random;
mod report;
mod suites;

pub use config::{BaseSection, ExperimentConfig, ExperimentSection, ToleranceSection, WindowSection};
pub use report::{CheckRow, Comparison, ExperimentReport, Runtime};
pub use suites::{run, run_rows, Suite};
