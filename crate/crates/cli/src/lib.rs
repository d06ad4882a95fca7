//! Batch experiment runner for the contframe toolkit: JSON configs in,
//! versioned check reports out.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::{Experiment, ExperimentConfig, OutputFormat, OutputSpec};
pub use error::CliError;
pub use experiments::{describe, run};
pub use report::{Check, Relation, Report, SCHEMA};
