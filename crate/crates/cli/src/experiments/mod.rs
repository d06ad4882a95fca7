//! Named experiments. Each one parses its parameter block, runs library
//! computations against independent oracles and returns check records.

mod density;
mod duals;
mod frame_bounds;
mod gabor;
mod multiplier;
mod suite;
mod tensor_check;
mod wavelet;

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::report::{Check, Report};

/// What an experiment hands back before timing and metadata are attached.
pub(crate) struct Outcome {
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Outcome {
    pub(crate) fn new(parameters: &impl Serialize, checks: Vec<Check>, details: Value) -> Self {
        Self {
            parameters: serde_json::to_value(parameters).expect("parameters serialize"),
            checks,
            details,
        }
    }
}

pub(crate) fn dispatch(experiment: Experiment, parameters: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    match experiment {
        Experiment::FrameBounds => frame_bounds::run(parameters, seed),
        Experiment::TensorCheck => tensor_check::run(parameters, seed),
        Experiment::Duals => duals::run(parameters, seed),
        Experiment::Multiplier => multiplier::run(parameters, seed),
        Experiment::Gabor => gabor::run(parameters, seed),
        Experiment::Wavelet => wavelet::run(parameters, seed),
        Experiment::Density => density::run(parameters, seed),
        Experiment::FullSuite => suite::run(parameters, seed),
    }
}

/// Runs the configured experiment. Deterministic given the seed; only
/// `wall_time` varies between runs.
pub fn run(config: &ExperimentConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let outcome = dispatch(config.experiment, &config.parameters, config.seed)?;
    Ok(Report {
        experiment: config.experiment,
        seed: config.seed,
        version: env!("CARGO_PKG_VERSION"),
        parameters: outcome.parameters,
        checks: outcome.checks,
        details: outcome.details,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Parameter schema and verified claims for an experiment name.
pub fn describe(name: &str) -> Result<String, CliError> {
    let experiment: Experiment = name.parse()?;
    let text = match experiment {
        Experiment::FrameBounds => frame_bounds::DESCRIPTION,
        Experiment::TensorCheck => tensor_check::DESCRIPTION,
        Experiment::Duals => duals::DESCRIPTION,
        Experiment::Multiplier => multiplier::DESCRIPTION,
        Experiment::Gabor => gabor::DESCRIPTION,
        Experiment::Wavelet => wavelet::DESCRIPTION,
        Experiment::Density => density::DESCRIPTION,
        Experiment::FullSuite => suite::DESCRIPTION,
    };
    Ok(format!("{experiment}\n\n{}", text.trim_start()))
}

/// `|a − b| / max(|b|, floor)`.
pub(crate) fn rel_err(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
