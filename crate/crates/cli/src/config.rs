use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FrameBounds,
    TensorCheck,
    Duals,
    Multiplier,
    Gabor,
    Wavelet,
    Density,
    FullSuite,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::FrameBounds,
        Experiment::TensorCheck,
        Experiment::Duals,
        Experiment::Multiplier,
        Experiment::Gabor,
        Experiment::Wavelet,
        Experiment::Density,
        Experiment::FullSuite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::FrameBounds => "frame-bounds",
            Experiment::TensorCheck => "tensor-check",
            Experiment::Duals => "duals",
            Experiment::Multiplier => "multiplier",
            Experiment::Gabor => "gabor",
            Experiment::Wavelet => "wavelet",
            Experiment::Density => "density",
            Experiment::FullSuite => "full-suite",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// A JSON experiment description.
///
/// ```json
/// {"experiment": "tensor-check", "seed": 7,
///  "parameters": {"dims": [2, 3], "atoms": [4, 5]},
///  "output": {"path": "report.json", "format": "json"}}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub parameters: Value,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: Option<u64>) -> Self {
        Self {
            experiment,
            seed,
            parameters: Value::Null,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Parses an experiment's parameter block; `null` selects the defaults.
pub fn parameters<T: DeserializeOwned + Default>(value: &Value) -> Result<T, CliError> {
    if value.is_null() {
        return Ok(T::default());
    }
    serde_json::from_value(value.clone()).map_err(|e| CliError::Config(format!("parameters: {e}")))
}

pub fn require_seed(experiment: Experiment, seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Config(format!("experiment `{experiment}` is randomized and needs an explicit seed")))
}
