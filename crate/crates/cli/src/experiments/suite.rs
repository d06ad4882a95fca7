use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{dispatch, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;

pub const DESCRIPTION: &str = "
Every experiment at the sizes of the acceptance checks, in a fixed order.

Parameters:
  skip   experiment names to leave out (default [])
  seed   required; shared by all experiments

Runs tensor-check (100 pairs), duals, multiplier (200 instances), gabor,
density (20 random states, 200 trace-formula instances), wavelet (reference
grid and 3 refinements) and frame-bounds. Check names are prefixed with the
experiment name.
";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub skip: Vec<String>,
}

const ORDER: [Experiment; 7] = [
    Experiment::TensorCheck,
    Experiment::Duals,
    Experiment::Multiplier,
    Experiment::Gabor,
    Experiment::Density,
    Experiment::Wavelet,
    Experiment::FrameBounds,
];

fn suite_parameters(experiment: Experiment) -> Value {
    match experiment {
        Experiment::Density => json!({ "random_instances": 20, "trace_formula_instances": 200 }),
        _ => Value::Null,
    }
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::FullSuite, seed)?;
    for name in &p.skip {
        name.parse::<Experiment>()?;
    }
    let mut checks = Vec::new();
    let mut details = Map::new();
    for experiment in ORDER {
        if p.skip.iter().any(|s| s == experiment.name()) {
            continue;
        }
        let outcome = dispatch(experiment, &suite_parameters(experiment), Some(seed))?;
        checks.extend(outcome.checks.into_iter().map(|c| c.prefixed(experiment.name())));
        details.insert(
            experiment.name().to_string(),
            json!({ "parameters": outcome.parameters, "details": outcome.details }),
        );
    }
    Ok(Outcome::new(&p, checks, Value::Object(details)))
}
