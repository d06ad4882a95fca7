use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::frames::{frame_operator_parallel, FrameSpectrum};
use contframe::random::{random_frame, random_vector, rng};
use contframe::{analysis, canonical_dual, frame_operator, synthesis};

use super::{invalid, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Frame bounds, frame operator and canonical dual of random frames.

Parameters:
  instances   number of random frames (default 50)
  max_dim     largest dimension n (default 4)
  max_atoms   largest atom count K, K >= n (default 8)
  probes      random vectors per frame for the energy inequality (default 4)
  seed        required

Verifies:
  - A‖f‖² <= ∫|<f,F(x)>|² dμ <= B‖f‖² with A, B the extreme eigenvalues of S_F
  - reconstruction f = T_G T_F^* f through the canonical dual G = S_F⁻¹F
  - parallel and sequential frame-operator assembly agree
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub instances: usize,
    pub max_dim: usize,
    pub max_atoms: usize,
    pub probes: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            instances: 50,
            max_dim: 4,
            max_atoms: 8,
            probes: 4,
        }
    }
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::FrameBounds, seed)?;
    if p.max_dim == 0 || p.max_atoms < p.max_dim {
        return Err(invalid("need 1 <= max_dim <= max_atoms"));
    }
    let mut r = rng(seed);
    let (mut inequality, mut reconstruction, mut parallel) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.instances {
        let n = r.random_range(1..=p.max_dim);
        let k = r.random_range(n..=p.max_atoms);
        let frame = random_frame(&mut r, n, k);
        let spectrum = FrameSpectrum::new(&frame);
        let (a, b) = (spectrum.bounds.lower, spectrum.bounds.upper);
        let dual = canonical_dual(&frame)?;
        for _ in 0..p.probes {
            let f = random_vector(&mut r, n);
            let energy = analysis(&frame, &f)?.norm_sqr();
            let norm2 = f.norm_squared();
            let violation = (a * norm2 - energy).max(energy - b * norm2).max(0.0) / (b * norm2);
            inequality = inequality.max(violation);
            let back = synthesis(&dual, &analysis(&frame, &f)?)?;
            reconstruction = reconstruction.max((back - &f).norm() / f.norm());
        }
        let seq = frame_operator(&frame);
        parallel = parallel.max(frame_operator_parallel(&frame, 3).max_abs_diff(&seq) / seq.max_abs());
    }
    let checks = vec![
        Check::at_most("frame inequality violation (relative)", inequality, 1e-12),
        Check::at_most("canonical dual reconstruction error", reconstruction, 1e-10),
        Check::at_most("parallel frame operator deviation", parallel, 1e-12),
    ];
    Ok(Outcome::new(&p, checks, json!({ "instances": p.instances })))
}
