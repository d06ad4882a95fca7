use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::frames::FrameSpectrum;
use contframe::random::{random_frame, rng};
use contframe::{bound_constants, frame_operator, kron_op, tensor_frame};

use super::{invalid, rel_err, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Tensor products of random frames.

Parameters:
  instances   number of random frame pairs (default 100)
  dims        fixed [n1, n2]; random in 1..=max_dim when absent
  atoms       fixed [K1, K2]; random in n..=max_atoms when absent
  max_dim     (default 4)
  max_atoms   (default 8)
  seed        required

Verifies:
  - S_{F1⊗F2} = S_{F1} ⊗ S_{F2} entrywise
  - the optimal bounds multiply: A = A1 A2 and B = B1 B2
  - the bound constants of F2 recover the factor bounds: A/C_{F2} = A1 and B/D_{F2} = B1
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub instances: usize,
    pub dims: Option<[usize; 2]>,
    pub atoms: Option<[usize; 2]>,
    pub max_dim: usize,
    pub max_atoms: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            instances: 100,
            dims: None,
            atoms: None,
            max_dim: 4,
            max_atoms: 8,
        }
    }
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::TensorCheck, seed)?;
    if p.max_dim == 0 || p.max_atoms < p.max_dim {
        return Err(invalid("need 1 <= max_dim <= max_atoms"));
    }
    if let Some(d) = p.dims {
        if d.contains(&0) {
            return Err(invalid("dims must be positive"));
        }
        if let Some(k) = p.atoms {
            if k[0] < d[0] || k[1] < d[1] {
                return Err(invalid("atoms must be at least dims for the families to be frames"));
            }
        }
    }
    let mut r = rng(seed);
    let (mut lo_err, mut hi_err, mut fact_err, mut c_err, mut d_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..p.instances {
        let pick = |j: usize, r: &mut contframe::random::SeededRng| {
            let n = p.dims.map_or_else(|| r.random_range(1..=p.max_dim), |d| d[j]);
            let k = p.atoms.map_or_else(|| r.random_range(n..=p.max_atoms.max(n)), |a| a[j]);
            random_frame(r, n, k)
        };
        let f1 = pick(0, &mut r);
        let f2 = pick(1, &mut r);
        let joint = tensor_frame(&f1, &f2);
        let s1 = FrameSpectrum::new(&f1);
        let s2 = FrameSpectrum::new(&f2);
        let sj = FrameSpectrum::new(&joint);
        let (a1, b1) = (s1.bounds.lower, s1.bounds.upper);
        let (a2, b2) = (s2.bounds.lower, s2.bounds.upper);
        let (a, b) = (sj.bounds.lower, sj.bounds.upper);
        lo_err = lo_err.max(rel_err(a, a1 * a2, f64::MIN_POSITIVE));
        hi_err = hi_err.max(rel_err(b, b1 * b2, f64::MIN_POSITIVE));
        let kron = kron_op(&frame_operator(&f1), &frame_operator(&f2));
        fact_err = fact_err.max(sj.operator.max_abs_diff(&kron) / kron.max_abs());
        let c2 = bound_constants(&f2);
        c_err = c_err.max(rel_err(a / c2.lower, a1, f64::MIN_POSITIVE));
        d_err = d_err.max(rel_err(b / c2.upper, b1, f64::MIN_POSITIVE));
    }
    let checks = vec![
        Check::at_most("lambda_min(S) = A1 A2 (max relative error)", lo_err, 1e-10),
        Check::at_most("lambda_max(S) = B1 B2 (max relative error)", hi_err, 1e-10),
        Check::at_most("S_{F1⊗F2} = S_F1 ⊗ S_F2 (max relative entry error)", fact_err, 1e-12),
        Check::at_most("A / C_F2 = lambda_min(S_F1) (max relative error)", c_err, 1e-10),
        Check::at_most("B / D_F2 = lambda_max(S_F1) (max relative error)", d_err, 1e-10),
    ];
    Ok(Outcome::new(&p, checks, json!({ "instances": p.instances })))
}
