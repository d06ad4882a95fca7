use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::frames::frame_bounds;
use contframe::linalg::inner;
use contframe::localization::stft_direct;
use contframe::random::{random_vector, rng};
use contframe::{frame_operator, gabor_frame, stft, tensor_frame, CVector, WindowPreset};

use super::{invalid, rel_err, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Finite Gabor systems π(k,l)g on Z_N and the short-time Fourier transform.

Parameters:
  sizes          signal lengths N (default [2, 4, 8, 16])
  windows        windows per size: the delta, gauss and mexican-hat presets, then random (default 5)
  signal_pairs   random (f1, f2) pairs per size for the energy identity (default 50)
  seed           required

Verifies:
  - the Gabor frame of g is tight with bound N‖g‖² (both optimal bounds)
  - Σ V_g f1 · conj(V_g f2) = N <f1, f2> ‖g‖²
  - the FFT-based STFT matches the direct definition
  - the tensor product of two Gabor frames is tight with bound N1 N2 ‖g1‖² ‖g2‖²
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub sizes: Vec<usize>,
    pub windows: usize,
    pub signal_pairs: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            sizes: vec![2, 4, 8, 16],
            windows: 5,
            signal_pairs: 50,
        }
    }
}

const PRESETS: [WindowPreset; 3] = [WindowPreset::Delta, WindowPreset::Gauss, WindowPreset::MexicanHat];

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::Gabor, seed)?;
    if p.sizes.is_empty() || p.sizes.contains(&0) {
        return Err(invalid("sizes must be a nonempty list of positive lengths"));
    }
    let mut r = rng(seed);
    let mut checks = Vec::new();
    let mut per_size = Vec::new();
    let mut tensor_windows: Vec<CVector> = Vec::new();
    for &n in &p.sizes {
        let windows: Vec<CVector> = (0..p.windows)
            .map(|i| match PRESETS.get(i) {
                Some(preset) => preset.discrete(n),
                None => random_vector(&mut r, n),
            })
            .collect();
        let (mut bound_err, mut energy_err, mut fft_err) = (0.0f64, 0.0f64, 0.0f64);
        for g in &windows {
            let sys = gabor_frame(g)?;
            let b = frame_bounds(sys.frame());
            let expected = n as f64 * g.norm_squared();
            bound_err = bound_err
                .max(rel_err(b.lower, expected, 0.0))
                .max(rel_err(b.upper, expected, 0.0));
        }
        let g = &windows[0];
        for i in 0..p.signal_pairs {
            let g = if i < windows.len() { &windows[i] } else { g };
            let (f1, f2) = (random_vector(&mut r, n), random_vector(&mut r, n));
            let (v1, v2) = (stft(&f1, g)?, stft(&f2, g)?);
            let lhs = v1.inner(&v2)?;
            let rhs = inner(&f1, &f2) * (n as f64 * g.norm_squared());
            energy_err = energy_err.max((lhs - rhs).norm() / (n as f64 * g.norm_squared() * f1.norm() * f2.norm()));
            let direct = stft_direct(&f1, g)?;
            let scale = f1.norm() * g.norm();
            for (a, b) in v1.values().iter().zip(direct.values()) {
                fft_err = fft_err.max((a - b).norm() / scale);
            }
        }
        checks.push(Check::at_most(
            format!("N={n}: frame bounds vs N‖g‖² (max relative error)"),
            bound_err,
            1e-10,
        ));
        checks.push(Check::at_most(
            format!("N={n}: STFT energy identity (max relative error)"),
            energy_err,
            1e-12,
        ));
        checks.push(Check::at_most(
            format!("N={n}: FFT vs direct STFT (max relative error)"),
            fft_err,
            1e-12,
        ));
        per_size.push(
            json!({ "n": n, "bound_error": contframe::json::num(bound_err), "energy_error": contframe::json::num(energy_err) }),
        );
        tensor_windows.push(windows.last().cloned().unwrap_or_else(|| random_vector(&mut r, n)));
    }
    if tensor_windows.len() >= 2 && p.sizes[0] * p.sizes[1] <= 64 {
        let (g1, g2) = (&tensor_windows[0], &tensor_windows[1]);
        let joint = tensor_frame(gabor_frame(g1)?.frame(), gabor_frame(g2)?.frame());
        let expected = (p.sizes[0] * p.sizes[1]) as f64 * g1.norm_squared() * g2.norm_squared();
        let s = frame_operator(&joint);
        let dev = s.max_abs_diff(&contframe::LinearOperator::identity(s.rows()).scaled(contframe::Complex64::new(expected, 0.0)));
        checks.push(Check::at_most(
            "tensor Gabor frame tightness (max relative entry error)",
            dev / expected,
            1e-10,
        ));
    }
    Ok(Outcome::new(&p, checks, json!({ "sizes": per_size })))
}
