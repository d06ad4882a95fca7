use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::multiplier::{MultiplierParts, TraceOut};
use contframe::random::{random_family_like, random_frame, random_matrix, random_symbol, rng, SeededRng};
use contframe::{
    kron_op, multiplier, multiplier_partial_trace, norm_bound_check, partial_trace, schatten_bound, trace, Complex64, Frame,
    LinearOperator, Symbol,
};

use super::{invalid, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Frame multipliers M_{m,F,G} = T_G D_m T_F^*: norm bounds, adjoints and partial traces.

Parameters:
  instances           random (m, F, G) triples for the norm bounds (default 200)
  max_dim             largest n (default 6)
  max_atoms           largest K (default 12)
  p                   Schatten exponents (default [1, 1.5, 2, 3])
  adjoint_instances   (default 100)
  trace_instances     Kronecker pairs and general operators for partial traces (default 100)
  seed                required

Verifies:
  - ‖M_{m,F,G}‖ <= ‖m‖_∞ √(B_F B_G)
  - ‖M‖_{S_1} <= ‖m‖_1 L_F L_G and ‖M‖_{S_p} <= ‖m‖_p (L_F L_G)^{1/p} (B_F B_G)^{(p−1)/(2p)}
  - (M_{m,F,G})^* = M_{conj m,G,F}
  - partial trace: T(A1 ⊗ A2) = A1 Tr(A2), Tr(T(A)) = Tr(A), and Tr_2 M_{m1⊗m2} = Tr(M_{m2}) M_{m1}
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub instances: usize,
    pub max_dim: usize,
    pub max_atoms: usize,
    pub p: Vec<f64>,
    pub adjoint_instances: usize,
    pub trace_instances: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            instances: 200,
            max_dim: 6,
            max_atoms: 12,
            p: vec![1.0, 1.5, 2.0, 3.0],
            adjoint_instances: 100,
            trace_instances: 100,
        }
    }
}

fn triple(r: &mut SeededRng, max_dim: usize, max_atoms: usize) -> (Frame, Frame, Symbol) {
    let n = r.random_range(1..=max_dim);
    let k = r.random_range(1..=max_atoms);
    let f = random_frame(r, n, k);
    let g = random_family_like(r, &f);
    let m = random_symbol(r, f.space().clone());
    (f, g, m)
}

fn rel_diff(a: &LinearOperator, b: &LinearOperator) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(f64::MIN_POSITIVE)
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::Multiplier, seed)?;
    if p.max_dim == 0 || p.max_atoms == 0 {
        return Err(invalid("max_dim and max_atoms must be positive"));
    }
    if let Some(&bad) = p.p.iter().find(|&&x| !(1.0..f64::INFINITY).contains(&x)) {
        return Err(invalid(format!("Schatten exponent {bad} outside [1, ∞)")));
    }
    let mut r = rng(seed);

    let mut opnorm_violations = 0usize;
    let mut opnorm_ratio = 0.0f64;
    let mut schatten_violations = vec![0usize; p.p.len()];
    let mut schatten_ratio = vec![0.0f64; p.p.len()];
    for _ in 0..p.instances {
        let (f, g, m) = triple(&mut r, p.max_dim, p.max_atoms);
        let chk = norm_bound_check(&m, &f, &g)?;
        opnorm_violations += usize::from(!chk.holds());
        opnorm_ratio = opnorm_ratio.max(chk.opnorm / chk.bound);
        for (i, &exp) in p.p.iter().enumerate() {
            let rep = schatten_bound(&m, &f, &g, exp)?;
            schatten_violations[i] += usize::from(!rep.holds());
            schatten_ratio[i] = schatten_ratio[i].max(rep.norm / rep.bound.unwrap_or(f64::INFINITY));
        }
    }

    let mut adjoint = 0.0f64;
    for _ in 0..p.adjoint_instances {
        let (f, g, m) = triple(&mut r, p.max_dim, p.max_atoms);
        let lhs = multiplier(&m, &f, &g)?.adjoint();
        adjoint = adjoint.max(rel_diff(&lhs, &multiplier(&m.conj(), &g, &f)?));
    }

    let (mut kron_err, mut preserve_err, mut tensor_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..p.trace_instances {
        let (n1, n2) = (r.random_range(1..=4), r.random_range(1..=4));
        let a1 = LinearOperator::new(random_matrix(&mut r, n1, n1))?;
        let a2 = LinearOperator::new(random_matrix(&mut r, n2, n2))?;
        let joint = kron_op(&a1, &a2);
        let right = partial_trace(&joint, (n1, n2), TraceOut::Right)?;
        kron_err = kron_err.max(rel_diff(&right, &a1.scaled(trace(&a2)?)));
        let left = partial_trace(&joint, (n1, n2), TraceOut::Left)?;
        kron_err = kron_err.max(rel_diff(&left, &a2.scaled(trace(&a1)?)));

        let t = LinearOperator::new(random_matrix(&mut r, n1 * n2, n1 * n2))?;
        let tr = trace(&t)?;
        let scale = t.max_abs() * (n1 * n2) as f64;
        for over in [TraceOut::Left, TraceOut::Right] {
            let reduced: Complex64 = trace(&partial_trace(&t, (n1, n2), over)?)?;
            preserve_err = preserve_err.max((reduced - tr).norm() / scale);
        }

        if i < 20 {
            let (f1, g1, m1) = triple(&mut r, 3, 5);
            let (f2, g2, m2) = triple(&mut r, 3, 5);
            let chk = multiplier_partial_trace(
                MultiplierParts::new(&m1, &f1, &g1),
                MultiplierParts::new(&m2, &f2, &g2),
                if i % 2 == 0 { TraceOut::Right } else { TraceOut::Left },
            )?;
            tensor_err = tensor_err.max(chk.deviation / chk.expected.max_abs().max(f64::MIN_POSITIVE));
        }
    }

    let mut checks = vec![Check::close(
        "operator norm bound violations",
        opnorm_violations as f64,
        0.0,
        0.0,
    )];
    for (i, &exp) in p.p.iter().enumerate() {
        checks.push(Check::close(
            format!("Schatten p={exp} bound violations"),
            schatten_violations[i] as f64,
            0.0,
            0.0,
        ));
    }
    checks.extend([
        Check::at_most("adjoint identity (max relative entry error)", adjoint, 1e-12),
        Check::at_most("partial trace of Kronecker products (max relative error)", kron_err, 1e-12),
        Check::at_most("partial trace preserves the trace (max relative error)", preserve_err, 1e-12),
        Check::at_most("partial trace of tensor multipliers (max relative error)", tensor_err, 1e-12),
    ]);
    let details = json!({
        "max_opnorm_over_bound": contframe::json::num(opnorm_ratio),
        "max_schatten_over_bound": p.p.iter().zip(&schatten_ratio).map(|(e, v)| json!({"p": contframe::json::num(*e), "ratio": contframe::json::num(*v)})).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(&p, checks, details))
}
