use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::frames::dual_defect;
use contframe::linalg::singular_values;
use contframe::random::{random_family_like, random_frame, rng};
use contframe::tensor::simple_rank;
use contframe::{
    canonical_dual, dual_from_bessel, dual_space_dimension, nonsimple_dual, tensor_frame, CMatrix, Complex64, Frame,
};

use super::{invalid, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Dual frames: the classification formula and non-simple tensor duals.

Parameters:
  max_dim     largest n (default 3)
  max_atoms   largest K; every pair n < K <= max_atoms is checked (default 5)
  thetas      random Bessel families per (n, K) (default 3)
  seed        required

Verifies:
  - the classification formula G = S⁻¹F + Θ − ∫<S⁻¹F(x), F(y)> Θ(y) dμ(y) yields a dual for every Θ
  - the affine space of duals, found by a brute-force linear solve, has dimension n(K − n)
    and the parameterization spans all of it
  - {e1, e2, e1} ⊗ {e1, e2, e1} admits a verified dual with a non-simple column
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub max_dim: usize,
    pub max_atoms: usize,
    pub thetas: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            max_dim: 3,
            max_atoms: 5,
            thetas: 3,
        }
    }
}

/// Matrix of the linear map `G ↦ Σ_k w_k G_k F_k^*` with `G` vectorized column-major.
fn duality_system(frame: &Frame) -> CMatrix {
    let (n, k) = (frame.dim(), frame.len());
    let w = frame.space().weights();
    let f = frame.vectors();
    CMatrix::from_fn(n * n, n * k, |row, col| {
        let (i, j) = (row % n, row / n);
        let (i2, kk) = (col % n, col / n);
        if i == i2 {
            f[(j, kk)].conj() * w[kk]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn numerical_rank(m: &CMatrix) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > 1e-10 * top).count()
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = require_seed(Experiment::Duals, seed)?;
    if p.max_dim == 0 || p.max_atoms <= p.max_dim {
        return Err(invalid("need 1 <= max_dim < max_atoms"));
    }
    let mut r = rng(seed);
    let (mut defect, mut leak) = (0.0f64, 0.0f64);
    let (mut dim_mismatch, mut span_mismatch, mut cases) = (0usize, 0usize, 0usize);
    let mut rows = Vec::new();
    for n in 1..=p.max_dim {
        for k in n + 1..=p.max_atoms {
            cases += 1;
            let frame = random_frame(&mut r, n, k);
            for _ in 0..p.thetas {
                let theta = random_family_like(&mut r, &frame);
                defect = defect.max(dual_defect(&frame, &dual_from_bessel(&frame, &theta)?)?);
            }
            let system = duality_system(&frame);
            let solution_dim = n * k - numerical_rank(&system);

            // images of the basis families Θ = E_{i,k} under Θ ↦ G(Θ) − S⁻¹F
            let canonical = canonical_dual(&frame)?;
            let mut image = CMatrix::zeros(n * k, n * k);
            for col in 0..n * k {
                let mut theta = CMatrix::zeros(n, k);
                theta[(col % n, col / n)] = Complex64::new(1.0, 0.0);
                let g = dual_from_bessel(&frame, &Frame::new(frame.space().clone(), theta)?)?;
                let diff = g.vectors() - canonical.vectors();
                image.set_column(col, &CMatrix::from_column_slice(n * k, 1, diff.as_slice()).column(0));
            }
            leak = leak.max(contframe::linalg::max_abs(&(&system * &image)));
            let span = numerical_rank(&image);
            let expected = n * (k - n);
            dim_mismatch += usize::from(solution_dim != expected || dual_space_dimension(&frame)? != expected);
            span_mismatch += usize::from(span != expected);
            rows.push(json!({ "n": n, "atoms": k, "solution_dim": solution_dim, "span": span, "expected": expected }));
        }
    }

    let e1e2e1 = Frame::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]])?;
    let tf = tensor_frame(&e1e2e1, &e1e2e1);
    let found = nonsimple_dual(&tf)?;
    let ns_defect = dual_defect(&tf, &found.dual)?;
    let ns_rank = (0..found.dual.len())
        .map(|p| simple_rank(&found.dual.tensor_column(p)))
        .max()
        .unwrap_or(0);

    let checks = vec![
        Check::at_most("classification duals: max ‖Σ w G F^* − I‖", defect, 1e-10),
        Check::at_most("parameterization stays in the solution space", leak, 1e-10),
        Check::close("cases with solution dimension != n(K − n)", dim_mismatch as f64, 0.0, 0.0),
        Check::close(
            "cases where the parameterization does not span",
            span_mismatch as f64,
            0.0,
            0.0,
        ),
        Check::at_most("non-simple dual defect", ns_defect, 1e-10),
        Check::at_least("non-simple dual max Schmidt rank", ns_rank as f64, 2.0),
    ];
    let details = json!({
        "cases": cases,
        "spaces": rows,
        "nonsimple": { "candidate": found.candidate, "atom": found.atom, "rank": found.rank },
    });
    Ok(Outcome::new(&p, checks, details))
}
