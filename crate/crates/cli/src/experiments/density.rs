use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::linalg::inner;
use contframe::localization::gabor_space;
use contframe::quantum::{is_admissible, separable_density, trace_formula, SeparableDensity};
use contframe::random::{random_positive_symbol, random_symbol, random_vector, rng, SeededRng};
use contframe::{CVector, Complex64, Symbol, WindowPreset};

use super::{invalid, Outcome};
use crate::config::{parameters, require_seed, Experiment};
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Multiplier density operators of separable bipartite states built from Gabor systems.

Parameters:
  sizes                     [N1, N2] (default [2, 2])
  windows                   two preset names, or \"random\" (default [\"delta\", \"delta\"])
  symbols                   \"uniform\" or \"random\" positive symbols (default \"uniform\")
  random_instances          extra random states with N in {2, 4} (default 0)
  trace_formula_instances   random trace-formula checks with N <= 8 (default 0)
  seed                      required when anything random is requested

Verifies:
  - ρ = M_{m1⊗m2, F1⊗F2, F1⊗F2} is self-adjoint, positive and of unit trace
  - its partial traces equal the component multipliers M_{m1,F1,F1} and M_{m2,F2,F2}
  - purity factorizes: Tr ρ² = Tr ρ1² · Tr ρ2²
  - the trace formula Tr M_{m,π φ,π ψ} = <ψ, φ> ∫ m, including orthogonal windows
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub sizes: [usize; 2],
    pub windows: [String; 2],
    pub symbols: String,
    pub random_instances: usize,
    pub trace_formula_instances: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            sizes: [2, 2],
            windows: ["delta".into(), "delta".into()],
            symbols: "uniform".into(),
            random_instances: 0,
            trace_formula_instances: 0,
        }
    }
}

impl Params {
    fn randomized(&self) -> bool {
        self.symbols == "random"
            || self.windows.iter().any(|w| w == "random")
            || self.random_instances > 0
            || self.trace_formula_instances > 0
    }
}

fn window(name: &str, n: usize, r: &mut SeededRng) -> Result<CVector, CliError> {
    if name == "random" {
        return Ok(random_vector(r, n));
    }
    Ok(name.parse::<WindowPreset>()?.discrete(n))
}

fn symbol(kind: &str, n: usize, r: &mut SeededRng) -> Result<Symbol, CliError> {
    let space = gabor_space(n, 1.0)?;
    match kind {
        "uniform" => Ok(Symbol::constant(space, Complex64::new(1.0, 0.0))),
        "random" => Ok(random_positive_symbol(r, space, 0.1, 2.0)),
        other => Err(invalid(format!("unknown symbol kind `{other}`"))),
    }
}

#[derive(Default)]
struct Worst {
    trace: f64,
    psd: f64,
    hermitian: f64,
    reduced: f64,
    purity: f64,
    uncertified: usize,
}

impl Worst {
    fn absorb(&mut self, s: &SeparableDensity) {
        for rho in [&s.rho, &s.rho1, &s.rho2] {
            let (ok, d) = is_admissible(rho.operator());
            self.uncertified += usize::from(!ok);
            self.trace = self.trace.max((d.trace - 1.0).norm());
            self.psd = self.psd.max((-d.min_eig / d.max_eig).max(0.0));
            self.hermitian = self.hermitian.max(d.hermitian_defect);
        }
        self.reduced = self.reduced.max(s.left_deviation).max(s.right_deviation);
        self.purity = self.purity.max((s.rho.purity() - s.rho1.purity() * s.rho2.purity()).abs());
    }

    fn checks(&self, prefix: &str) -> Vec<Check> {
        vec![
            Check::close(
                format!("{prefix}operators failing the density checks"),
                self.uncertified as f64,
                0.0,
                0.0,
            ),
            Check::at_most(format!("{prefix}|Tr ρ − 1|"), self.trace, 1e-10),
            Check::at_most(format!("{prefix}relative Hermitian defect"), self.hermitian, 1e-10),
            Check::at_most(format!("{prefix}negative eigenvalue (relative)"), self.psd, 1e-10),
            Check::at_most(
                format!("{prefix}partial traces vs component multipliers"),
                self.reduced,
                1e-10,
            ),
            Check::at_most(format!("{prefix}purity factorization error"), self.purity, 1e-10),
        ]
    }
}

pub fn run(raw: &Value, seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let seed = if p.randomized() {
        require_seed(Experiment::Density, seed)?
    } else {
        seed.unwrap_or(0)
    };
    if p.sizes.contains(&0) || p.sizes.iter().any(|&n| n > 8) {
        return Err(invalid("sizes must lie in 1..=8"));
    }
    let mut r = rng(seed);

    let phi1 = window(&p.windows[0], p.sizes[0], &mut r)?;
    let phi2 = window(&p.windows[1], p.sizes[1], &mut r)?;
    let m1 = symbol(&p.symbols, p.sizes[0], &mut r)?;
    let m2 = symbol(&p.symbols, p.sizes[1], &mut r)?;
    let state = separable_density(&m1, &m2, &phi1, &phi2)?;
    let mut configured = Worst::default();
    configured.absorb(&state);
    let mut checks = configured.checks("");

    if p.random_instances > 0 {
        let mut worst = Worst::default();
        for i in 0..p.random_instances {
            let (n1, n2) = ([2, 4][i % 2], [2, 4][(i / 2) % 2]);
            let (phi1, phi2) = (random_vector(&mut r, n1), random_vector(&mut r, n2));
            let m1 = symbol("random", n1, &mut r)?;
            let m2 = symbol("random", n2, &mut r)?;
            worst.absorb(&separable_density(&m1, &m2, &phi1, &phi2)?);
        }
        checks.extend(worst.checks("random states: "));
    }

    if p.trace_formula_instances > 0 {
        let mut err = 0.0f64;
        let mut orthogonal = 0usize;
        for i in 0..p.trace_formula_instances {
            let n = r.random_range(1..=8usize);
            let phi = random_vector(&mut r, n);
            let mut psi = random_vector(&mut r, n);
            if i % 4 == 3 && n > 1 {
                // remove the φ component so that <ψ, φ> = 0
                psi -= &phi * (inner(&psi, &phi) / phi.norm_squared());
                orthogonal += 1;
            }
            let m = random_symbol(&mut r, gabor_space(n, 1.0)?);
            let tf = trace_formula(&m, &phi, &psi)?;
            err = err.max(tf.error() / tf.rhs.norm().max(1.0));
        }
        checks.push(Check::at_most(
            "trace formula (max error relative to max(1, |rhs|))",
            err,
            1e-10,
        ));
        checks.push(Check::at_least(
            "orthogonal-window trace formula cases",
            orthogonal as f64,
            1.0,
        ));
    }

    let details = json!({ "density": state.to_json() });
    Ok(Outcome::new(&p, checks, details))
}
