use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use contframe::json::num;
use contframe::localization::preset_admissibility;
use contframe::{wavelet_frame, WaveletGrid, WindowPreset};

use super::{invalid, Outcome};
use crate::config::parameters;
use crate::error::CliError;
use crate::report::Check;

pub const DESCRIPTION: &str = "
Discretized continuous wavelet systems with Haar weights db da / a².

Parameters:
  window               preset name of the analyzing wavelet (default \"mexican-hat\")
  samples              N (default 256)
  dt                   sample spacing (default 0.5)
  scale_min, scale_max log-spaced scale range (default 0.125, 8)
  scales               J (default 32)
  translations         M (default 256)
  mirrored             add negative scales (default false)
  refinements          grid refinements J -> 2J − 1, M -> 2M (default 3)
  tolerance            bound on ‖S/c − I‖_max at the base grid (default 0.05)
  constant_tolerance   relative agreement of c with C_{g,g} (default 0.1)
  band                 bandlimited preset for the admissibility quadrature (default \"bandlimited(1,2)\")
  No seed is needed.

Verifies:
  - the wavelet system is nearly tight: ‖S/c − I‖_max <= tolerance with c = tr(S)/N
  - the deviation decreases strictly under every refinement
  - the empirical constant c matches C_{g,g} = ∫_0^∞ |ĝ(s)|² ds/s
  - the admissibility quadrature of 1_[lo,hi] gives ln(hi/lo)
  - a single scale is far from tight
";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub window: String,
    pub samples: usize,
    pub dt: f64,
    pub scale_min: f64,
    pub scale_max: f64,
    pub scales: usize,
    pub translations: usize,
    pub mirrored: bool,
    pub refinements: usize,
    pub tolerance: f64,
    pub constant_tolerance: f64,
    pub band: String,
}

impl Default for Params {
    fn default() -> Self {
        let g = WaveletGrid::reference();
        Self {
            window: "mexican-hat".into(),
            samples: g.samples,
            dt: g.dt,
            scale_min: g.scale_min,
            scale_max: g.scale_max,
            scales: g.scales,
            translations: g.translations,
            mirrored: false,
            refinements: 3,
            tolerance: 0.05,
            constant_tolerance: 0.1,
            band: "bandlimited(1,2)".into(),
        }
    }
}

pub fn run(raw: &Value, _seed: Option<u64>) -> Result<Outcome, CliError> {
    let p: Params = parameters(raw)?;
    let window: WindowPreset = p.window.parse()?;
    let band: WindowPreset = p.band.parse()?;
    let WindowPreset::Bandlimited { lo, hi } = band else {
        return Err(invalid("band must be a bandlimited(lo,hi) preset"));
    };
    let base = WaveletGrid {
        samples: p.samples,
        dt: p.dt,
        scale_min: p.scale_min,
        scale_max: p.scale_max,
        scales: p.scales,
        translations: p.translations,
        mirrored: p.mirrored,
    };

    let mut levels = Vec::new();
    let mut grid = base;
    for _ in 0..=p.refinements {
        let rep = wavelet_frame(&window, &grid)?.tightness();
        levels.push((grid, rep));
        grid = grid.refined();
    }
    let (_, first) = levels[0];
    let decreasing = levels.windows(2).all(|w| w[1].1.deviation < w[0].1.deviation);
    let single = WaveletGrid {
        scales: 1,
        scale_min: 1.0,
        scale_max: 1.0,
        ..base
    };
    let single_dev = wavelet_frame(&window, &single)?.tightness().deviation;
    let band_c = preset_admissibility(&band)?;

    let mut checks = vec![
        Check::at_most("base grid ‖S/c − I‖_max", first.deviation, p.tolerance),
        Check::flag(
            format!("deviation strictly decreasing over {} refinements", p.refinements),
            decreasing,
        ),
    ];
    for (i, (_, rep)) in levels.iter().enumerate() {
        checks.push(Check::at_most(
            format!("level {i}: |c − C_gg| / C_gg"),
            rep.relative_gap,
            p.constant_tolerance,
        ));
    }
    checks.push(Check::close(format!("admissibility of {band}"), band_c, (hi / lo).ln(), 1e-3));
    checks.push(Check::at_least("single-scale deviation (not tight)", single_dev, 0.25));

    let details = json!({
        "expected_constant": num(first.expected),
        "levels": levels.iter().map(|(g, rep)| json!({
            "scales": g.scales,
            "translations": g.translations,
            "atoms": g.atoms(),
            "constant": num(rep.constant),
            "deviation": num(rep.deviation),
        })).collect::<Vec<_>>(),
        "single_scale_deviation": num(single_dev),
    });
    Ok(Outcome::new(&p, checks, details))
}
