//! Named window presets with a discrete form on `Z_N` and a continuous spectrum.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CVector, ONE, ZERO};

/// Presets accepted by name: `delta`, `gauss`, `mexican-hat`, `bandlimited(lo,hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowPreset {
    Delta,
    /// `e^{−t²/2}`.
    Gauss,
    /// `(1 − t²) e^{−t²/2}`.
    MexicanHat,
    /// `ĝ = 1` on `[lo, hi]` (positive frequencies only).
    Bandlimited {
        lo: f64,
        hi: f64,
    },
}

impl WindowPreset {
    /// Fourier transform `ĝ(ω) = ∫ g(t) e^{−iωt} dt` of the continuous profile.
    pub fn spectrum(&self, omega: f64) -> Complex64 {
        let root = (2.0 * PI).sqrt();
        let v = match *self {
            WindowPreset::Delta => 1.0,
            WindowPreset::Gauss => root * (-omega * omega / 2.0).exp(),
            WindowPreset::MexicanHat => root * omega * omega * (-omega * omega / 2.0).exp(),
            WindowPreset::Bandlimited { lo, hi } => {
                if (lo..=hi).contains(&omega) {
                    1.0
                } else {
                    0.0
                }
            }
        };
        Complex64::new(v, 0.0)
    }

    /// Whether the time-domain profile is real-valued.
    pub fn is_real(&self) -> bool {
        !matches!(self, WindowPreset::Bandlimited { .. })
    }

    /// Discrete window on `Z_N`, centred at index 0 with circular distance.
    ///
    /// Gaussian profiles use width `√(N/2π)`, which makes the discrete Gaussian
    /// its own DFT up to scale. `bandlimited(lo,hi)` keeps the DFT bins `k` with
    /// `lo ≤ k ≤ hi` and can be zero when no bin falls in range.
    pub fn discrete(&self, n: usize) -> CVector {
        let width = (n as f64 / (2.0 * PI)).sqrt();
        let dist = |t: usize| {
            let t = t as i64;
            let n = n as i64;
            (if 2 * t > n { t - n } else { t }) as f64
        };
        match *self {
            WindowPreset::Delta => CVector::from_fn(n, |t, _| if t == 0 { ONE } else { ZERO }),
            WindowPreset::Gauss => CVector::from_fn(n, |t, _| {
                let s = dist(t) / width;
                Complex64::new((-s * s / 2.0).exp(), 0.0)
            }),
            WindowPreset::MexicanHat => CVector::from_fn(n, |t, _| {
                let s = dist(t) / width;
                Complex64::new((1.0 - s * s) * (-s * s / 2.0).exp(), 0.0)
            }),
            WindowPreset::Bandlimited { lo, hi } => {
                let bins: Vec<i64> = (0..n)
                    .map(|k| {
                        let k = k as i64;
                        if 2 * k > n as i64 {
                            k - n as i64
                        } else {
                            k
                        }
                    })
                    .filter(|&k| (lo..=hi).contains(&(k as f64)))
                    .collect();
                let scale = 1.0 / (n as f64).sqrt();
                CVector::from_fn(n, |t, _| {
                    bins.iter()
                        .map(|&k| Complex64::from_polar(scale, 2.0 * PI * (k * t as i64) as f64 / n as f64))
                        .sum()
                })
            }
        }
    }
}

impl fmt::Display for WindowPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowPreset::Delta => f.write_str("delta"),
            WindowPreset::Gauss => f.write_str("gauss"),
            WindowPreset::MexicanHat => f.write_str("mexican-hat"),
            WindowPreset::Bandlimited { lo, hi } => write!(f, "bandlimited({lo},{hi})"),
        }
    }
}

impl FromStr for WindowPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "delta" => return Ok(WindowPreset::Delta),
            "gauss" => return Ok(WindowPreset::Gauss),
            "mexican-hat" => return Ok(WindowPreset::MexicanHat),
            _ => {}
        }
        let unknown = || Error::UnknownPreset(s.to_string());
        let args = s
            .strip_prefix("bandlimited")
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let (lo, hi) = args.split_once(',').ok_or_else(unknown)?;
        let lo: f64 = lo.trim().parse().map_err(|_| unknown())?;
        let hi: f64 = hi.trim().parse().map_err(|_| unknown())?;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
            return Err(unknown());
        }
        Ok(WindowPreset::Bandlimited { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for name in ["delta", "gauss", "mexican-hat", "bandlimited(1,2)", "bandlimited(0.5,3.25)"] {
            let p: WindowPreset = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        assert_eq!(
            "bandlimited( 1 , 2 )".parse::<WindowPreset>().unwrap(),
            WindowPreset::Bandlimited { lo: 1.0, hi: 2.0 }
        );
        for bad in [
            "",
            "hann",
            "bandlimited(2,1)",
            "bandlimited(1)",
            "bandlimited(a,b)",
            "bandlimited(-1,1)",
        ] {
            assert!(matches!(bad.parse::<WindowPreset>(), Err(Error::UnknownPreset(_))), "{bad}");
        }
    }

    #[test]
    fn discrete_forms() {
        let d = WindowPreset::Delta.discrete(4);
        assert_eq!(d.as_slice(), &[ONE, ZERO, ZERO, ZERO]);

        let g = WindowPreset::Gauss.discrete(8);
        assert_eq!(g[0], ONE);
        assert!((g[1] - g[7]).norm() < 1e-15 && g[4].re > 0.0);

        let h = WindowPreset::MexicanHat.discrete(16);
        assert_eq!(h[0], ONE);
        assert!(h.iter().all(|z| z.im == 0.0));

        // bins 1..=2 of Z_8: unit-modulus sum of two exponentials
        let b = WindowPreset::Bandlimited { lo: 1.0, hi: 2.0 }.discrete(8);
        assert!((b.norm() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(WindowPreset::Bandlimited { lo: 10.0, hi: 20.0 }.discrete(8).norm(), 0.0);
    }

    #[test]
    fn spectra() {
        assert_eq!(WindowPreset::MexicanHat.spectrum(0.0), ZERO);
        let root = (2.0 * PI).sqrt();
        assert!((WindowPreset::Gauss.spectrum(0.0).re - root).abs() < 1e-15);
        assert!((WindowPreset::MexicanHat.spectrum(1.0).re - root * (-0.5f64).exp()).abs() < 1e-15);
        let b = WindowPreset::Bandlimited { lo: 1.0, hi: 2.0 };
        assert_eq!(b.spectrum(1.5), ONE);
        assert_eq!(b.spectrum(-1.5), ZERO);
        assert!(!b.is_real() && WindowPreset::MexicanHat.is_real());
    }
}
