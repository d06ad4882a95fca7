//! Quadrature of the wavelet admissibility integrals on a discrete frequency grid.
//!
//! The zero-frequency bin is dropped and each sign of the grid is integrated
//! separately with the trapezoid rule, so the `1/|ω|` singularity is never
//! sampled.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ZERO;

use super::windows::WindowPreset;

/// Largest admissible `|ĝ(0)|²` relative to `Σ|ĝ|²`.
pub const ZERO_BIN_TOL: f64 = 1e-8;

fn validate(spectrum: &[Complex64], freqs: &[f64]) -> Result<()> {
    if spectrum.len() != freqs.len() {
        return Err(Error::LengthMismatch {
            context: "frequency grid",
            expected: freqs.len(),
            found: spectrum.len(),
        });
    }
    if freqs.len() < 2 || freqs.iter().any(|f| !f.is_finite()) || freqs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DegenerateGrid(
            "frequencies must be finite and strictly increasing".into(),
        ));
    }
    if spectrum.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("window spectrum"));
    }
    let energy: f64 = spectrum.iter().map(Complex64::norm_sqr).sum();
    if energy == 0.0 {
        return Err(Error::NotAdmissible("window spectrum vanishes".into()));
    }
    for (z, &f) in spectrum.iter().zip(freqs) {
        if f == 0.0 && z.norm_sqr() >= ZERO_BIN_TOL * energy {
            return Err(Error::NotAdmissible(format!(
                "zero-frequency mass |ĝ(0)|² = {:e} relative to {:e}",
                z.norm_sqr(),
                energy
            )));
        }
    }
    Ok(())
}

/// Trapezoid of `h(ω)/|ω|` over the grid points with `sign·ω > 0`; `None`
/// when fewer than two such points exist.
fn one_side(h: &[Complex64], freqs: &[f64], sign: f64) -> Option<Complex64> {
    let pts: Vec<(f64, Complex64)> = freqs
        .iter()
        .zip(h)
        .filter(|(&f, _)| sign * f > 0.0)
        .map(|(&f, &v)| (f, v / f.abs()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    Some(pts.windows(2).map(|w| (w[1].1 + w[0].1) * (0.5 * (w[1].0 - w[0].0))).sum())
}

/// `C_g = ∫ |ĝ(ω)|² / |ω| dω` over the whole grid.
pub fn admissibility(spectrum: &[Complex64], freqs: &[f64]) -> Result<f64> {
    validate(spectrum, freqs)?;
    let h: Vec<Complex64> = spectrum.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    let total = [1.0, -1.0]
        .iter()
        .filter_map(|&s| one_side(&h, freqs, s))
        .sum::<Complex64>()
        .re;
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::NotAdmissible("admissibility integral is zero".into()))
    }
}

/// `C_{g1,g2} = ∫_0^∞ conj(ĝ1(sω)) ĝ2(sω) ds/s`, averaged over the directions
/// `ω = ±1` that the grid covers.
pub fn cross_admissibility(g1: &[Complex64], g2: &[Complex64], freqs: &[f64]) -> Result<Complex64> {
    validate(g1, freqs)?;
    validate(g2, freqs)?;
    let h: Vec<Complex64> = g1.iter().zip(g2).map(|(a, b)| a.conj() * b).collect();
    let sides: Vec<Complex64> = [1.0, -1.0].iter().filter_map(|&s| one_side(&h, freqs, s)).collect();
    if sides.is_empty() {
        return Err(Error::DegenerateGrid("no nonzero frequencies".into()));
    }
    Ok(sides.iter().sum::<Complex64>() / sides.len() as f64)
}

/// `count` equispaced points from `lo` to `hi` inclusive.
pub fn frequency_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![lo; count];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Symmetric grid with spacing `1/8192` covering `[−Ω, Ω]`, where `Ω` is 64
/// or twice the preset's band edge; it contains `0` and every multiple of the spacing.
pub fn preset_grid(window: &WindowPreset) -> Vec<f64> {
    const STEPS_PER_UNIT: f64 = 8192.0;
    let reach = match window {
        WindowPreset::Bandlimited { hi, .. } => (2.0 * hi).max(64.0).ceil(),
        _ => 64.0,
    };
    let half = (reach * STEPS_PER_UNIT) as i64;
    (-half..=half).map(|i| i as f64 / STEPS_PER_UNIT).collect()
}

pub fn sample_spectrum(window: &WindowPreset, freqs: &[f64]) -> Vec<Complex64> {
    freqs.iter().map(|&w| window.spectrum(w)).collect()
}

/// Two-sided `C_g` of a preset on [`preset_grid`].
pub fn preset_admissibility(window: &WindowPreset) -> Result<f64> {
    let freqs = preset_grid(window);
    admissibility(&sample_spectrum(window, &freqs), &freqs)
}

/// `C_{g,g}` of a preset on [`preset_grid`]; the wavelet tight-frame constant.
pub fn preset_tight_constant(window: &WindowPreset) -> Result<f64> {
    let freqs = preset_grid(window);
    let s = sample_spectrum(window, &freqs);
    let c = cross_admissibility(&s, &s, &freqs)?;
    debug_assert!(c.im.abs() <= 1e-12 * c.re.abs().max(1.0) || c == ZERO);
    Ok(c.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn indicator(freqs: &[f64], lo: f64, hi: f64) -> Vec<Complex64> {
        freqs
            .iter()
            .map(|&f| Complex64::new(if (lo..=hi).contains(&f) { 1.0 } else { 0.0 }, 0.0))
            .collect()
    }

    #[test]
    fn indicator_integrals() {
        let freqs = frequency_grid(0.0, 4.0, 40_001);
        let c = admissibility(&indicator(&freqs, 1.0, 2.0), &freqs).unwrap();
        assert!((c - LN_2).abs() < 1e-3, "{c}");
        let c = admissibility(&indicator(&freqs, 1.0, std::f64::consts::E), &freqs).unwrap();
        assert!((c - 1.0).abs() < 1e-3, "{c}");
    }

    #[test]
    fn zero_frequency_mass_is_rejected() {
        let freqs = frequency_grid(-1.0, 1.0, 201);
        let flat = vec![Complex64::new(1.0, 0.0); 201];
        assert!(matches!(admissibility(&flat, &freqs), Err(Error::NotAdmissible(_))));
        assert!(matches!(
            preset_admissibility(&WindowPreset::Gauss),
            Err(Error::NotAdmissible(_))
        ));
        assert!(matches!(
            preset_admissibility(&WindowPreset::Delta),
            Err(Error::NotAdmissible(_))
        ));
        assert!(admissibility(&flat[..3], &freqs).is_err());
    }

    #[test]
    fn cross_constants() {
        let freqs = frequency_grid(0.0, 4.0, 40_001);
        let a = indicator(&freqs, 1.0, 2.0);
        let b = indicator(&freqs, 1.5, 3.0);
        let c = cross_admissibility(&a, &b, &freqs).unwrap();
        assert!((c.re - (4.0f64 / 3.0).ln()).abs() < 1e-3 && c.im == 0.0);
        let disjoint = indicator(&freqs, 2.5, 3.0);
        assert_eq!(cross_admissibility(&a, &disjoint, &freqs).unwrap(), ZERO);
        let same = cross_admissibility(&a, &a, &freqs).unwrap();
        assert!((same.re - admissibility(&a, &freqs).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn mexican_hat_constants() {
        // |ĝ|² = 2π ω⁴ e^{−ω²}; ∫_0^∞ 2π ω³ e^{−ω²} dω = π
        let c = preset_admissibility(&WindowPreset::MexicanHat).unwrap();
        assert!((c - 2.0 * PI).abs() < 1e-6, "{c}");
        let cgg = preset_tight_constant(&WindowPreset::MexicanHat).unwrap();
        assert!((cgg - PI).abs() < 1e-6, "{cgg}");
        let band = preset_admissibility(&WindowPreset::Bandlimited { lo: 1.0, hi: 2.0 }).unwrap();
        assert!((band - LN_2).abs() < 1e-3, "{band}");
    }
}
