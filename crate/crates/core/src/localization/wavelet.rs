//! Discretized continuous wavelet systems with Haar-measure weights.
//!
//! Signals are `N` samples with spacing `Δt` of functions on the circle of
//! length `L = NΔt`. Columns are the band-limited periodizations of
//! `|a|^{−1/2} g((t − b)/a)`, built from the window spectrum on the DFT
//! frequencies `ω_k = 2πk/L` and scaled by `√Δt`, so discrete inner products
//! approximate the continuous ones. For even `N` the Nyquist bin carries the
//! positive-frequency value, which keeps translation averaging exact for any
//! `M ≥ N`. Atom `(b_m, a_j)` has index `j·M + m` and
//! weight `Δb · a_j Δ(ln a)_j / a_j²`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::frames::{tightness_deviation, weighted_gram, Frame};
use crate::linalg::{CMatrix, CVector, LinearOperator, ZERO};
use crate::measure::MeasureSpace;

use super::admissibility::{preset_admissibility, preset_tight_constant};
use super::windows::WindowPreset;

/// Log-spaced scales and equispaced translations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveletGrid {
    pub samples: usize,
    pub dt: f64,
    pub scale_min: f64,
    pub scale_max: f64,
    pub scales: usize,
    pub translations: usize,
    /// Adds the negative scales `−a_j`.
    pub mirrored: bool,
}

impl WaveletGrid {
    /// `N = 256`, `Δt = 0.5`, 32 scales in `[1/8, 8]`, 256 translations.
    pub fn reference() -> Self {
        Self {
            samples: 256,
            dt: 0.5,
            scale_min: 0.125,
            scale_max: 8.0,
            scales: 32,
            translations: 256,
            mirrored: false,
        }
    }

    /// Halves the log-scale and translation spacings.
    pub fn refined(&self) -> Self {
        Self {
            scales: 2 * self.scales - 1,
            translations: 2 * self.translations,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::DegenerateGrid(msg.to_string()));
        if self.samples < 2 {
            return bad("need at least two samples");
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("sample spacing must be positive");
        }
        if self.scales == 0 || self.translations == 0 {
            return bad("need at least one scale and one translation");
        }
        if !(self.scale_min.is_finite() && self.scale_max.is_finite() && 0.0 < self.scale_min && self.scale_min <= self.scale_max)
        {
            return bad("scale range must satisfy 0 < a_min <= a_max");
        }
        if self.scales > 1 && self.scale_min == self.scale_max {
            return bad("several scales need a nondegenerate range");
        }
        Ok(())
    }

    /// `L = NΔt`.
    pub fn length(&self) -> f64 {
        self.samples as f64 * self.dt
    }

    pub fn translation_step(&self) -> f64 {
        self.length() / self.translations as f64
    }

    pub fn translation_values(&self) -> Vec<f64> {
        let step = self.translation_step();
        (0..self.translations).map(|m| m as f64 * step).collect()
    }

    /// Positive scales, then their mirrors when enabled.
    pub fn scale_values(&self) -> Vec<f64> {
        let positive: Vec<f64> = if self.scales == 1 {
            vec![self.scale_min]
        } else {
            let (lo, hi) = (self.scale_min.ln(), self.scale_max.ln());
            let step = (hi - lo) / (self.scales - 1) as f64;
            (0..self.scales).map(|j| (lo + step * j as f64).exp()).collect()
        };
        let mirrored = positive.iter().map(|a| -a);
        if self.mirrored {
            positive.iter().copied().chain(mirrored).collect()
        } else {
            positive
        }
    }

    /// Trapezoid weights in `ln a`, aligned with [`Self::scale_values`].
    pub fn log_weights(&self) -> Vec<f64> {
        let mut w = if self.scales == 1 {
            vec![1.0]
        } else {
            let step = (self.scale_max / self.scale_min).ln() / (self.scales - 1) as f64;
            let mut w = vec![step; self.scales];
            w[0] *= 0.5;
            w[self.scales - 1] *= 0.5;
            w
        };
        if self.mirrored {
            w.extend_from_within(..);
        }
        w
    }

    pub fn atoms(&self) -> usize {
        self.scale_values().len() * self.translations
    }

    /// Haar weight `Δb Δ(ln a)_j / |a_j|` shared by all translations at scale `j`.
    fn scale_weights(&self) -> Vec<f64> {
        let db = self.translation_step();
        self.scale_values()
            .iter()
            .zip(self.log_weights())
            .map(|(a, w)| db * w / a.abs())
            .collect()
    }
}

/// Empirical tightness of a wavelet system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TightnessReport {
    /// `c = tr(S)/N`.
    pub constant: f64,
    /// `‖S/c − I‖_max`.
    pub deviation: f64,
    /// `C_{g,g}` (doubled for mirrored grids).
    pub expected: f64,
    /// `|c − expected| / expected`.
    pub relative_gap: f64,
}

/// A window on a wavelet grid.
#[derive(Clone, Debug)]
pub struct WaveletSystem {
    window: WindowPreset,
    grid: WaveletGrid,
    admissibility: f64,
    tight_constant: f64,
}

/// Validates the window and grid; columns are generated on demand.
pub fn wavelet_frame(window: &WindowPreset, grid: &WaveletGrid) -> Result<WaveletSystem> {
    grid.validate()?;
    let admissibility = preset_admissibility(window)?;
    let tight_constant = preset_tight_constant(window)?;
    Ok(WaveletSystem {
        window: *window,
        grid: *grid,
        admissibility,
        tight_constant,
    })
}

struct ColumnBuilder {
    ifft: Arc<dyn Fft<f64>>,
    /// `e^{−2πi r/M}`.
    twiddle: Vec<Complex64>,
    n: usize,
    m: usize,
    scale: f64,
}

impl ColumnBuilder {
    fn new(grid: &WaveletGrid) -> Self {
        let (n, m) = (grid.samples, grid.translations);
        Self {
            ifft: FftPlanner::new().plan_fft_inverse(n),
            twiddle: (0..m)
                .map(|r| Complex64::from_polar(1.0, -2.0 * PI * r as f64 / m as f64))
                .collect(),
            n,
            m,
            scale: grid.dt.sqrt() / grid.length(),
        }
    }

    fn signed_bin(&self, k: usize) -> i64 {
        if 2 * k > self.n {
            k as i64 - self.n as i64
        } else {
            k as i64
        }
    }

    /// Columns for all translations at scale `a`, written into `out` (`N × M`).
    fn scale_block(&self, window: &WindowPreset, grid: &WaveletGrid, a: f64, out: &mut CMatrix) {
        let (n, m) = (self.n, self.m);
        let root = a.abs().sqrt();
        let omega = |k: i64| 2.0 * PI * k as f64 / grid.length();
        let base: Vec<Complex64> = (0..n)
            .map(|k| window.spectrum(a * omega(self.signed_bin(k))) * root)
            .collect();
        let mut buf = vec![ZERO; n];
        for col in 0..m {
            for (k, slot) in buf.iter_mut().enumerate() {
                let r = (self.signed_bin(k).rem_euclid(m as i64) as usize * col) % m;
                *slot = base[k] * self.twiddle[r];
            }
            self.ifft.process(&mut buf);
            for (t, z) in buf.iter().enumerate() {
                out[(t, col)] = z * self.scale;
            }
        }
        if real_columns(window, grid) {
            out.iter_mut().for_each(|z| z.im = 0.0);
        }
    }
}

impl WaveletSystem {
    pub fn window(&self) -> &WindowPreset {
        &self.window
    }

    pub fn grid(&self) -> &WaveletGrid {
        &self.grid
    }

    /// Two-sided `C_g`.
    pub fn admissibility(&self) -> f64 {
        self.admissibility
    }

    /// Predicted frame constant `C_{g,g}` (doubled for mirrored grids).
    pub fn expected_constant(&self) -> f64 {
        if self.grid.mirrored {
            2.0 * self.tight_constant
        } else {
            self.tight_constant
        }
    }

    pub fn space(&self) -> Result<Arc<MeasureSpace>> {
        let bs = self.grid.translation_values();
        let mut points = Vec::with_capacity(self.grid.atoms());
        let mut weights = Vec::with_capacity(self.grid.atoms());
        for (a, w) in self.grid.scale_values().into_iter().zip(self.grid.scale_weights()) {
            for &b in &bs {
                points.push(vec![b, a]);
                weights.push(w);
            }
        }
        Ok(Arc::new(MeasureSpace::new(points, weights)?))
    }

    /// Materializes all `J·M` columns.
    pub fn frame(&self) -> Result<Frame> {
        let (n, m) = (self.grid.samples, self.grid.translations);
        let builder = ColumnBuilder::new(&self.grid);
        let scales = self.grid.scale_values();
        let mut vectors = CMatrix::zeros(n, scales.len() * m);
        let mut block = CMatrix::zeros(n, m);
        for (j, &a) in scales.iter().enumerate() {
            builder.scale_block(&self.window, &self.grid, a, &mut block);
            vectors.columns_mut(j * m, m).copy_from(&block);
        }
        Ok(Frame::from_parts(self.space()?, vectors))
    }

    /// `π_aff(b, a) g` sampled on the grid, for any `b` and `a ≠ 0`.
    pub fn column(&self, b: f64, a: f64) -> CVector {
        let builder = ColumnBuilder::new(&self.grid);
        let n = self.grid.samples;
        let root = a.abs().sqrt();
        let shifted = |w: f64| self.window.spectrum(a * w) * root * Complex64::from_polar(1.0, -w * b);
        let mut buf: Vec<Complex64> = (0..n)
            .map(|k| shifted(2.0 * PI * builder.signed_bin(k) as f64 / self.grid.length()))
            .collect();
        builder.ifft.process(&mut buf);
        let steps = b / self.grid.dt;
        let real = self.window.is_real() && (n % 2 == 1 || (steps - steps.round()).abs() < 1e-9);
        CVector::from_iterator(
            n,
            buf.into_iter().map(|z| {
                let z = z * builder.scale;
                if real {
                    Complex64::new(z.re, 0.0)
                } else {
                    z
                }
            }),
        )
    }

    /// `S = Σ w ψ ψ^*`, accumulated one scale at a time without storing the frame.
    pub fn frame_operator(&self) -> LinearOperator {
        let (n, m) = (self.grid.samples, self.grid.translations);
        let builder = ColumnBuilder::new(&self.grid);
        let mut block = CMatrix::zeros(n, m);
        let mut accumulated = DMatrix::<f64>::zeros(n, n);
        let mut complex = CMatrix::zeros(n, n);
        let real = real_columns(&self.window, &self.grid);
        for (a, w) in self.grid.scale_values().into_iter().zip(self.grid.scale_weights()) {
            builder.scale_block(&self.window, &self.grid, a, &mut block);
            if real {
                let b = block.map(|z| z.re);
                accumulated.gemm(w, &b, &b.transpose(), 1.0);
            } else {
                complex += weighted_gram(&block, &vec![w; m]);
            }
        }
        if real {
            complex = accumulated.map(|x| Complex64::new(x, 0.0));
        }
        LinearOperator::from_matrix(crate::linalg::hermitian_part(&complex))
    }

    pub fn tightness(&self) -> TightnessReport {
        tightness_of(&self.frame_operator(), self.expected_constant())
    }
}

/// Real windows give real columns when the Nyquist phase `e^{−iπ b/Δt}` is
/// `±1` for every translation.
fn real_columns(window: &WindowPreset, grid: &WaveletGrid) -> bool {
    window.is_real() && (!grid.samples.is_multiple_of(2) || grid.samples.is_multiple_of(grid.translations))
}

/// Tightness of a frame operator against a predicted constant.
pub fn tightness_of(op: &LinearOperator, expected: f64) -> TightnessReport {
    let n = op.rows().max(1) as f64;
    let constant = op.matrix().diagonal().iter().map(|z| z.re).sum::<f64>() / n;
    TightnessReport {
        constant,
        deviation: tightness_deviation(op, constant),
        expected,
        relative_gap: (constant - expected).abs() / expected.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frame_operator;
    use std::f64::consts::PI;

    fn small() -> WaveletGrid {
        WaveletGrid {
            samples: 32,
            dt: 0.5,
            scale_min: 0.25,
            scale_max: 4.0,
            scales: 9,
            translations: 32,
            mirrored: false,
        }
    }

    #[test]
    fn grid_layout() {
        let g = WaveletGrid::reference();
        let scales = g.scale_values();
        assert_eq!(scales.len(), 32);
        assert!((scales[0] - 0.125).abs() < 1e-15 && (scales[31] - 8.0).abs() < 1e-12);
        let w = g.log_weights();
        let step = 64f64.ln() / 31.0;
        assert!((w[0] - step / 2.0).abs() < 1e-15 && (w[5] - step).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 64f64.ln()).abs() < 1e-12);
        let r = g.refined();
        assert_eq!((r.scales, r.translations), (63, 512));
        assert_eq!(r.scale_values()[2], scales[1]);

        let one = WaveletGrid { scales: 1, ..g };
        assert_eq!(one.log_weights(), vec![1.0]);
        let mirrored = WaveletGrid {
            mirrored: true,
            ..small()
        };
        assert_eq!(mirrored.atoms(), 2 * 9 * 32);
        assert_eq!(mirrored.scale_values()[9], -0.25);
    }

    #[test]
    fn degenerate_grids() {
        for g in [
            WaveletGrid { samples: 1, ..small() },
            WaveletGrid { dt: 0.0, ..small() },
            WaveletGrid { scales: 0, ..small() },
            WaveletGrid {
                scale_min: 2.0,
                scale_max: 1.0,
                ..small()
            },
            WaveletGrid {
                scale_min: 1.0,
                scale_max: 1.0,
                ..small()
            },
        ] {
            assert!(matches!(
                wavelet_frame(&WindowPreset::MexicanHat, &g),
                Err(Error::DegenerateGrid(_))
            ));
        }
        assert!(matches!(
            wavelet_frame(&WindowPreset::Gauss, &small()),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn streamed_operator_matches_materialized() {
        for window in [WindowPreset::MexicanHat, WindowPreset::Bandlimited { lo: 1.0, hi: 3.0 }] {
            for grid in [
                small(),
                WaveletGrid {
                    translations: 20,
                    mirrored: true,
                    ..small()
                },
            ] {
                let sys = wavelet_frame(&window, &grid).unwrap();
                let dense = frame_operator(&sys.frame().unwrap());
                let streamed = sys.frame_operator();
                assert!(dense.max_abs_diff(&streamed) <= 1e-12 * dense.max_abs());
            }
        }
    }

    #[test]
    fn columns_are_translates() {
        let sys = wavelet_frame(&WindowPreset::MexicanHat, &small()).unwrap();
        let frame = sys.frame().unwrap();
        let grid = sys.grid();
        let (bs, as_) = (grid.translation_values(), grid.scale_values());
        for (j, m) in [(0, 0), (3, 5), (8, 31)] {
            let col = sys.column(bs[m], as_[j]);
            let diff = (col - frame.column(j * grid.translations + m)).norm();
            assert!(diff < 1e-12, "{diff}");
        }
    }

    #[test]
    fn wide_scale_column_matches_samples() {
        // at a = 1 the Mexican hat is well resolved and decays inside L = 32, so
        // the band-limited column equals the scaled samples of the profile
        let sys = wavelet_frame(
            &WindowPreset::MexicanHat,
            &WaveletGrid {
                samples: 64,
                dt: 0.5,
                ..small()
            },
        )
        .unwrap();
        let (a, b) = (1.0, 16.0);
        let col = sys.column(b, a);
        for t in 0..64 {
            let s = (t as f64 * 0.5 - b) / a;
            let expected = 0.5f64.sqrt() * (1.0 - s * s) * (-s * s / 2.0).exp() / a.sqrt();
            assert!((col[t].re - expected).abs() < 1e-6, "{t}: {} vs {expected}", col[t].re);
        }
    }

    #[test]
    fn mexican_hat_reference_constant() {
        let sys = wavelet_frame(&WindowPreset::MexicanHat, &WaveletGrid::reference()).unwrap();
        assert!((sys.expected_constant() - PI).abs() < 1e-6);
        assert!((sys.admissibility() - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn single_scale_is_far_from_tight() {
        let grid = WaveletGrid {
            scales: 1,
            scale_min: 1.0,
            scale_max: 1.0,
            ..small()
        };
        let rep = wavelet_frame(&WindowPreset::MexicanHat, &grid).unwrap().tightness();
        assert!(rep.deviation > 0.3, "{rep:?}");
    }
}
