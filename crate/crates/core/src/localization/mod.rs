//! Time-frequency and time-scale localization: Gabor and wavelet frame
//! generators and the bilinear localization operators built on their tensor
//! products.

pub mod admissibility;
pub mod gabor;
pub mod wavelet;
pub mod windows;

pub use admissibility::{admissibility, cross_admissibility, frequency_grid, preset_admissibility, preset_tight_constant};
pub use gabor::{gabor_frame, gabor_space, spectrogram, stft, stft_direct, time_frequency_shift, GaborSystem};
pub use wavelet::{tightness_of, wavelet_frame, TightnessReport, WaveletGrid, WaveletSystem};
pub use windows::WindowPreset;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, LinearOperator};
use crate::multiplier::{multiplier, schatten_bound, SchattenReport, Symbol};
use crate::tensor::{tensor_frame, TensorFrame};

/// A localization operator with the symbol and tensor frames it was built from.
#[derive(Clone, Debug)]
pub struct Localization {
    symbol: Symbol,
    analysis: TensorFrame,
    synthesis: TensorFrame,
    operator: LinearOperator,
}

impl Localization {
    pub fn operator(&self) -> &LinearOperator {
        &self.operator
    }

    pub fn into_operator(self) -> LinearOperator {
        self.operator
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn analysis(&self) -> &TensorFrame {
        &self.analysis
    }

    pub fn synthesis(&self) -> &TensorFrame {
        &self.synthesis
    }

    /// Schatten-`p` norm of the operator against the multiplier bound.
    pub fn schatten_check(&self, p: f64) -> Result<SchattenReport> {
        schatten_bound(&self.symbol, &self.analysis, &self.synthesis, p)
    }
}

/// `M_{m, F1⊗F2, G1⊗G2}` for arbitrary factor frames.
pub fn localize(m: &Symbol, analysis: TensorFrame, synthesis: TensorFrame) -> Result<Localization> {
    let operator = multiplier(m, &analysis, &synthesis)?;
    Ok(Localization {
        symbol: m.clone(),
        analysis,
        synthesis,
        operator,
    })
}

/// Bilinear STFT localization with windows `φ⃗ = (φ1, φ2)` and `ψ⃗ = (ψ1, ψ2)`.
pub fn localize_stft(m: &Symbol, phi: (&CVector, &CVector), psi: (&CVector, &CVector)) -> Result<Localization> {
    let f = tensor_frame(gabor_frame(phi.0)?.frame(), gabor_frame(phi.1)?.frame());
    let g = tensor_frame(gabor_frame(psi.0)?.frame(), gabor_frame(psi.1)?.frame());
    localize(m, f, g)
}

/// Bilinear wavelet localization; `phi` and `psi` systems must share grids per factor.
pub fn localize_wavelet(
    m: &Symbol,
    phi: (&WaveletSystem, &WaveletSystem),
    psi: (&WaveletSystem, &WaveletSystem),
) -> Result<Localization> {
    for (a, b) in [(phi.0, psi.0), (phi.1, psi.1)] {
        if a.grid() != b.grid() {
            return Err(Error::SpaceMismatch("wavelet grids"));
        }
    }
    let f = tensor_frame(&phi.0.frame()?, &phi.1.frame()?);
    let g = tensor_frame(&psi.0.frame()?, &psi.1.frame()?);
    localize(m, f, g)
}

/// Mixed localization with the frame `π(x,ω)φ ⊗ π_aff(b,a)ψ` on both sides.
pub fn localize_mixed(m: &Symbol, phi: &CVector, psi: &WaveletSystem) -> Result<Localization> {
    let f = tensor_frame(gabor_frame(phi)?.frame(), &psi.frame()?);
    localize(m, f.clone(), f)
}

/// Row-major `rows × cols` grid from values indexed `r·cols + c`.
pub fn grid_matrix(values: &[num_complex::Complex64], rows: usize, cols: usize) -> Result<CMatrix> {
    if values.len() != rows * cols {
        return Err(Error::LengthMismatch {
            context: "grid export",
            expected: rows * cols,
            found: values.len(),
        });
    }
    Ok(CMatrix::from_row_slice(rows, cols, values))
}

/// A symbol on a wavelet grid as a `M × J` mask (row = translation, column = scale).
pub fn wavelet_mask(m: &Symbol, grid: &WaveletGrid) -> Result<CMatrix> {
    let (rows, cols) = (grid.translations, grid.atoms() / grid.translations);
    let by_scale = grid_matrix(m.values(), cols, rows)?;
    Ok(by_scale.transpose())
}
