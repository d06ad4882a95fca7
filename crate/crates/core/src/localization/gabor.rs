//! Finite Gabor systems on the cyclic group `Z_N`.
//!
//! Atom `(k, l)` sits at index `k·N + l` and carries the time-frequency shift
//! `(π(k,l) g)[t] = e^{2πi l t/N} g[(t − k) mod N]`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::frames::{CoefficientFunction, Frame};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::measure::MeasureSpace;

/// `N × N` grid with points `[k, l]` and constant weight.
pub fn gabor_space(n: usize, weight: f64) -> Result<Arc<MeasureSpace>> {
    let points = (0..n * n).map(|p| vec![(p / n) as f64, (p % n) as f64]).collect();
    Ok(Arc::new(MeasureSpace::new(points, vec![weight; n * n])?))
}

/// `π(k, l) g`.
pub fn time_frequency_shift(g: &CVector, k: usize, l: usize) -> CVector {
    let n = g.len();
    CVector::from_fn(n, |t, _| {
        let phase = 2.0 * PI * ((l * t) % n) as f64 / n as f64;
        Complex64::from_polar(1.0, phase) * g[(t + n - k % n) % n]
    })
}

fn check_window(g: &CVector) -> Result<()> {
    if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("window"));
    }
    if g.is_empty() || g.norm() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    Ok(())
}

/// A window together with its Gabor frame over the `N × N` grid.
#[derive(Clone, Debug)]
pub struct GaborSystem {
    window: CVector,
    frame: Frame,
}

impl GaborSystem {
    /// All atoms weighted by `weight`; the frame is tight with bound `weight·N‖g‖²`.
    pub fn new(g: &CVector, weight: f64) -> Result<Self> {
        check_window(g)?;
        let n = g.len();
        let space = gabor_space(n, weight)?;
        let mut vectors = CMatrix::zeros(n, n * n);
        for k in 0..n {
            for l in 0..n {
                vectors.set_column(k * n + l, &time_frequency_shift(g, k, l));
            }
        }
        Ok(Self {
            window: g.clone(),
            frame: Frame::from_parts(space, vectors),
        })
    }

    /// Normalized window with weights `1/N`: a Parseval frame.
    pub fn parseval(g: &CVector) -> Result<Self> {
        check_window(g)?;
        Self::new(&g.unscale(g.norm()), 1.0 / g.len() as f64)
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &CVector {
        &self.window
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn into_frame(self) -> Frame {
        self.frame
    }

    /// `w·N‖g‖²`.
    pub fn tight_bound(&self) -> f64 {
        self.frame.space().weights()[0] * self.n() as f64 * self.window.norm_squared()
    }

    /// `V_g f` over this system's grid.
    pub fn stft(&self, f: &CVector) -> Result<CoefficientFunction> {
        CoefficientFunction::new(self.frame.space().clone(), stft_values(f, &self.window)?)
    }
}

/// Gabor frame with unit weights.
pub fn gabor_frame(g: &CVector) -> Result<GaborSystem> {
    GaborSystem::new(g, 1.0)
}

fn check_lengths(f: &CVector, g: &CVector) -> Result<()> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch {
            context: "stft",
            expected: g.len(),
            found: f.len(),
        });
    }
    if g.is_empty() {
        return Err(Error::ZeroWindow);
    }
    Ok(())
}

/// Row `k` of the STFT is the forward DFT of `f · conj(T_k g)`.
fn stft_values(f: &CVector, g: &CVector) -> Result<Vec<Complex64>> {
    check_lengths(f, g)?;
    let n = g.len();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut out = vec![ZERO; n * n];
    for (k, row) in out.chunks_mut(n).enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            *slot = f[t] * g[(t + n - k) % n].conj();
        }
        fft.process(row);
    }
    Ok(out)
}

/// `V_g f(k, l) = <f, π(k,l) g>` on the unit-weight grid, via FFT.
pub fn stft(f: &CVector, g: &CVector) -> Result<CoefficientFunction> {
    let values = stft_values(f, g)?;
    CoefficientFunction::new(gabor_space(g.len(), 1.0)?, values)
}

/// The same transform summed directly from the definition.
pub fn stft_direct(f: &CVector, g: &CVector) -> Result<CoefficientFunction> {
    check_lengths(f, g)?;
    let n = g.len();
    let mut values = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            values.push(crate::linalg::inner(f, &time_frequency_shift(g, k, l)));
        }
    }
    CoefficientFunction::new(gabor_space(n, 1.0)?, values)
}

/// `|V_g f|²` as an `N × N` matrix (row = time shift, column = frequency).
pub fn spectrogram(f: &CVector, g: &CVector) -> Result<CMatrix> {
    let values = stft_values(f, g)?;
    let n = g.len();
    Ok(CMatrix::from_fn(n, n, |k, l| {
        Complex64::new(values[k * n + l].norm_sqr(), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{analysis, frame_bounds};
    use crate::linalg::{c, inner, rvector, ONE};
    use crate::random::{random_vector, rng};
    use proptest::prelude::*;

    fn energy(v: &CoefficientFunction) -> f64 {
        v.values().iter().map(Complex64::norm_sqr).sum()
    }

    #[test]
    fn delta_window_is_tight() {
        let g = rvector(&[1.0, 0.0, 0.0, 0.0]);
        let sys = gabor_frame(&g).unwrap();
        let b = frame_bounds(sys.frame());
        assert!((b.lower - 4.0).abs() < 1e-12 && (b.upper - 4.0).abs() < 1e-12);
        let mut r = rng(8);
        for _ in 0..5 {
            let f = random_vector(&mut r, 4);
            assert!((energy(&sys.stft(&f).unwrap()) - 4.0 * f.norm_squared()).abs() < 1e-12 * f.norm_squared());
        }
    }

    #[test]
    fn flat_window_n2() {
        let g = rvector(&[1.0, 1.0]).unscale(2f64.sqrt());
        let b = frame_bounds(gabor_frame(&g).unwrap().frame());
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_scaling() {
        let mut r = rng(9);
        let sys = GaborSystem::parseval(&random_vector(&mut r, 6)).unwrap();
        let b = frame_bounds(sys.frame());
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
        assert!((sys.tight_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stft_examples() {
        let d = rvector(&[1.0, 0.0]);
        assert!((energy(&stft(&d, &d).unwrap()) - 2.0).abs() < 1e-15);
        let zero = CVector::zeros(3);
        assert!(stft(&zero, &rvector(&[1.0, 2.0, 3.0]))
            .unwrap()
            .values()
            .iter()
            .all(|z| *z == ZERO));
        assert!(matches!(stft(&zero, &d), Err(Error::LengthMismatch { .. })));
        assert!(matches!(gabor_frame(&zero), Err(Error::ZeroWindow)));
    }

    #[test]
    fn shift_definition() {
        let g = CVector::from_vec(vec![ONE, c(2.0, 0.0), c(0.0, 3.0)]);
        let s = time_frequency_shift(&g, 1, 1);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((s[0] - c(0.0, 3.0)).norm() < 1e-15);
        assert!((s[1] - w).norm() < 1e-15);
        assert!((s[2] - w * w * 2.0).norm() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn fft_matches_direct_and_analysis(seed in any::<u64>(), n in 1usize..12) {
            let mut r = rng(seed);
            let (f, g) = (random_vector(&mut r, n), random_vector(&mut r, n));
            let fast = stft(&f, &g).unwrap();
            let direct = stft_direct(&f, &g).unwrap();
            let via_frame = analysis(gabor_frame(&g).unwrap().frame(), &f).unwrap();
            let scale = f.norm() * g.norm();
            for ((a, b), c) in fast.values().iter().zip(direct.values()).zip(via_frame.values()) {
                prop_assert!((a - b).norm() <= 1e-12 * scale);
                prop_assert!((a - c).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn orthogonality_relation(seed in any::<u64>(), n in 1usize..12) {
            let mut r = rng(seed);
            let (f1, f2, g1, g2) = (random_vector(&mut r, n), random_vector(&mut r, n), random_vector(&mut r, n), random_vector(&mut r, n));
            let lhs = stft(&f1, &g1).unwrap().inner(&stft(&f2, &g2).unwrap()).unwrap();
            let rhs = inner(&f1, &f2) * inner(&g1, &g2).conj() * n as f64;
            let scale = f1.norm() * f2.norm() * g1.norm() * g2.norm() * n as f64;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }
}
