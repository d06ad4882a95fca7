//! Seeded generators for random frames, vectors and symbols.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::frames::Frame;
use crate::linalg::{CMatrix, CVector};
use crate::measure::MeasureSpace;
use crate::multiplier::Symbol;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `K` atoms with weights in `[0.25, 2)`.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, k: usize) -> MeasureSpace {
    let weights = (0..k).map(|_| rng.random_range(0.25..2.0)).collect();
    MeasureSpace::with_weights(weights).expect("positive weights")
}

/// Gaussian vectors over a random atomic space; a frame almost surely when `k ≥ n`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Frame {
    let space = Arc::new(random_space(rng, k));
    let vectors = random_matrix(rng, n, k);
    Frame::new(space, vectors).expect("finite entries")
}

/// Random Bessel family on the space of `like`.
pub fn random_family_like<R: Rng + ?Sized>(rng: &mut R, like: &Frame) -> Frame {
    like.with_vectors(random_matrix(rng, like.dim(), like.len()))
        .expect("finite entries")
}

pub fn random_symbol<R: Rng + ?Sized>(rng: &mut R, space: Arc<MeasureSpace>) -> Symbol {
    let values = (0..space.len()).map(|_| gaussian(rng)).collect();
    Symbol::new(space, values).expect("matching length")
}

/// Real symbol with values in `[lo, hi)`.
pub fn random_positive_symbol<R: Rng + ?Sized>(rng: &mut R, space: Arc<MeasureSpace>, lo: f64, hi: f64) -> Symbol {
    let values = (0..space.len())
        .map(|_| Complex64::new(rng.random_range(lo..hi), 0.0))
        .collect();
    Symbol::new(space, values).expect("matching length")
}
