//! Seeded fixtures shared by the benchmarks.

use contframe::random::{random_family_like, random_frame, random_symbol, random_vector, rng, SeededRng};
use contframe::{CVector, Frame, Symbol};

pub const SEED: u64 = 0x5eed;

pub fn seeded() -> SeededRng {
    rng(SEED)
}

/// A random frame with `k` atoms in `C^n`, a second family on the same space and a symbol.
pub fn multiplier_fixture(n: usize, k: usize) -> (Symbol, Frame, Frame) {
    let mut r = seeded();
    let f = random_frame(&mut r, n, k);
    let g = random_family_like(&mut r, &f);
    let m = random_symbol(&mut r, f.space().clone());
    (m, f, g)
}

pub fn frame_pair(n: (usize, usize), k: (usize, usize)) -> (Frame, Frame) {
    let mut r = seeded();
    (random_frame(&mut r, n.0, k.0), random_frame(&mut r, n.1, k.1))
}

pub fn signal(n: usize) -> CVector {
    random_vector(&mut seeded(), n)
}
