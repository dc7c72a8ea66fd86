//! Shared helpers for the randomized invariant batteries.

// Each test target compiles this module separately and uses a subset.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vnpointer_core::pointer::{PointerGrid, PointerWavefunction};
use vnpointer_core::system::{Projector, SystemState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> SystemState {
    loop {
        let v = random_complex_vector(rng, dim);
        if let Ok(state) = SystemState::normalized(v) {
            return state;
        }
    }
}

/// Random projector of the given rank, built from an orthonormalized span.
pub fn random_projector(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Projector {
    loop {
        let span: Vec<Vec<Complex64>> =
            (0..rank).map(|_| random_complex_vector(rng, dim)).collect();
        if let Ok(p) = Projector::from_span(&span) {
            return p;
        }
    }
}

/// The battery grid: wide enough for |gamma| <= 8 on unit-width packets.
pub fn battery_grid() -> PointerGrid {
    PointerGrid::from_bounds(-32.0, 32.0, 512).unwrap()
}

/// Gaussian with a momentum boost `e^{ik0 q}`, normalized on the grid.
pub fn boosted_gaussian(
    grid: PointerGrid,
    center: f64,
    sigma: f64,
    k0: f64,
) -> PointerWavefunction {
    let samples: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let q = grid.q(k);
            let envelope = (-(q - center) * (q - center) / (4.0 * sigma * sigma)).exp();
            Complex64::new(envelope * (k0 * q).cos(), envelope * (k0 * q).sin())
        })
        .collect();
    PointerWavefunction::normalized(grid, samples).unwrap()
}

pub fn max_sample_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
