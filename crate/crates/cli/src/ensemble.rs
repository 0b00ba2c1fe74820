//! Seeded random matrices.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`; trial `i` reads from stream `i`, so each trial is
//! reproducible on its own and independent of scheduling. Entries have
//! independent real and imaginary parts uniform on `[-1, 1]`.

use gaplab_core::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn entry(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

pub fn matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols).map(|_| entry(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite entries")
}

/// `(M + M*)/2` for a random square `M`.
pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let m = matrix(rng, n, n);
    (&m + &m.adjoint()).scale_real(0.5)
}
