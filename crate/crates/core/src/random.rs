//! Seeded, stream-split random generation.
//!
//! A run has one seed. Each suite owns a stream id and each draw inside a
//! suite owns an index; [`draw_rng`] maps `(seed, stream, index)` onto an
//! independent ChaCha stream so that parallel sweeps are reproducible no
//! matter how work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Stream ids used by the built-in suites.
pub mod streams {
    pub const ENTROPY: u64 = 1;
    pub const SUBADDITIVITY: u64 = 2;
    pub const QUDIT: u64 = 3;
    pub const WIGNER: u64 = 4;
    pub const FOCK_SUPERPOSITION: u64 = 5;
    pub const HOMODYNE: u64 = 6;
    pub const BOOTSTRAP: u64 = 7;
    pub const RECONSTRUCTION: u64 = 8;
    pub const PROBVEC_DRAWS: u64 = 9;
    pub const QUDIT_STATES: u64 = 10;
}

/// Generator for draw `index` of suite `stream` under `seed`.
pub fn draw_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 40) ^ index);
    rng
}

/// Uniform draw from the probability simplex of dimension `n` (flat Dirichlet).
pub fn simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Simplex draw where each component is zeroed with probability `p_zero`
/// (at least one component survives). Exercises the `0 ln 0` boundary.
pub fn sparse_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize, p_zero: f64) -> Vec<f64> {
    let mut v = simplex(rng, n);
    let keep = rng.random_range(0..n);
    for (i, x) in v.iter_mut().enumerate() {
        if i != keep && rng.random::<f64>() < p_zero {
            *x = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// One standard normal deviate.
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}
