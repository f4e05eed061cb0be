#![allow(dead_code)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superatom::linalg::{dagger, trace};
use superatom::{Matrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Array2::from_shape_fn((d, d), |_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

/// Random full-rank density matrix.
pub fn random_density(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let m = random_matrix(d, rng);
    let p = m.dot(&dagger(&m));
    // symmetrize so that ρ = ρ† holds bit for bit
    let p = (&p + &dagger(&p)).mapv(|z| z * 0.5);
    let t = trace(&p);
    p.mapv(|z| z / t)
}

pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let m = random_matrix(d, rng);
    (&m + &dagger(&m)).mapv(|z| z * 0.5)
}

pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Uniform time grid `0, dt, …, t_end`.
pub fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}
