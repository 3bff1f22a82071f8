//! Seeded random instances for identity checks.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::secrecy::JointDistribution;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Ginibre-style random state of the given rank.
pub fn random_state(dims: Vec<usize>, rank: usize, rng: &mut impl Rng) -> DensityMatrix<f64> {
    let d: usize = dims.iter().product();
    let g = ComplexMatrix::from_fn(d, rank, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = g.matmul(&g.adjoint()).unwrap();
    let tr = m.trace().re;
    DensityMatrix::new(dims, m.scale(1.0 / tr)).unwrap()
}

/// Distribution with i.i.d. uniform weights, normalized.
pub fn random_distribution(parties: Vec<usize>, eve: usize, rng: &mut impl Rng) -> JointDistribution<f64> {
    let n: usize = parties.iter().product::<usize>() * eve;
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    JointDistribution::new(parties, eve, raw.into_iter().map(|x| x / total).collect()).unwrap()
}
