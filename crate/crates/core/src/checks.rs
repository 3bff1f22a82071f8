//! Seeded identity suites: each instance is regenerated from its own seed,
//! so a failure can be replayed from the reported seed alone.

use rand::Rng;

use crate::fixtures::{random_distribution, random_state, rng};
use crate::qmat::{conditional_mutual_information, quantum_cmi};
use crate::secrecy::{s_n, shannon_cmi_unconditioned, sum_party_rest_mutual_information};
use crate::states::{noisy_ghz3, NoiseParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Multipartite CMI against its telescoping expansion, N ∈ {3, 4}.
    Expansion,
    /// `S_N + I(A₁:…:A_N) = Σ_i I(A_i : rest)` on classical distributions.
    Duality,
    /// Noisy GHZ decomposition against the depolarized state.
    Reconstruction,
    /// Multipartite CMI under permutations of the parties.
    Permutation,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Expansion, Suite::Duality, Suite::Reconstruction, Suite::Permutation];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Expansion => "expansion",
            Suite::Duality => "duality",
            Suite::Reconstruction => "reconstruction",
            Suite::Permutation => "permutation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub failing_seeds: Vec<u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failing_seeds.is_empty()
    }
}

/// Error of one instance. `corrupt` adds a deliberate 1e-6 offset so callers
/// can check that failures are reported.
pub fn instance_error(suite: Suite, seed: u64, corrupt: bool) -> f64 {
    let mut r = rng(seed);
    let err = match suite {
        Suite::Expansion => {
            let n = if seed.is_multiple_of(2) { 3 } else { 4 };
            let rho = random_state(vec![2; n + 1], r.gen_range(1..=4), &mut r);
            let eve = [n];
            let groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            let direct = quantum_cmi(&rho, &groups, &eve).expect("valid grouping");
            let telescoped: f64 = (1..n)
                .map(|k| {
                    let before: Vec<usize> = (0..k).collect();
                    conditional_mutual_information(&rho, &[k], &before, &eve).expect("valid grouping")
                })
                .sum();
            (direct - telescoped).abs()
        }
        Suite::Duality => {
            let alph: Vec<usize> = (0..3).map(|_| r.gen_range(2..=3)).collect();
            let p = random_distribution(alph, 1, &mut r);
            (s_n(&p) + shannon_cmi_unconditioned(&p) - sum_party_rest_mutual_information(&p)).abs()
        }
        Suite::Reconstruction => {
            let nu = NoiseParameter::new(r.gen_range(0.0..=1.0)).expect("unit interval");
            noisy_ghz3(nu).reconstruction_error()
        }
        Suite::Permutation => {
            let n = 3;
            let rho = random_state(vec![2; n + 1], r.gen_range(1..=4), &mut r);
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, r.gen_range(0..=i));
            }
            let groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
            let permuted: Vec<Vec<usize>> = order.iter().map(|&i| vec![i]).collect();
            let a = quantum_cmi(&rho, &groups, &[n]).expect("valid grouping");
            let b = quantum_cmi(&rho, &permuted, &[n]).expect("valid grouping");
            (a - b).abs()
        }
    };
    if corrupt {
        err + 1e-6
    } else {
        err
    }
}

/// Runs `instances` instances with seeds `base_seed, base_seed+1, …`.
pub fn run_suite(suite: Suite, base_seed: u64, instances: usize, tolerance: f64, corrupt: bool) -> SuiteReport {
    use rayon::prelude::*;
    let errors: Vec<(u64, f64)> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            (seed, instance_error(suite, seed, corrupt))
        })
        .collect();
    let max_error = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let failing_seeds = errors.iter().filter(|e| e.1.is_nan() || e.1 > tolerance).map(|e| e.0).collect();
    SuiteReport { suite, instances, max_error, tolerance, failing_seeds }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_corruption_fails() {
        for suite in Suite::ALL {
            let ok = run_suite(suite, 5, 12, 1e-9, false);
            assert!(ok.passed(), "{:?}", ok);
            let bad = run_suite(suite, 5, 3, 1e-9, true);
            assert_eq!(bad.failing_seeds, vec![5, 6, 7]);
        }
    }
}
