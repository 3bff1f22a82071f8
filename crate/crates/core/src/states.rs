//! Concrete states: GHZ, ideal conference key states and the depolarized
//! three-qubit GHZ state together with its biseparable decomposition.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

/// Local depolarizing strength `ν ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseParameter<T: Real = f64>(T);

impl<T: Real> NoiseParameter<T> {
    pub fn new(nu: T) -> Result<Self> {
        if !(nu >= T::zero() && nu <= T::one()) {
            return Err(Error::OutOfRange(format!("noise parameter {nu} outside [0, 1]")));
        }
        Ok(Self(nu))
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// `(1/√d) Σ_i |i…i⟩` on `n_parties` factors of dimension `local_dim`.
pub fn ghz<T: Real>(n_parties: usize, local_dim: usize) -> Result<DensityMatrix<T>> {
    if n_parties < 2 || local_dim < 2 {
        return Err(Error::OutOfRange(format!(
            "GHZ needs at least 2 parties of dimension >= 2, got n={n_parties}, d={local_dim}"
        )));
    }
    let total = local_dim.pow(n_parties as u32);
    // |i…i⟩ sits at i * (d^n - 1)/(d - 1)
    let stride = (total - 1) / (local_dim - 1);
    let mut amp = vec![Complex::zero(); total];
    for i in 0..local_dim {
        amp[i * stride] = Complex::one();
    }
    DensityMatrix::from_pure(vec![local_dim; n_parties], &amp)
}

/// `(1/K) Σ_k |k⟩⟨k|^{⊗N} ⊗ σ_E`.
pub fn ideal_key_state<T: Real>(
    n_parties: usize,
    key_dim: usize,
    eve_state: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    if n_parties < 1 || key_dim < 2 {
        return Err(Error::OutOfRange(format!("key state needs K >= 2, got K={key_dim}")));
    }
    let total = key_dim.pow(n_parties as u32);
    let stride = (total - 1) / (key_dim - 1);
    let mut diag = vec![T::zero(); total];
    let w = T::one() / T::lit(key_dim as f64);
    for k in 0..key_dim {
        diag[k * stride] = w;
    }
    let key = DensityMatrix::from_parts_unchecked(vec![key_dim; n_parties], ComplexMatrix::diag(&diag));
    Ok(key.tensor(eve_state))
}

/// `(1-ν) ρ + ν (I/2)_site ⊗ Tr_site ρ`, the qubit depolarizing channel on one factor.
pub fn depolarize<T: Real>(rho: &DensityMatrix<T>, site: usize, nu: NoiseParameter<T>) -> Result<DensityMatrix<T>> {
    let dims = rho.dims();
    let n = dims.len();
    if site >= n {
        return Err(Error::IndexOutOfRange { index: site, count: n });
    }
    if dims[site] != 2 {
        return Err(Error::DimensionMismatch(format!("site {site} has dimension {}, not a qubit", dims[site])));
    }
    let nu = nu.value();
    if n == 1 {
        let noise = ComplexMatrix::identity(2).scale(T::lit(0.5));
        let m = rho.matrix().scale(T::one() - nu).add(&noise.scale(nu))?;
        return Ok(DensityMatrix::from_parts_unchecked(dims.to_vec(), m));
    }

    let others: Vec<usize> = (0..n).filter(|&i| i != site).collect();
    let reduced = rho.partial_trace(&others)?;
    // stride of the site digit; index without the site digit
    let low: usize = dims[site + 1..].iter().product();
    let strip = |idx: usize| (idx / (2 * low)) * low + idx % low;
    let bit = |idx: usize| (idx / low) % 2;

    let d = rho.dim();
    let half_nu = nu * T::lit(0.5);
    let m = ComplexMatrix::from_fn(d, d, |r, c| {
        let mut v = rho.matrix()[(r, c)] * (T::one() - nu);
        if bit(r) == bit(c) {
            v += reduced.matrix()[(strip(r), strip(c))] * half_nu;
        }
        v
    });
    Ok(DensityMatrix::from_parts_unchecked(dims.to_vec(), m))
}

/// `(|00⟩⟨00| + |11⟩⟨11|)/2` on qubits `i, j` of three, tensored with `I/2` on
/// the remaining qubit. Qubit 0 is Alice, 1 is Bob₁, 2 is Bob₂.
pub fn kappa_pair<T: Real>(i: usize, j: usize) -> DensityMatrix<T> {
    assert!(i < 3 && j < 3 && i != j, "kappa_pair needs two distinct qubits out of three");
    let bit = |b: usize, q: usize| (b >> (2 - q)) & 1;
    let diag: Vec<T> = (0..8).map(|b| if bit(b, i) == bit(b, j) { T::lit(0.25) } else { T::zero() }).collect();
    DensityMatrix::from_parts_unchecked(vec![2, 2, 2], ComplexMatrix::diag(&diag))
}

/// One weighted term of the biseparable remainder.
#[derive(Debug, Clone)]
pub struct WeightedTerm<T: Real = f64> {
    pub label: &'static str,
    /// Weight in the full noisy state, i.e. before dividing by the
    /// biseparable weight.
    pub weight: T,
    pub state: DensityMatrix<T>,
}

/// `D_ν^{⊗3}(GHZ) = (1-ν)³ GHZ + (1-(1-ν)³) χ_ν`.
#[derive(Debug, Clone)]
pub struct GhzDecomposition<T: Real = f64> {
    pub nu: NoiseParameter<T>,
    /// The noisy state, computed by applying the channel to each qubit.
    pub state: DensityMatrix<T>,
    pub ghz: DensityMatrix<T>,
    pub ghz_weight: T,
    pub biseparable_weight: T,
    pub chi: DensityMatrix<T>,
    pub kappa_terms: Vec<WeightedTerm<T>>,
}

impl<T: Real> GhzDecomposition<T> {
    /// `ghz_weight · GHZ + biseparable_weight · χ_ν`.
    pub fn reconstruct(&self) -> DensityMatrix<T> {
        DensityMatrix::mixture(&[(self.ghz_weight, &self.ghz), (self.biseparable_weight, &self.chi)])
            .expect("weights form a probability vector")
    }

    pub fn reconstruction_error(&self) -> T {
        self.reconstruct().matrix().max_abs_diff(self.state.matrix())
    }
}

pub fn noisy_ghz3<T: Real>(nu: NoiseParameter<T>) -> GhzDecomposition<T> {
    let v = nu.value();
    let one = T::one();
    let keep = one - v;
    let ghz = ghz::<T>(3, 2).expect("valid GHZ size");

    let mut state = ghz.clone();
    for site in 0..3 {
        state = depolarize(&state, site, nu).expect("qubit sites");
    }

    let ghz_weight = keep * keep * keep;
    let biseparable_weight = one - ghz_weight;
    let pair_weight = keep * keep * v;
    // one qubit of the pair is depolarized twice over: the whole state is I/8
    let mixed_weight = (T::lit(3.0) - T::lit(2.0) * v) * v * v;
    let kappa_terms = vec![
        WeightedTerm { label: "kappa_AB1 x I_B2/2", weight: pair_weight, state: kappa_pair(0, 1) },
        WeightedTerm { label: "kappa_AB2 x I_B1/2", weight: pair_weight, state: kappa_pair(0, 2) },
        WeightedTerm { label: "kappa_B1B2 x I_A/2", weight: pair_weight, state: kappa_pair(1, 2) },
        WeightedTerm {
            label: "I/8",
            weight: mixed_weight,
            state: DensityMatrix::maximally_mixed(vec![2, 2, 2]).expect("valid dims"),
        },
    ];

    // At ν = 0 χ_ν carries no weight; use its ν → 0 limit (equal κ terms).
    let chi_weights: Vec<T> = if biseparable_weight > T::zero() {
        kappa_terms.iter().map(|t| t.weight / biseparable_weight).collect()
    } else {
        let third = one / T::lit(3.0);
        vec![third, third, third, T::zero()]
    };
    let mut chi_matrix = ComplexMatrix::zeros(8, 8);
    for (w, t) in chi_weights.iter().zip(&kappa_terms) {
        chi_matrix = chi_matrix.add(&t.state.matrix().scale(*w)).expect("same shape");
    }
    let chi = DensityMatrix::from_parts_unchecked(vec![2, 2, 2], chi_matrix);

    GhzDecomposition { nu, state, ghz, ghz_weight, biseparable_weight, chi, kappa_terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{partial_trace, quantum_cmi};

    fn nu(v: f64) -> NoiseParameter<f64> {
        NoiseParameter::new(v).unwrap()
    }

    #[test]
    fn noise_parameter_range() {
        assert!(NoiseParameter::new(-0.01f64).is_err());
        assert!(NoiseParameter::new(1.01f64).is_err());
        assert!(NoiseParameter::new(f64::NAN).is_err());
        assert!(NoiseParameter::new(1.0f64).is_ok());
    }

    #[test]
    fn bell_state() {
        let phi = ghz::<f64>(2, 2).unwrap();
        assert!((phi.matrix()[(0, 3)].re - 0.5).abs() < 1e-15);
        assert!((phi.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz3_entries() {
        let g = ghz::<f64>(3, 2).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let expected = if (r == 0 || r == 7) && (c == 0 || c == 7) { 0.5 } else { 0.0 };
                assert!((g.matrix()[(r, c)].re - expected).abs() < 1e-15);
                assert_eq!(g.matrix()[(r, c)].im, 0.0);
            }
        }
        let marginal = partial_trace(&g, &[2]).unwrap();
        assert!(marginal.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn ghz_qutrits() {
        let g = ghz::<f64>(3, 3).unwrap();
        assert!((g.matrix()[(13, 26)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.matrix()[(0, 13)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!(ghz::<f64>(1, 2).is_err());
        assert!(ghz::<f64>(3, 1).is_err());
    }

    #[test]
    fn ideal_key_state_properties() {
        let eve = DensityMatrix::<f64>::basis_state(vec![2], 0).unwrap();
        let tau = ideal_key_state(3, 2, &eve).unwrap();
        let cmi = quantum_cmi(&tau, &[vec![0], vec![1], vec![2]], &[3]).unwrap();
        assert!((cmi - 2.0).abs() < 1e-10);

        let tau2 = ideal_key_state(2, 2, &eve).unwrap();
        let a1 = partial_trace(&tau2, &[0]).unwrap();
        assert!(a1.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        assert!(ideal_key_state(3, 1, &eve).is_err());
    }

    #[test]
    fn depolarize_examples() {
        let zero = DensityMatrix::<f64>::basis_state(vec![2], 0).unwrap();
        assert_eq!(depolarize(&zero, 0, nu(0.0)).unwrap().matrix(), zero.matrix());
        let full = depolarize(&zero, 0, nu(1.0)).unwrap();
        assert!(full.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
        let half = depolarize(&zero, 0, nu(0.5)).unwrap();
        assert!(half.matrix().max_abs_diff(&ComplexMatrix::diag(&[0.75, 0.25])) < 1e-15);
    }

    #[test]
    fn depolarize_rejects_non_qubit() {
        let q = DensityMatrix::<f64>::maximally_mixed(vec![2, 3]).unwrap();
        assert!(depolarize(&q, 1, nu(0.2)).is_err());
        assert!(depolarize(&q, 2, nu(0.2)).is_err());
        assert!(depolarize(&q, 0, nu(0.2)).is_ok());
    }

    #[test]
    fn depolarized_states_remain_valid() {
        let g = ghz::<f64>(3, 2).unwrap();
        let d = depolarize(&g, 1, nu(0.37)).unwrap();
        assert!(DensityMatrix::new(d.dims().to_vec(), d.matrix().clone()).is_ok());
    }

    #[test]
    fn single_site_observation() {
        let g = ghz::<f64>(3, 2).unwrap();
        for &v in &[0.0, 0.1, 0.5, 0.9, 1.0] {
            let direct = depolarize(&g, 0, nu(v)).unwrap();
            let expected = DensityMatrix::mixture(&[(1.0 - v, &g), (v, &kappa_pair(1, 2))]).unwrap();
            assert!(direct.matrix().max_abs_diff(expected.matrix()) < 1e-10);
        }
    }

    #[test]
    fn noisy_ghz3_endpoints() {
        let clean = noisy_ghz3(nu(0.0));
        assert_eq!(clean.ghz_weight, 1.0);
        assert_eq!(clean.biseparable_weight, 0.0);
        assert!(clean.reconstruction_error() < 1e-12);

        let full = noisy_ghz3(nu(1.0));
        assert!(full.state.matrix().max_abs_diff(&ComplexMatrix::identity(8).scale(0.125)) < 1e-12);
        assert!(full.reconstruction_error() < 1e-12);
    }

    #[test]
    fn noisy_ghz3_reconstruction_grid() {
        for k in 0..20 {
            let v = k as f64 / 19.0;
            let dec = noisy_ghz3(nu(v));
            let total: f64 = dec.ghz_weight + dec.kappa_terms.iter().map(|t| t.weight).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-12, "weights at ν={v}");
            assert!((dec.ghz_weight + dec.biseparable_weight - 1.0).abs() < 1e-12);
            assert!(dec.reconstruction_error() < 1e-10, "ν={v}");
            assert!((dec.chi.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chi_symmetric_under_bob_swap() {
        // B1 <-> B2 swaps the two low bits of the basis index
        let swap = |b: usize| (b & 0b100) | ((b & 0b010) >> 1) | ((b & 0b001) << 1);
        for &v in &[0.0, 0.05, 0.1189, 0.4, 1.0] {
            let chi = noisy_ghz3(nu(v)).chi;
            for r in 0..8 {
                for c in 0..8 {
                    assert!((chi.matrix()[(r, c)] - chi.matrix()[(swap(r), swap(c))]).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn single_precision_decomposition() {
        let dec = noisy_ghz3(NoiseParameter::new(0.1f32).unwrap());
        assert!(dec.reconstruction_error() < 1e-5);
    }
}
