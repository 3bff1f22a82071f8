//! Von Neumann entropies and derived correlation measures, in bits.

use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let clamp = T::lit(T::EIGEN_CLAMP);
    rho.eigen()
        .values
        .into_iter()
        .filter(|&l| l > clamp)
        .map(|l| -l * l.log2())
        .sum::<T>()
        .max(T::zero())
}

/// Entropy of the marginal on `subsystems`; the empty set has entropy 0.
pub fn subsystem_entropy<T: Real>(rho: &DensityMatrix<T>, subsystems: &[usize]) -> Result<T> {
    if subsystems.is_empty() {
        return Ok(T::zero());
    }
    let mut keep = subsystems.to_vec();
    keep.sort_unstable();
    if keep.len() == rho.num_subsystems() {
        return Ok(von_neumann_entropy(rho));
    }
    Ok(von_neumann_entropy(&rho.partial_trace(&keep)?))
}

/// `I(A:B|C) = H(AC) + H(BC) - H(C) - H(ABC)` for disjoint subsystem sets.
pub fn conditional_mutual_information<T: Real>(
    rho: &DensityMatrix<T>,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<T> {
    let ac = [a, c].concat();
    let bc = [b, c].concat();
    let abc = [a, b, c].concat();
    check_disjoint(&abc, rho.num_subsystems())?;
    Ok(subsystem_entropy(rho, &ac)? + subsystem_entropy(rho, &bc)?
        - subsystem_entropy(rho, c)?
        - subsystem_entropy(rho, &abc)?)
}

/// Multipartite conditional mutual information
/// `Σ_i H(A_i|E) - H(A_1…A_N|E)`.
///
/// `groups` are the parties `A_1…A_N` (each a set of subsystems); `eve` may be
/// empty. Together they must cover every subsystem exactly once.
pub fn quantum_cmi<T: Real>(rho: &DensityMatrix<T>, groups: &[Vec<usize>], eve: &[usize]) -> Result<T> {
    if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
        return Err(Error::InvalidPartition("parties must be nonempty".into()));
    }
    let all: Vec<usize> = groups.iter().flatten().chain(eve).copied().collect();
    check_disjoint(&all, rho.num_subsystems())?;
    if all.len() != rho.num_subsystems() {
        return Err(Error::InvalidPartition(format!(
            "groups cover {} of {} subsystems",
            all.len(),
            rho.num_subsystems()
        )));
    }
    let h_e = subsystem_entropy(rho, eve)?;
    let mut total = T::zero();
    for g in groups {
        total += subsystem_entropy(rho, &[g.as_slice(), eve].concat())? - h_e;
    }
    total -= von_neumann_entropy(rho) - h_e;
    Ok(total)
}

/// `D(ρ‖σ) = Tr ρ (log ρ - log σ)` in bits, `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.dims(), sigma.dims())));
    }
    let er = rho.eigen();
    let es = sigma.eigen();
    let d = rho.dim();
    let clamp = T::lit(T::EIGEN_CLAMP);
    let support_tol = T::lit(1e-10);

    let mut cross = T::zero(); // Tr ρ log σ
    let mut self_term = T::zero(); // Tr ρ log ρ
    for i in 0..d {
        let p = er.values[i];
        if p <= clamp {
            continue;
        }
        self_term += p * p.log2();
        let mut leaked = T::zero();
        for j in 0..d {
            let overlap = (0..d)
                .map(|k| er.vectors[(k, i)].conj() * es.vectors[(k, j)])
                .fold(num_complex::Complex::new(T::zero(), T::zero()), |a, b| a + b)
                .norm_sqr();
            let q = es.values[j];
            if q <= clamp {
                leaked += overlap;
            } else {
                cross += p * overlap * q.log2();
            }
        }
        if p > support_tol && leaked > clamp {
            return Ok(T::infinity());
        }
    }
    Ok((self_term - cross).max(T::zero()))
}

fn check_disjoint(indices: &[usize], count: usize) -> Result<()> {
    let mut seen = vec![false; count];
    for &i in indices {
        if i >= count {
            return Err(Error::IndexOutOfRange { index: i, count });
        }
        if seen[i] {
            return Err(Error::InvalidPartition(format!("subsystem {i} appears twice")));
        }
        seen[i] = true;
    }
    Ok(())
}
