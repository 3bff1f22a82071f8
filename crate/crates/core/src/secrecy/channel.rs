use super::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-stochastic map `Λ(f|e)` acting on the eavesdropper's symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel<T: Real = f64> {
    in_alphabet: usize,
    out_alphabet: usize,
    matrix: Vec<T>,
}

impl<T: Real> ClassicalChannel<T> {
    /// `matrix[e * out_alphabet + f] = Λ(f|e)`.
    pub fn new(in_alphabet: usize, out_alphabet: usize, matrix: Vec<T>) -> Result<Self> {
        if in_alphabet == 0 || out_alphabet == 0 || matrix.len() != in_alphabet * out_alphabet {
            return Err(Error::InvalidChannel(format!(
                "{} entries for a {in_alphabet}->{out_alphabet} channel",
                matrix.len()
            )));
        }
        let tol = T::lit(T::VALIDATION_TOL);
        for (e, row) in matrix.chunks(out_alphabet).enumerate() {
            if row.iter().any(|&x| !(x >= -tol && x <= T::one() + tol)) {
                return Err(Error::InvalidChannel(format!("row {e} has entries outside [0,1]")));
            }
            let s: T = row.iter().copied().sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidChannel(format!("row {e} sums to {s}")));
            }
        }
        let matrix = matrix.into_iter().map(|x| x.max(T::zero()).min(T::one())).collect();
        Ok(Self { in_alphabet, out_alphabet, matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self::deterministic(&(0..n).collect::<Vec<_>>(), n).expect("identity map is valid")
    }

    /// Every input goes to output `target`.
    pub fn constant(in_alphabet: usize, out_alphabet: usize, target: usize) -> Result<Self> {
        Self::deterministic(&vec![target; in_alphabet], out_alphabet)
    }

    /// `e ↦ map[e]`.
    pub fn deterministic(map: &[usize], out_alphabet: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&f| f >= out_alphabet) {
            return Err(Error::InvalidChannel(format!("output {bad} outside alphabet of size {out_alphabet}")));
        }
        let mut matrix = vec![T::zero(); map.len() * out_alphabet];
        for (e, &f) in map.iter().enumerate() {
            matrix[e * out_alphabet + f] = T::one();
        }
        Self::new(map.len(), out_alphabet, matrix)
    }

    pub fn in_alphabet(&self) -> usize {
        self.in_alphabet
    }

    pub fn out_alphabet(&self) -> usize {
        self.out_alphabet
    }

    pub fn get(&self, e: usize, f: usize) -> T {
        self.matrix[e * self.out_alphabet + f]
    }

    pub fn matrix(&self) -> &[T] {
        &self.matrix
    }

    /// `Some(map)` when every row is a point mass.
    pub fn as_deterministic(&self) -> Option<Vec<usize>> {
        self.matrix
            .chunks(self.out_alphabet)
            .map(|row| row.iter().position(|&x| x == T::one()).filter(|_| row.iter().filter(|&&x| x != T::zero()).count() == 1))
            .collect()
    }
}

/// `P'(a, f) = Σ_e P(a, e) Λ(f|e)`, renormalized.
pub fn apply_channel<T: Real>(p: &JointDistribution<T>, channel: &ClassicalChannel<T>) -> Result<JointDistribution<T>> {
    if channel.in_alphabet() != p.eve_alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "channel reads {} symbols, Eve has {}",
            channel.in_alphabet(),
            p.eve_alphabet()
        )));
    }
    let (n_a, n_e, n_f) = (p.num_party_outcomes(), p.eve_alphabet(), channel.out_alphabet());
    let mut out = vec![T::zero(); n_a * n_f];
    for a in 0..n_a {
        for e in 0..n_e {
            let pae = p.probs()[a * n_e + e];
            if pae == T::zero() {
                continue;
            }
            for f in 0..n_f {
                out[a * n_f + f] += pae * channel.get(e, f);
            }
        }
    }
    let total: T = out.iter().copied().sum();
    for x in out.iter_mut() {
        *x /= total;
    }
    JointDistribution::new(p.party_alphabets().to_vec(), n_f, out)
}
