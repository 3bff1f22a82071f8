//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `M = V diag(values) V†`, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real = f64> {
    pub values: Vec<T>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k])
                .fold(Complex::zero(), |a, b| a + b)
        })
    }
}

pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("eigensolver needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let defect = m.hermitian_defect();
    if defect > T::lit(T::VALIDATION_TOL) * T::one().max(m.frobenius_norm()) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }

    let n = m.rows();
    // symmetrize to kill the tolerated defect
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5));
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = T::one().max(a.frobenius_norm());
    let tol = T::lit(T::JACOBI_TOL) * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a) < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_mass<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `D R`, where `D` rephases column
/// `q` so the pivot is real and `R` is the classical real Jacobi rotation.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let g = apq.norm();
    if g <= T::min_positive_value() {
        return;
    }
    let phase = apq / g; // e^{iφ}
    let phase_conj = phase.conj();

    // A <- D† A D with D = diag(.., e^{-iφ} at q, ..)
    for k in 0..n {
        a[(k, q)] *= phase_conj;
    }
    for k in 0..n {
        a[(q, k)] *= phase;
    }
    for k in 0..n {
        v[(k, q)] *= phase_conj;
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
}
