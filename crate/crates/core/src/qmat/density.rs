use num_complex::Complex;
use num_traits::{One, Zero};

use super::eigen::{eig_hermitian, HermitianEigen};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unit-trace positive semidefinite matrix over a labelled tensor factorization.
///
/// Subsystem `0` is the most significant factor of the row index. Validation
/// happens once, at construction; operations that provably preserve validity
/// (tensor, partial trace, convex mixing of valid states) skip it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    dims: Vec<usize>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Result<Self> {
        check_dims(&dims, &matrix)?;
        let tol = T::lit(T::VALIDATION_TOL);
        let defect = matrix.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eig = eig_hermitian(&matrix)?;
        let min = *eig.values.last().expect("nonempty");
        if min < -T::lit(T::PSD_TOL) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { dims, matrix })
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, matrix: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.rows());
        Self { dims, matrix }
    }

    /// Pure state `|ψ><ψ|`; the amplitudes are normalized here.
    pub fn from_pure(dims: Vec<usize>, amplitudes: &[Complex<T>]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let psi: Vec<_> = amplitudes.iter().map(|z| z / norm).collect();
        let matrix = ComplexMatrix::outer(&psi);
        check_dims(&dims, &matrix)?;
        Ok(Self { dims, matrix })
    }

    pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::IndexOutOfRange { index, count: d });
        }
        let mut amp = vec![Complex::zero(); d];
        amp[index] = Complex::one();
        Self::from_pure(dims, &amp)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        let matrix = ComplexMatrix::identity(d).scale(T::one() / T::lit(d as f64));
        check_dims(&dims, &matrix)?;
        Ok(Self { dims, matrix })
    }

    /// Weighted sum of states on identical factorizations; weights must be a
    /// probability vector.
    pub fn mixture(terms: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?.1;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        let mut total = T::zero();
        for (w, rho) in terms {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", rho.dims, first.dims)));
            }
            if *w < T::zero() {
                return Err(Error::InvalidState(format!("negative mixture weight {w}")));
            }
            total += *w;
            acc = acc.add(&rho.matrix.scale(*w))?;
        }
        if (total - T::one()).abs() > T::lit(T::VALIDATION_TOL) {
            return Err(Error::InvalidState(format!("mixture weights sum to {total}")));
        }
        Ok(Self { dims: first.dims.clone(), matrix: acc })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        eig_hermitian(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn purity(&self) -> T {
        self.matrix.trace_product(&self.matrix).expect("square").re
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, matrix: self.matrix.kron(&other.matrix) }
    }

    /// Reduced state on the `keep` factors, in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidPartition("must keep at least one subsystem".into()));
        }
        let mut kept = vec![false; n];
        for &k in keep {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, count: n });
            }
            if kept[k] {
                return Err(Error::InvalidPartition(format!("subsystem {k} listed twice")));
            }
            kept[k] = true;
        }
        let out_dims: Vec<usize> = (0..n).filter(|&i| kept[i]).map(|i| self.dims[i]).collect();
        let out_dim: usize = out_dims.iter().product();

        // split every full index into (kept index, traced index)
        let total = self.dim();
        let mut split = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut digits = vec![0usize; n];
            for i in (0..n).rev() {
                digits[i] = rem % self.dims[i];
                rem /= self.dims[i];
            }
            let (mut k, mut t) = (0usize, 0usize);
            for i in 0..n {
                if kept[i] {
                    k = k * self.dims[i] + digits[i];
                } else {
                    t = t * self.dims[i] + digits[i];
                }
            }
            split.push((k, t));
        }

        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for r in 0..total {
            let (kr, tr) = split[r];
            for c in 0..total {
                let (kc, tc) = split[c];
                if tr == tc {
                    out[(kr, kc)] += self.matrix[(r, c)];
                }
            }
        }
        Ok(Self { dims: out_dims, matrix: out })
    }

    /// Pure state on `dims ++ [rank]` whose marginal on the original factors is
    /// `self`. The environment is the eigenbasis label of `self`.
    pub fn purify(&self) -> Self {
        let eig = self.eigen();
        let clamp = T::lit(T::EIGEN_CLAMP);
        let support: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > clamp).collect();
        let rank = support.len().max(1);
        let d = self.dim();
        let mut psi = vec![Complex::zero(); d * rank];
        for (slot, &k) in support.iter().enumerate() {
            let amp = eig.values[k].sqrt();
            for i in 0..d {
                psi[i * rank + slot] = eig.vectors[(i, k)] * amp;
            }
        }
        let mut dims = self.dims.clone();
        dims.push(rank);
        Self::from_pure(dims, &psi).expect("purification has unit norm after rescaling")
    }
}

fn check_dims<T: Real>(dims: &[usize], matrix: &ComplexMatrix<T>) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid subsystem dimensions {dims:?}")));
    }
    let d: usize = dims.iter().product();
    if !matrix.is_square() || matrix.rows() != d {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} need a {d}x{d} matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    Ok(())
}

/// Positive operator-valued measure on a single subsystem.
#[derive(Debug, Clone)]
pub struct Povm<T: Real = f64> {
    dim: usize,
    effects: Vec<ComplexMatrix<T>>,
}

impl<T: Real> Povm<T> {
    pub fn new(dim: usize, effects: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::InvalidMeasurement("no effects".into()));
        }
        let tol = T::lit(T::VALIDATION_TOL);
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (k, e) in effects.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch(format!("effect {k} is not {dim}x{dim}")));
            }
            if e.hermitian_defect() > tol {
                return Err(Error::InvalidMeasurement(format!("effect {k} is not Hermitian")));
            }
            let min = *eig_hermitian(e)?.values.last().expect("nonempty");
            if min < -tol {
                return Err(Error::InvalidMeasurement(format!("effect {k} has eigenvalue {min:e}")));
            }
            sum = sum.add(e)?;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > tol {
            return Err(Error::InvalidMeasurement("effects do not sum to identity".into()));
        }
        Ok(Self { dim, effects })
    }

    /// Two-outcome projective measurement of a ±1-valued observable `O`:
    /// outcome 0 is `(I + O)/2`, outcome 1 is `(I - O)/2`.
    pub fn from_observable(observable: &ComplexMatrix<T>) -> Result<Self> {
        let n = observable.rows();
        let id = ComplexMatrix::identity(n);
        let half = T::lit(0.5);
        Self::new(n, vec![id.add(observable)?.scale(half), id.sub(observable)?.scale(half)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[ComplexMatrix<T>] {
        &self.effects
    }
}

/// Pauli matrices and real-plane qubit observables.
pub mod pauli {
    use super::*;

    pub fn x<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
    }

    pub fn z<T: Real>() -> ComplexMatrix<T> {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
    }

    pub fn y<T: Real>() -> ComplexMatrix<T> {
        let i = Complex::new(T::zero(), T::one());
        ComplexMatrix::new(2, 2, vec![Complex::zero(), -i, i, Complex::zero()]).expect("2x2")
    }

    /// `cos θ σ_z + sin θ σ_x`.
    pub fn xz_plane<T: Real>(theta: T) -> ComplexMatrix<T> {
        z::<T>().scale(theta.cos()).add(&x::<T>().scale(theta.sin())).expect("2x2")
    }
}
