//! Small dense complex linear algebra and quantum entropic quantities.

mod density;
mod eigen;
mod entropy;
mod matrix;

pub use density::{pauli, DensityMatrix, Povm};
pub use eigen::{eig_hermitian, HermitianEigen};
pub use entropy::{
    conditional_mutual_information, quantum_cmi, relative_entropy, subsystem_entropy, von_neumann_entropy,
};
pub use matrix::ComplexMatrix;

/// Kronecker product of two states; subsystem labels are concatenated.
pub fn tensor<T: crate::Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> DensityMatrix<T> {
    a.tensor(b)
}

/// Reduced state on `keep`, original factor order preserved.
pub fn partial_trace<T: crate::Real>(rho: &DensityMatrix<T>, keep: &[usize]) -> crate::Result<DensityMatrix<T>> {
    rho.partial_trace(keep)
}

pub fn purify<T: crate::Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    rho.purify()
}
