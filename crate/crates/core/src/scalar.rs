//! Scalar abstraction shared by the numerical modules.
//!
//! Every tolerance used for validation lives on the scalar type so that `f32`
//! instantiations get thresholds they can actually meet.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Hermiticity, trace and POVM-completeness tolerance.
    const VALIDATION_TOL: f64;
    /// Smallest eigenvalue accepted for a density matrix.
    const PSD_TOL: f64;
    /// Relative off-diagonal Frobenius mass at which Jacobi sweeps stop.
    const JACOBI_TOL: f64;
    /// Eigenvalues below this are treated as zero in entropies.
    const EIGEN_CLAMP: f64;
    /// Probabilities below this are skipped in Shannon sums.
    const PROB_FLOOR: f64;
    /// Window in which slightly negative or >1 probabilities are clamped.
    const PROB_CLAMP: f64;
    /// Normalization tolerance for classical distributions.
    const NORM_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }

    /// `-x log2 x` with the `0 log 0 = 0` convention.
    #[inline]
    fn plogp(self) -> Self {
        if self <= Self::lit(Self::PROB_FLOOR) {
            Self::zero()
        } else {
            -self * self.log2()
        }
    }
}

impl Real for f64 {
    const VALIDATION_TOL: f64 = 1e-10;
    const PSD_TOL: f64 = 1e-9;
    const JACOBI_TOL: f64 = 1e-12;
    const EIGEN_CLAMP: f64 = 1e-12;
    const PROB_FLOOR: f64 = 1e-15;
    const PROB_CLAMP: f64 = 1e-12;
    const NORM_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const VALIDATION_TOL: f64 = 1e-5;
    const PSD_TOL: f64 = 1e-4;
    const JACOBI_TOL: f64 = 1e-6;
    const EIGEN_CLAMP: f64 = 1e-6;
    const PROB_FLOOR: f64 = 1e-9;
    const PROB_CLAMP: f64 = 1e-5;
    const NORM_TOL: f64 = 1e-4;
}
