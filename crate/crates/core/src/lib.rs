//! Numerical toolkit for device-independent conference key agreement:
//! density matrices and entropies, multi-party behaviors and the parity-CHSH
//! game, classical secrecy monotones with channel minimization, the
//! convex-combination attack, and bound curves.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below pin it to `f64`. The attack and bound modules are `f64` only.

pub mod attacks;
pub mod behaviors;
pub mod bounds;
pub mod checks;
mod error;
pub mod fixtures;
pub mod io;
pub mod partition;
pub mod qmat;
mod scalar;
pub mod secrecy;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = qmat::ComplexMatrix<f64>;
pub type Density = qmat::DensityMatrix<f64>;
pub type Measurement = qmat::Povm<f64>;
pub type Device = behaviors::Behavior<f64>;
pub type Game = behaviors::GameSpec<f64>;
pub type Joint = secrecy::JointDistribution<f64>;
pub type Channel = secrecy::ClassicalChannel<f64>;
pub type Noise = states::NoiseParameter<f64>;
