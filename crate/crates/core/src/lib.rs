//! Simulation and signal processing for SSB-based vehicle localization with
//! a uniform linear array: OFDM reception, subspace AoA estimation,
//! heading-corrected dead reckoning, PID-scheduled wake-ups and per-mode
//! energy accounting.
//!
//! The numeric kernels and estimators are generic over [`Scalar`] (`f32`
//! or `f64`); the aliases below fix the common double-precision types.

pub mod adaptive;
pub mod aoa;
pub mod channel;
pub mod energy;
pub mod error;
pub mod kinematics;
pub mod numerics;
pub mod random;
pub mod scalar;
pub mod sim;
pub mod waveform;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
pub type ComplexMatrix64 = numerics::ComplexMatrix<f64>;
pub type ComplexMatrix32 = numerics::ComplexMatrix<f32>;
pub type EigenDecomposition64 = numerics::EigenDecomposition<f64>;
pub type SnapshotMatrix64 = channel::SnapshotMatrix<f64>;
pub type SnapshotMatrix32 = channel::SnapshotMatrix<f32>;
pub type BasebandFrame64 = waveform::BasebandFrame<f64>;
pub type Pseudospectrum64 = aoa::Pseudospectrum<f64>;
pub type AoaEstimate64 = aoa::AoaEstimate<f64>;
pub type SteeringGrid64 = aoa::SteeringGrid<f64>;
