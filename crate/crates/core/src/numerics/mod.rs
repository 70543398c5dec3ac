//! Complex numeric kernels: Hermitian eigendecomposition, polynomial roots
//! and radix-2 FFT.

mod eig;
mod fft;
mod matrix;
mod poly;

pub use eig::{hermitian_eig, EigenDecomposition, MAX_SWEEPS};
pub use fft::{fft, ifft, transform_in_place};
pub use matrix::{inner, norm_sqr, ComplexMatrix};
pub use poly::{poly_eval, poly_from_roots, poly_roots, MAX_ITERATIONS};
