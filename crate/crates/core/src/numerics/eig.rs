//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a
//! diagonal unitary, then applies the classical real Jacobi rotation to the
//! resulting real symmetric 2x2 block. Sweeps visit every `(p, q)` pair in
//! row order until the off-diagonal Frobenius mass falls below
//! `1e-14 * ‖A‖_F`.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending with matching unit-norm eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(i)
    }

    /// `V Λ Vᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).fold(Complex::zero(), |acc, k| {
                acc + v[(r, k)] * v[(c, k)].conj() * self.eigenvalues[k]
            })
        })
    }
}

fn off_diagonal_norm<T: Scalar>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Inputs with relative asymmetry above `1e-9` are rejected; callers holding
/// a nearly Hermitian matrix should pass `a.symmetrized()`.
pub fn hermitian_eig<T: Scalar>(a: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermitian_defect();
    if defect >= T::tol(1e-9) || !defect.is_finite() {
        return Err(Error::NotHermitian {
            asymmetry: defect.to_f64_lossy(),
        });
    }

    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = ComplexMatrix::<T>::identity(n);
    let threshold = T::tol(1e-14) * a.frobenius_norm();

    let mut converged = off_diagonal_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their Jacobi order
    order.sort_by(|&i, &j| {
        m[(j, j)]
            .re
            .partial_cmp(&m[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let mut out = EigenDecomposition {
        eigenvalues,
        eigenvectors,
    };
    normalize_columns(&mut out.eigenvectors);
    Ok(out)
}

fn normalize_columns<T: Scalar>(v: &mut ComplexMatrix<T>) {
    let n = v.rows();
    for c in 0..v.cols() {
        let norm = (0..n)
            .map(|r| v[(r, c)].norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if norm > T::zero() {
            for r in 0..n {
                v[(r, c)] = v[(r, c)] / norm;
            }
        }
    }
}

/// Zeroes `m[p][q]` with `m ← Uᴴ m U`, `v ← v U`.
fn rotate<T: Scalar>(m: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag.is_zero() {
        return;
    }
    let n = m.rows();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;

    let phase = apq / mag; // e^{iφ}
    let tau = (aqq - app) / (T::lit(2.0) * mag);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // U = D·G with D = diag(1, e^{-iφ}), G = [[c, s], [-s, c]]
    let upp = Complex::new(c, T::zero());
    let upq = Complex::new(s, T::zero());
    let uqp = -phase.conj() * s;
    let uqq = phase.conj() * c;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * upp + akq * uqp;
        m[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        m[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    m[(p, q)] = Complex::zero();
    m[(q, p)] = Complex::zero();
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}
