use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_ITERATIONS: usize = 500;

/// Evaluates `Σ coeffs[i] zⁱ` by Horner's rule. Coefficients are in
/// ascending powers.
pub fn poly_eval<T: Scalar>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
}

/// All roots of `Σ coeffs[i] zⁱ` (ascending powers) by Durand–Kerner
/// iteration.
///
/// The polynomial is made monic, the initial guesses sit on a circle of
/// radius `1 + max|c_i|` (a Cauchy bound) at angles offset from the real axis,
/// and iteration stops once every update is below `1e-12` relative to the
/// root magnitude or after 500 sweeps. Exactly `degree` roots are returned.
pub fn poly_roots<T: Scalar>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if coeffs.len() < 2 {
        return Err(Error::Domain(format!(
            "polynomial degree must be at least 1, got {} coefficients",
            coeffs.len()
        )));
    }
    let lead = coeffs[coeffs.len() - 1];
    if lead.norm() <= T::lit(1e-12) {
        return Err(Error::DegeneratePolynomial);
    }
    let degree = coeffs.len() - 1;
    let monic: Vec<Complex<T>> = coeffs.iter().map(|&c| c / lead).collect();

    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    let radius = T::one() + monic[..degree].iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let offset = T::lit(0.4);
    let step = T::TAU() / T::from_usize(degree).unwrap();
    let mut roots: Vec<Complex<T>> = (0..degree)
        .map(|k| Complex::from_polar(radius, offset + step * T::from_usize(k).unwrap()))
        .collect();

    let tol = T::tol(1e-12);
    for _ in 0..MAX_ITERATIONS {
        let mut worst = T::zero();
        for i in 0..degree {
            let zi = roots[i];
            let num = poly_eval(&monic, zi);
            let den = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex::<T>::one(), |acc, (_, &zj)| acc * (zi - zj));
            if den.is_zero() {
                // coincident estimates: nudge apart and keep iterating
                roots[i] = zi + Complex::new(tol, tol);
                worst = T::infinity();
                continue;
            }
            let delta = num / den;
            roots[i] = zi - delta;
            let rel = delta.norm() / roots[i].norm().max(T::one());
            worst = worst.max(rel);
        }
        if worst < tol {
            break;
        }
    }
    Ok(roots)
}

/// Expands `lead · Π (z − r_i)` into ascending-power coefficients.
pub fn poly_from_roots<T: Scalar>(roots: &[Complex<T>], lead: Complex<T>) -> Vec<Complex<T>> {
    let mut coeffs = vec![lead];
    for &r in roots {
        let mut next = vec![Complex::zero(); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}
