mod common;

use common::*;
use num_complex::Complex64;
use rand::Rng;
use ssbloc::aoa::covariance;
use ssbloc::channel::steering_vector;
use ssbloc::numerics::{fft, hermitian_eig, ifft, poly_eval, poly_roots, ComplexMatrix};

#[test]
fn fft_matches_direct_dft_up_to_32() {
    let mut r = rng(1);
    for n in [1, 2, 4, 8, 16, 32] {
        let x: Vec<Complex64> = (0..n).map(|_| cn(&mut r, 1.0)).collect();
        let fast = fft(&x).unwrap();
        let slow = direct_dft(&x, false);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10, "n = {n}");
        }
        let back = ifft(&x).unwrap();
        for (a, b) in back.iter().zip(direct_dft(&x, true)) {
            assert!((a - b).norm() < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn fft_round_trip_and_parseval_at_256() {
    let mut r = rng(2);
    let x: Vec<Complex64> = (0..256).map(|_| cn(&mut r, 1.0)).collect();
    let spectrum = fft(&x).unwrap();
    let back = ifft(&spectrum).unwrap();
    let worst = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
    let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let freq: f64 = spectrum.iter().map(|v| v.norm_sqr()).sum::<f64>() / 256.0;
    assert!((time - freq).abs() < 1e-9);
}

#[test]
fn eigenvalues_agree_with_independent_solver() {
    let mut r = rng(3);
    for _ in 0..500 {
        let n = r.random_range(2..=6);
        let a = random_psd(&mut r, n);
        let ours = hermitian_eig(&a).unwrap();
        let oracle = oracle_eigenvalues(&a);
        for (x, y) in ours.eigenvalues.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()), "{x} vs {y}");
        }
    }
}

#[test]
fn eigenvectors_are_orthonormal_and_satisfy_definition() {
    let mut r = rng(4);
    for _ in 0..200 {
        let a = random_psd(&mut r, 4);
        let eig = hermitian_eig(&a).unwrap();
        let v = &eig.eigenvectors;
        let gram = v.conj_transpose().matmul(v).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        for i in 0..4 {
            let e = eig.eigenvector(i);
            let av = a.mul_vec(&e).unwrap();
            for (x, y) in av.iter().zip(&e) {
                assert!((x - y * eig.eigenvalues[i]).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn rank_one_steering_outer_product() {
    let a = steering_vector(30f64.to_radians(), 4);
    let eig = hermitian_eig(&ComplexMatrix::outer(&a, &a)).unwrap();
    let expected = [4.0, 0.0, 0.0, 0.0];
    for (x, y) in eig.eigenvalues.iter().zip(expected) {
        assert!((x - y).abs() < 1e-10);
    }
}

/// Coefficients of `Π (z − r_i)` in ascending powers, expanded directly.
fn expand(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &root in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= ci * root;
        }
        c = next;
    }
    c
}

#[test]
fn random_degree_six_roots_have_small_residual() {
    let mut r = rng(5);
    for _ in 0..500 {
        let coeffs: Vec<Complex64> = (0..7).map(|_| cn(&mut r, 1.0)).collect();
        let lead = coeffs[6];
        let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
        let roots = poly_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 6);
        for z in roots {
            assert!(poly_eval(&monic, z).norm() < 1e-6, "residual at {z}");
        }
    }
}

#[test]
fn known_roots_are_recovered_from_expansion() {
    let mut r = rng(6);
    for _ in 0..200 {
        let truth: Vec<Complex64> = (0..5)
            .map(|_| Complex64::from_polar(r.random_range(0.3..2.0), r.random_range(-3.1..3.1)))
            .collect();
        let found = poly_roots(&expand(&truth)).unwrap();
        for t in &truth {
            let nearest = found.iter().map(|z| (z - t).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6, "{t} missing");
        }
    }
}

#[test]
fn covariance_matches_direct_sum() {
    let mut r = rng(7);
    for _ in 0..50 {
        let x = pure_noise(&mut r, 4, 20);
        let cov = covariance(&x);
        let e = &x.entries;
        let mut direct = ComplexMatrix::<f64>::zeros(4, 4);
        for n in 0..20 {
            let col = e.column(n);
            direct = direct.add(&ComplexMatrix::outer(&col, &col)).unwrap();
        }
        let direct = direct.scale(1.0 / 20.0);
        assert!(cov.max_abs_diff(&direct) < 1e-12);
    }
}
