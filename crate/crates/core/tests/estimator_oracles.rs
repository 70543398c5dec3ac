mod common;

use common::*;
use ssbloc::aoa::{
    covariance, esprit_aoa, estimate, music_spectrum, nontrivial_roots, root_music_aoa, root_music_polynomial,
    Algorithm, SteeringGrid,
};
use ssbloc::channel::estimate_snr_db;
use ssbloc::numerics::poly_roots;

fn noiseless_r(theta_deg: f64) -> ssbloc::ComplexMatrix64 {
    covariance(&source_snapshots(&mut rng(0), theta_deg.to_radians(), 4, 20, None))
}

#[test]
fn music_at_minus_45_agrees_with_dense_grid() {
    let r = noiseless_r(-45.0);
    let dense: Vec<f64> = (-60_000..=-30_000).map(|i| (i as f64 * 1e-3).to_radians()).collect();
    let spectrum = music_spectrum(&r, 1, &dense).unwrap();
    let oracle = spectrum.grid_rad[spectrum.argmax()];
    let ours = SteeringGrid::uniform(4).music(&r, 1).unwrap().angle_rad;
    assert!(angle_error_deg(oracle, (-45f64).to_radians()) < 0.002);
    assert!(angle_error_deg(ours, oracle) < 0.1);
}

#[test]
fn closed_form_estimators_are_exact_without_noise() {
    for theta in [-60.0, -30.0, 0.0, 30.0, 60.0] {
        let r = noiseless_r(theta);
        let esprit = esprit_aoa(&r, 1).unwrap().angle_rad;
        let root = root_music_aoa(&r, 1).unwrap().angle_rad;
        assert!(angle_error_deg(esprit, theta.to_radians()) < 1e-6, "esprit at {theta}");
        assert!(
            angle_error_deg(root, theta.to_radians()) < 1e-6,
            "root-music at {theta}"
        );
    }
}

#[test]
fn root_music_roots_are_closed_under_conjugate_reciprocal() {
    let mut g = rng(10);
    for theta in [-50.0, 5.0, 40.0] {
        let r = covariance(&source_snapshots(&mut g, f64::to_radians(theta), 4, 20, Some(10.0)));
        let roots = poly_roots(&root_music_polynomial(&r, 1).unwrap()).unwrap();
        for z in &roots {
            let mirror = 1.0 / z.conj();
            let nearest = roots.iter().map(|w| (w - mirror).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-6, "{z} has no partner");
        }
        assert!(!nontrivial_roots(&root_music_polynomial(&r, 1).unwrap())
            .unwrap()
            .is_empty());
    }
}

#[test]
fn music_rmse_at_20_db_is_below_one_degree() {
    let grid = SteeringGrid::uniform(4);
    let theta = 10f64.to_radians();
    let mut g = rng(11);
    let mut sq = 0.0;
    for _ in 0..1000 {
        let r = covariance(&source_snapshots(&mut g, theta, 4, 20, Some(20.0)));
        let est = estimate(Algorithm::Music, &r, &grid).unwrap().angle_rad;
        sq += (est - theta).to_degrees().powi(2);
    }
    let rmse = (sq / 1000.0).sqrt();
    assert!(rmse < 1.0, "{rmse}");
}

#[test]
fn snr_estimate_is_unbiased_within_a_decibel_at_20_db() {
    let mut g = rng(12);
    let mean = (0..1000)
        .map(|_| estimate_snr_db(&source_snapshots(&mut g, 0.3, 4, 20, Some(20.0))).unwrap())
        .sum::<f64>()
        / 1000.0;
    assert!((mean - 20.0).abs() < 1.0, "{mean}");
}

#[test]
fn pure_noise_snr_matches_brute_force_expectation() {
    let mut g = rng(13);
    let mut ours = 0.0;
    let mut oracle = 0.0;
    for _ in 0..1000 {
        let x = pure_noise(&mut g, 4, 20);
        ours += estimate_snr_db(&x).unwrap();
        let ev = oracle_eigenvalues(&covariance(&x));
        let mu = ev[1..].iter().sum::<f64>() / 3.0;
        oracle += 10.0 * ((ev[0] - mu) / (4.0 * mu)).max(1e-6).log10();
    }
    ours /= 1000.0;
    oracle /= 1000.0;
    assert!(ours <= 0.0, "{ours}");
    assert!((ours - oracle).abs() < 1.0, "{ours} vs {oracle}");
}
