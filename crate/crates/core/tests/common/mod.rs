#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use ssbloc::adaptive::PidGains;
use ssbloc::channel::{steering_vector, SnapshotMatrix};
use ssbloc::numerics::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Circular complex Gaussian with `E|z|² = power`.
pub fn cn(rng: &mut impl Rng, power: f64) -> Complex64 {
    let s = (power / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(rows, cols, |_, _| cn(rng, 1.0))
}

pub fn random_psd(rng: &mut impl Rng, n: usize) -> ComplexMatrix<f64> {
    let b = random_matrix(rng, n, n);
    b.matmul(&b.conj_transpose()).unwrap().symmetrized()
}

pub fn direct_dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = x.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let acc: Complex64 = x
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let phase = sign * 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, phase)
                })
                .sum();
            if inverse {
                acc / n as f64
            } else {
                acc
            }
        })
        .collect()
}

/// Unit-power QPSK source at `theta` with per-antenna noise at `snr_db`.
/// `snr_db = None` leaves the snapshots noiseless.
pub fn source_snapshots(
    rng: &mut impl Rng,
    theta_rad: f64,
    antennas: usize,
    snapshots: usize,
    snr_db: Option<f64>,
) -> SnapshotMatrix<f64> {
    let a = steering_vector(theta_rad, antennas);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let noise = snr_db.map(|s| 10f64.powf(-s / 10.0));
    let cols: Vec<Complex64> = (0..snapshots)
        .map(|_| {
            Complex64::new(
                if rng.random::<bool>() { h } else { -h },
                if rng.random::<bool>() { h } else { -h },
            )
        })
        .collect();
    let entries = ComplexMatrix::from_fn(antennas, snapshots, |m, n| {
        let clean = a[m] * cols[n];
        match noise {
            Some(p) => clean + cn(rng, p),
            None => clean,
        }
    });
    SnapshotMatrix::new(entries).unwrap()
}

pub fn pure_noise(rng: &mut impl Rng, antennas: usize, snapshots: usize) -> SnapshotMatrix<f64> {
    SnapshotMatrix::new(random_matrix(rng, antennas, snapshots)).unwrap()
}

pub fn to_nalgebra(a: &ComplexMatrix<f64>) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)])
}

/// Eigenvalues in descending order from an independent solver.
pub fn oracle_eigenvalues(a: &ComplexMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = to_nalgebra(a).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

pub fn angle_error_deg(a: f64, b: f64) -> f64 {
    (a - b).to_degrees().abs()
}

/// Literal transcription of the wake-up pseudocode, optionally with
/// conditional integration.
pub struct Reference {
    kp: f64,
    ki: f64,
    kd: f64,
    w_snr: f64,
    w_vel: f64,
    t_base: f64,
    t_max: f64,
    eps_prev: f64,
    pub integral: f64,
    conditional: bool,
}

impl Reference {
    pub fn new(g: &PidGains, t_base: f64, t_max: f64, conditional: bool) -> Self {
        Self {
            kp: g.kp,
            ki: g.ki,
            kd: g.kd,
            w_snr: g.w_snr,
            w_vel: g.w_vel,
            t_base,
            t_max,
            eps_prev: 0.0,
            integral: 0.0,
            conditional,
        }
    }

    pub fn step(&mut self, eps_snr: f64, eps_vel: f64, dt: f64) -> f64 {
        let eps = self.w_snr * eps_snr + self.w_vel * eps_vel;
        let previous_integral = self.integral;
        self.integral = self.integral + eps * dt;
        let deps = (eps - self.eps_prev) / dt;
        let mut u = self.kp * eps + self.ki * self.integral + self.kd * deps;
        if self.conditional {
            let wt = self.t_base + u;
            if (wt > self.t_max && eps > 0.0) || (wt < self.t_base && eps < 0.0) {
                self.integral = previous_integral;
                u = self.kp * eps + self.ki * self.integral + self.kd * deps;
            }
        }
        self.eps_prev = eps;
        let mut wt = self.t_base + u;
        wt = f64::min(f64::max(wt, self.t_base), self.t_max);
        wt
    }
}
