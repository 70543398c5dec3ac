//! Line-of-sight propagation from the radio head to a half-wavelength ULA:
//! Friis path loss, log-normal shadowing, Rician small-scale fading and
//! thermal AWGN.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::aoa::covariance;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, ComplexMatrix};
use crate::random::{stream, STREAM_CHANNEL};
use crate::scalar::Scalar;
use crate::waveform::BasebandFrame;

pub const SPEED_OF_LIGHT_MPS: f64 = 299_792_458.0;
pub const BOLTZMANN_J_PER_K: f64 = 1.38e-23;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelConfig {
    pub carrier_hz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub noise_figure_db: f64,
    pub noise_temp_k: f64,
    pub bandwidth_hz: f64,
    pub shadowing_sigma_db: f64,
    pub rician_k_db: f64,
    pub antennas: usize,
    pub snapshots: usize,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 3.5e9,
            tx_power_dbm: -25.0,
            tx_gain_dbi: 10.0,
            rx_gain_dbi: 5.0,
            noise_figure_db: 5.0,
            noise_temp_k: 290.0,
            bandwidth_hz: 3.6e6,
            shadowing_sigma_db: 3.0,
            rician_k_db: 10.0,
            antennas: 4,
            snapshots: 20,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0 && self.carrier_hz < 6e9) {
            return Err(Error::Config(format!(
                "carrier_hz {} must lie in (0, 6e9)",
                self.carrier_hz
            )));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::Config("bandwidth_hz must be positive".into()));
        }
        if !(self.noise_temp_k > 0.0) {
            return Err(Error::Config("noise_temp_k must be positive".into()));
        }
        if !(self.shadowing_sigma_db >= 0.0) {
            return Err(Error::Config("shadowing_sigma_db must be non-negative".into()));
        }
        let gains = [
            self.tx_power_dbm,
            self.tx_gain_dbi,
            self.rx_gain_dbi,
            self.noise_figure_db,
            self.rician_k_db,
        ];
        if gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::Config("gains must be finite".into()));
        }
        if self.antennas < 2 || self.snapshots < 1 {
            return Err(Error::Config(format!(
                "need at least 2 antennas and 1 snapshot, got {}x{}",
                self.antennas, self.snapshots
            )));
        }
        Ok(())
    }

    pub fn tx_power_w(&self) -> f64 {
        10f64.powf((self.tx_power_dbm - 30.0) / 10.0)
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_MPS / self.carrier_hz
    }
}

/// `exp(jπ m sin θ)` for `m = 0..antennas`.
pub fn steering_vector<T: Scalar>(angle_rad: T, antennas: usize) -> Vec<Complex<T>> {
    let phase = T::PI() * angle_rad.sin();
    (0..antennas)
        .map(|m| Complex::from_polar(T::one(), phase * T::from_usize(m).unwrap()))
        .collect()
}

/// Array samples: one row per antenna, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix<T> {
    pub entries: ComplexMatrix<T>,
}

impl<T: Scalar> SnapshotMatrix<T> {
    pub fn new(entries: ComplexMatrix<T>) -> Result<Self> {
        if !entries.is_finite() {
            return Err(Error::Domain("non-finite snapshot entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn antennas(&self) -> usize {
        self.entries.rows()
    }

    pub fn snapshots(&self) -> usize {
        self.entries.cols()
    }
}

/// Antenna gains minus free-space loss, in dB.
pub fn friis_gain_db(distance_m: f64, cfg: &ChannelConfig) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::Domain(format!("distance {distance_m} m must be positive")));
    }
    let path_loss = 20.0 * (4.0 * std::f64::consts::PI * distance_m * cfg.carrier_hz / SPEED_OF_LIGHT_MPS).log10();
    Ok(cfg.tx_gain_dbi + cfg.rx_gain_dbi - path_loss)
}

/// `k_B T₀ B · 10^(NF/10)` in watts.
pub fn noise_power_w(cfg: &ChannelConfig) -> f64 {
    BOLTZMANN_J_PER_K * cfg.noise_temp_k * cfg.bandwidth_hz * 10f64.powf(cfg.noise_figure_db / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Which impairments [`propagate`] applies. Everything is on by default;
/// switching pieces off is meant for tests and calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Impairments {
    pub noise: bool,
    pub shadowing: bool,
    pub fading: bool,
}

impl Default for Impairments {
    fn default() -> Self {
        Self {
            noise: true,
            shadowing: true,
            fading: true,
        }
    }
}

impl Impairments {
    pub fn none() -> Self {
        Self {
            noise: false,
            shadowing: false,
            fading: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reception<T> {
    pub snapshots: SnapshotMatrix<T>,
    pub true_snr_db: f64,
}

/// Received snapshots for a source at `true_aoa_rad` and `distance_m`.
///
/// Column `n` is `h·g·√P·a(θ)·s_n + w_n`, with `s_n` drawn at evenly spaced
/// positions across the frame, one shadowing and one Rician draw per call,
/// and per-antenna noise of power [`noise_power_w`].
pub fn propagate<T: Scalar>(
    frame: &BasebandFrame<T>,
    true_aoa_rad: f64,
    distance_m: f64,
    cfg: &ChannelConfig,
    impairments: Impairments,
    seed: u64,
) -> Result<Reception<T>> {
    if !(true_aoa_rad.abs() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Ambiguity {
            angle_rad: true_aoa_rad,
        });
    }
    cfg.validate()?;
    if frame.samples.is_empty() {
        return Err(Error::Shape("empty frame".into()));
    }
    let mut rng = stream(seed, STREAM_CHANNEL, 0);

    let shadow_db = if impairments.shadowing && cfg.shadowing_sigma_db > 0.0 {
        Normal::new(0.0, cfg.shadowing_sigma_db)
            .map_err(|e| Error::Config(e.to_string()))?
            .sample(&mut rng)
    } else {
        0.0
    };
    let g = 10f64.powf((friis_gain_db(distance_m, cfg)? + shadow_db) / 20.0);

    let h = if impairments.fading {
        let k = 10f64.powf(cfg.rician_k_db / 10.0);
        let los = (k / (k + 1.0)).sqrt();
        let scatter = (1.0 / (2.0 * (k + 1.0))).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(los + scatter * re, scatter * im)
    } else {
        Complex::new(1.0, 0.0)
    };

    let noise_w = noise_power_w(cfg);
    let p_tx = cfg.tx_power_w();
    let gain = h * g * p_tx.sqrt();
    let true_snr_db = 10.0 * (gain.norm_sqr() / noise_w).log10();

    let m = cfg.antennas;
    let n = cfg.snapshots;
    let a = steering_vector(true_aoa_rad, m);
    let picks = frame.even_indices(n);
    let sigma = (noise_w / 2.0).sqrt();

    let mut entries = ComplexMatrix::<T>::zeros(m, n);
    for (col, &idx) in picks.iter().enumerate() {
        let s = frame.samples[idx];
        let s = Complex::new(s.re.to_f64_lossy(), s.im.to_f64_lossy());
        for row in 0..m {
            let mut z = gain * a[row] * s;
            if impairments.noise {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                z += Complex::new(sigma * re, sigma * im);
            }
            entries[(row, col)] = Complex::new(T::lit(z.re), T::lit(z.im));
        }
    }

    Ok(Reception {
        snapshots: SnapshotMatrix::new(entries)?,
        true_snr_db,
    })
}

/// Blind per-antenna SNR estimate from the sample covariance eigenvalues:
/// `(λ₁ − μ) / (M μ)` with `μ` the mean of the remaining eigenvalues,
/// floored at `1e-6` and returned in dB.
pub fn estimate_snr_db<T: Scalar>(x: &SnapshotMatrix<T>) -> Result<f64> {
    let r = covariance(x);
    let eig = hermitian_eig(&r)?;
    let m = eig.dim();
    if m < 2 {
        return Err(Error::Dimension("SNR estimate needs at least 2 antennas".into()));
    }
    let lambda1 = eig.eigenvalues[0].to_f64_lossy();
    let mu = eig.eigenvalues[1..].iter().map(|l| l.to_f64_lossy()).sum::<f64>() / (m - 1) as f64;
    // noise eigenvalues at rounding level mean there is no noise floor to measure
    if !(mu > 0.0) || mu <= lambda1.abs() * T::tol(1e-12).to_f64_lossy() {
        return Err(Error::DegenerateCovariance);
    }
    let snr = ((lambda1 - mu) / (m as f64 * mu)).max(1e-6);
    Ok(10.0 * snr.log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{generate_frame, OfdmConfig};

    fn frame() -> BasebandFrame<f64> {
        generate_frame(&OfdmConfig::default(), 11, 4).unwrap()
    }

    #[test]
    fn friis_reference_points() {
        let cfg = ChannelConfig::default();
        let g100 = friis_gain_db(100.0, &cfg).unwrap();
        assert!((g100 - (-68.32)).abs() < 0.01, "{g100}");
        let g200 = friis_gain_db(200.0, &cfg).unwrap();
        assert!((g100 - g200 - 6.02).abs() < 0.01);
        let unit = SPEED_OF_LIGHT_MPS / (4.0 * std::f64::consts::PI * cfg.carrier_hz);
        assert!((friis_gain_db(unit, &cfg).unwrap() - 15.0).abs() < 1e-9);
        assert!(matches!(friis_gain_db(0.0, &cfg), Err(Error::Domain(_))));
        assert!(matches!(friis_gain_db(-3.0, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn thermal_noise_floor() {
        let cfg = ChannelConfig::default();
        let n = noise_power_w(&cfg);
        assert!((n / 4.556e-14 - 1.0).abs() < 0.005, "{n}");
        assert!((watts_to_dbm(n) - (-103.41)).abs() < 0.01);
        let nf0 = ChannelConfig {
            noise_figure_db: 0.0,
            ..cfg.clone()
        };
        assert!((noise_power_w(&nf0) / 1.4408e-14 - 1.0).abs() < 0.005);
        assert!((watts_to_dbm(noise_power_w(&nf0)) - (-108.41)).abs() < 0.01);
        let wide = ChannelConfig {
            bandwidth_hz: 2.0 * cfg.bandwidth_hz,
            ..cfg.clone()
        };
        assert_eq!(noise_power_w(&wide), 2.0 * n);
    }

    #[test]
    fn steering_vector_unit_modulus() {
        for deg in [-80.0f64, -12.5, 0.0, 33.0, 89.0] {
            let a = steering_vector(deg.to_radians(), 4);
            assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
            let energy: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            assert!((energy - 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn broadside_rows_identical_without_impairments() {
        let rx = propagate(&frame(), 0.0, 120.0, &ChannelConfig::default(), Impairments::none(), 3).unwrap();
        let x = &rx.snapshots.entries;
        for r in 1..4 {
            assert_eq!(x.row(r), x.row(0));
        }
    }

    #[test]
    fn thirty_degrees_gives_quarter_turn_per_element() {
        let rx = propagate(
            &frame(),
            30f64.to_radians(),
            120.0,
            &ChannelConfig::default(),
            Impairments::none(),
            3,
        )
        .unwrap();
        let x = &rx.snapshots.entries;
        for c in 0..x.cols() {
            for r in 1..4 {
                let ratio = x[(r, c)] / x[(0, c)];
                let want = Complex::from_polar(1.0, 0.5 * std::f64::consts::PI * r as f64);
                assert!((ratio - want).norm() < 1e-12);
                assert!((x[(r, c)].norm() - x[(0, c)].norm()).abs() < 1e-12 * x[(0, c)].norm());
            }
        }
    }

    #[test]
    fn propagate_deterministic_and_checks_angle() {
        let cfg = ChannelConfig::default();
        let f = frame();
        let a = propagate(&f, 0.2, 90.0, &cfg, Impairments::default(), 77).unwrap();
        let b = propagate(&f, 0.2, 90.0, &cfg, Impairments::default(), 77).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            propagate(&f, std::f64::consts::FRAC_PI_2, 90.0, &cfg, Impairments::default(), 77),
            Err(Error::Ambiguity { .. })
        ));
        assert_eq!(a.snapshots.antennas(), 4);
        assert_eq!(a.snapshots.snapshots(), 20);
    }

    #[test]
    fn true_snr_without_fading_follows_link_budget() {
        let cfg = ChannelConfig::default();
        let rx = propagate(&frame(), 0.1, 100.0, &cfg, Impairments::none(), 0).unwrap();
        let want = cfg.tx_power_dbm + friis_gain_db(100.0, &cfg).unwrap() - watts_to_dbm(noise_power_w(&cfg));
        assert!((rx.true_snr_db - want).abs() < 1e-9);
    }

    #[test]
    fn noiseless_rank_one_is_degenerate_for_snr() {
        let rx = propagate(&frame(), 0.3, 100.0, &ChannelConfig::default(), Impairments::none(), 1).unwrap();
        assert_eq!(estimate_snr_db(&rx.snapshots), Err(Error::DegenerateCovariance));
    }

    #[test]
    fn config_validation() {
        let bad = ChannelConfig {
            carrier_hz: 28e9,
            ..ChannelConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let bad = ChannelConfig {
            bandwidth_hz: 0.0,
            ..ChannelConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
