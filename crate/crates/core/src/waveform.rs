//! CP-OFDM baseband frames shaped like an SSB burst.
//!
//! Subcarrier content is seeded QPSK. The localization chain only uses the
//! spatial signature of the waveform, so standards-compliant PSS/SSS/PBCH
//! content is not generated.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ifft;
use crate::random::{stream, STREAM_FRAME};
use crate::scalar::Scalar;

pub const DEFAULT_SYMBOL_COUNT: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OfdmConfig {
    pub fft_size: usize,
    pub active_subcarriers: usize,
    pub scs_hz: f64,
    pub cp_duration_s: f64,
    pub prb_count: usize,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            fft_size: 256,
            active_subcarriers: 240,
            scs_hz: 15_000.0,
            cp_duration_s: 4.6e-6,
            prb_count: 20,
        }
    }
}

impl OfdmConfig {
    /// `prb_count × 12 × scs`; 3.6 MHz for the defaults.
    pub fn passband_hz(&self) -> f64 {
        self.prb_count as f64 * 12.0 * self.scs_hz
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.fft_size as f64 * self.scs_hz
    }

    /// Nearest-integer CP length in samples (18 at 3.84 Msps).
    pub fn cp_samples(&self) -> usize {
        (self.cp_duration_s * self.sample_rate_hz()).round() as usize
    }

    pub fn symbol_len(&self) -> usize {
        self.fft_size + self.cp_samples()
    }

    pub fn validate(&self) -> Result<()> {
        if self.fft_size == 0 || !self.fft_size.is_power_of_two() {
            return Err(Error::Config(format!(
                "fft_size {} must be a power of two",
                self.fft_size
            )));
        }
        // DC is never loaded, so at most fft_size - 1 bins can be active
        if self.active_subcarriers >= self.fft_size {
            return Err(Error::Config(format!(
                "active_subcarriers {} does not fit fft_size {} with DC excluded",
                self.active_subcarriers, self.fft_size
            )));
        }
        if !(self.scs_hz > 0.0) || !(self.cp_duration_s > 0.0) {
            return Err(Error::Config("scs_hz and cp_duration_s must be positive".into()));
        }
        if self.cp_samples() < 1 {
            return Err(Error::Config("cyclic prefix rounds to zero samples".into()));
        }
        Ok(())
    }

    /// FFT bins carrying data: the lower half of the active set sits just
    /// below DC (wrapping to the top of the FFT), the upper half just above.
    pub fn active_bins(&self) -> Vec<usize> {
        let below = self.active_subcarriers / 2;
        let above = self.active_subcarriers - below;
        let mut bins: Vec<usize> = (1..=above).collect();
        bins.extend((self.fft_size - below)..self.fft_size);
        bins
    }

    pub fn guard_bins(&self) -> Vec<usize> {
        let active = self.active_bins();
        (0..self.fft_size).filter(|b| !active.contains(b)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasebandFrame<T> {
    pub samples: Vec<Complex<T>>,
    pub symbol_count: usize,
    pub sample_rate_hz: f64,
    /// False when the frame carried no energy and power normalization was
    /// skipped.
    pub normalized: bool,
}

impl<T: Scalar> BasebandFrame<T> {
    pub fn mean_power(&self) -> T {
        if self.samples.is_empty() {
            return T::zero();
        }
        let total = self.samples.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b);
        total / T::from_usize(self.samples.len()).unwrap()
    }

    /// Indices of `count` samples spread evenly over the frame.
    pub fn even_indices(&self, count: usize) -> Vec<usize> {
        let len = self.samples.len();
        (0..count).map(|n| n * len / count.max(1)).collect()
    }
}

/// One CP-OFDM frame of `symbol_count` symbols, normalized to unit mean
/// power. Deterministic in `seed`.
pub fn generate_frame<T: Scalar>(cfg: &OfdmConfig, seed: u64, symbol_count: usize) -> Result<BasebandFrame<T>> {
    cfg.validate()?;
    if symbol_count == 0 {
        return Err(Error::Config("symbol_count must be at least 1".into()));
    }
    let mut rng = stream(seed, STREAM_FRAME, 0);
    let n = cfg.fft_size;
    let cp = cfg.cp_samples();
    let bins = cfg.active_bins();
    let amp = T::FRAC_1_SQRT_2();

    let mut samples = Vec::with_capacity(symbol_count * (n + cp));
    for _ in 0..symbol_count {
        let mut grid = vec![Complex::<T>::zero(); n];
        for &b in &bins {
            let re = if rng.random::<bool>() { amp } else { -amp };
            let im = if rng.random::<bool>() { amp } else { -amp };
            grid[b] = Complex::new(re, im);
        }
        let body = ifft(&grid)?;
        samples.extend_from_slice(&body[n - cp..]);
        samples.extend_from_slice(&body);
    }

    let mut frame = BasebandFrame {
        samples,
        symbol_count,
        sample_rate_hz: cfg.sample_rate_hz(),
        normalized: false,
    };
    let power = frame.mean_power();
    if power > T::zero() {
        let k = T::one() / power.sqrt();
        for z in &mut frame.samples {
            *z = *z * k;
        }
        frame.normalized = true;
    } else {
        log::warn!("frame carries no active subcarriers; power normalization skipped");
    }
    Ok(frame)
}

/// True iff every symbol's prefix is an exact copy of its body's tail.
pub fn cp_check<T: Scalar>(frame: &BasebandFrame<T>, cfg: &OfdmConfig) -> Result<bool> {
    let body = cfg.fft_size;
    let cp = cfg.cp_samples();
    if body == 0 {
        return Err(Error::Shape("zero-length symbol body".into()));
    }
    if cp > body {
        return Err(Error::Shape(format!("cyclic prefix {cp} longer than body {body}")));
    }
    let sym = body + cp;
    if frame.samples.len() != frame.symbol_count * sym {
        return Err(Error::Shape(format!(
            "frame has {} samples, expected {} symbols of {sym}",
            frame.samples.len(),
            frame.symbol_count
        )));
    }
    Ok(frame.samples.chunks_exact(sym).all(|s| s[..cp] == s[sym - cp..]))
}
