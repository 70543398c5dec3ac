//! Subspace direction-of-arrival estimators over the sample covariance:
//! MUSIC (grid search with parabolic peak refinement), ESPRIT and
//! Root-MUSIC.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::channel::{steering_vector, SnapshotMatrix};
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, inner, norm_sqr, poly_roots, ComplexMatrix, EigenDecomposition};
use crate::scalar::Scalar;

/// Floor on the MUSIC denominator `aᴴ E_N E_Nᴴ a`.
pub const SPECTRUM_FLOOR: f64 = 1e-12;
/// Estimates whose peak-to-median ratio (MUSIC) or dominant-to-noise
/// eigenvalue ratio (ESPRIT, Root-MUSIC) is below this are flagged.
pub const CONFIDENCE_RATIO: f64 = 3.0;
pub const GRID_STEP_DEG: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Music,
    Esprit,
    RootMusic,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Music, Algorithm::Esprit, Algorithm::RootMusic];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Music => "music",
            Algorithm::Esprit => "esprit",
            Algorithm::RootMusic => "root_music",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            Error::Lookup(format!(
                "unknown algorithm `{s}`, expected one of music, esprit, root_music"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Ok,
    LowConfidence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoaEstimate<T> {
    pub angle_rad: T,
    pub algorithm: Algorithm,
    pub condition: Confidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pseudospectrum<T> {
    pub grid_rad: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> Pseudospectrum<T> {
    /// Index of the largest value; ties go to the smaller `|angle|`.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for i in 1..self.values.len() {
            let (v, b) = (self.values[i], self.values[best]);
            if v > b || (v == b && self.grid_rad[i].abs() < self.grid_rad[best].abs()) {
                best = i;
            }
        }
        best
    }

    pub fn median(&self) -> T {
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        let n = sorted.len();
        if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) * T::lit(0.5)
        }
    }

    pub fn peak_to_median(&self) -> T {
        self.values[self.argmax()] / self.median()
    }
}

/// `R = X Xᴴ / N`, symmetrized. Fewer snapshots than antennas yields a
/// rank-deficient estimate; that is logged, not rejected.
pub fn covariance<T: Scalar>(x: &SnapshotMatrix<T>) -> ComplexMatrix<T> {
    let m = x.antennas();
    let n = x.snapshots();
    if n < m {
        log::warn!("{n} snapshots for {m} antennas: covariance is rank deficient");
    }
    let xs = &x.entries;
    let inv_n = if n == 0 {
        T::zero()
    } else {
        T::one() / T::from_usize(n).unwrap()
    };
    let r = ComplexMatrix::from_fn(m, m, |i, j| {
        if j < i {
            return Complex::zero();
        }
        inner(xs.row(j), xs.row(i)) * inv_n
    });
    // fill the lower triangle from the upper one
    ComplexMatrix::from_fn(m, m, |i, j| if j >= i { r[(i, j)] } else { r[(j, i)].conj() }).symmetrized()
}

/// MUSIC search grid with its steering vectors precomputed.
#[derive(Debug, Clone)]
pub struct SteeringGrid<T> {
    angles: Vec<T>,
    vectors: Vec<Vec<Complex<T>>>,
    antennas: usize,
}

impl<T: Scalar> SteeringGrid<T> {
    pub fn new(angles: Vec<T>, antennas: usize) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Usage("empty angle grid".into()));
        }
        let half_pi = T::FRAC_PI_2();
        if angles.iter().any(|a| !(a.abs() < half_pi)) {
            return Err(Error::Usage(
                "grid angles must lie strictly inside (-pi/2, pi/2)".into(),
            ));
        }
        if angles.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("grid must be strictly increasing".into()));
        }
        let vectors = angles.iter().map(|&a| steering_vector(a, antennas)).collect();
        Ok(Self {
            angles,
            vectors,
            antennas,
        })
    }

    /// `(-90°, 90°)` exclusive at 0.1° spacing: 1799 points.
    pub fn uniform(antennas: usize) -> Self {
        let points = (180.0 / GRID_STEP_DEG).round() as usize - 1;
        let angles = (1..=points)
            .map(|k| T::lit((-90.0 + k as f64 * GRID_STEP_DEG).to_radians()))
            .collect();
        Self::new(angles, antennas).expect("uniform grid is valid")
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// MUSIC pseudospectrum `1 / max(aᴴ E_N E_Nᴴ a, ε)`.
    pub fn spectrum(&self, r: &ComplexMatrix<T>, sources: usize) -> Result<Pseudospectrum<T>> {
        let eig = decompose(r)?;
        self.spectrum_from(&eig, sources)
    }

    fn spectrum_from(&self, eig: &EigenDecomposition<T>, sources: usize) -> Result<Pseudospectrum<T>> {
        let m = eig.dim();
        if m != self.antennas {
            return Err(Error::Dimension(format!(
                "covariance is {m}x{m} but grid was built for {} antennas",
                self.antennas
            )));
        }
        check_sources(sources, m)?;
        let noise: Vec<Vec<Complex<T>>> = (sources..m).map(|i| eig.eigenvector(i)).collect();
        let floor = T::lit(SPECTRUM_FLOOR);
        let values = self
            .vectors
            .iter()
            .map(|a| {
                let d = noise
                    .iter()
                    .map(|e| inner(e, a).norm_sqr())
                    .fold(T::zero(), |x, y| x + y);
                T::one() / d.max(floor)
            })
            .collect();
        Ok(Pseudospectrum {
            grid_rad: self.angles.clone(),
            values,
        })
    }

    pub fn music(&self, r: &ComplexMatrix<T>, sources: usize) -> Result<AoaEstimate<T>> {
        let spectrum = self.spectrum(r, sources)?;
        Ok(refine_peak(&spectrum))
    }
}

fn check_sources(sources: usize, antennas: usize) -> Result<()> {
    if sources == 0 || sources >= antennas {
        return Err(Error::Subspace { sources, antennas });
    }
    Ok(())
}

fn decompose<T: Scalar>(r: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    hermitian_eig(&r.symmetrized())
}

/// Grid argmax plus one parabolic step fitted to the spectrum denominator,
/// which is locally quadratic around a true direction.
fn refine_peak<T: Scalar>(spectrum: &Pseudospectrum<T>) -> AoaEstimate<T> {
    let i = spectrum.argmax();
    let grid = &spectrum.grid_rad;
    let mut angle = grid[i];
    if i > 0 && i + 1 < grid.len() {
        let (dm, d0, dp) = (
            T::one() / spectrum.values[i - 1],
            T::one() / spectrum.values[i],
            T::one() / spectrum.values[i + 1],
        );
        let curvature = dm - T::lit(2.0) * d0 + dp;
        if curvature > T::zero() {
            let half = T::lit(0.5);
            let offset = (half * (dm - dp) / curvature).max(-half).min(half);
            let step = (grid[i + 1] - grid[i - 1]) * half;
            angle = angle + offset * step;
        }
    }
    let condition = if spectrum.peak_to_median() < T::lit(CONFIDENCE_RATIO) {
        Confidence::LowConfidence
    } else {
        Confidence::Ok
    };
    AoaEstimate {
        angle_rad: angle,
        algorithm: Algorithm::Music,
        condition,
    }
}

pub fn music_spectrum<T: Scalar>(r: &ComplexMatrix<T>, sources: usize, grid: &[T]) -> Result<Pseudospectrum<T>> {
    SteeringGrid::new(grid.to_vec(), r.rows())?.spectrum(r, sources)
}

pub fn music_aoa<T: Scalar>(r: &ComplexMatrix<T>, sources: usize, grid: &[T]) -> Result<AoaEstimate<T>> {
    SteeringGrid::new(grid.to_vec(), r.rows())?.music(r, sources)
}

fn eigen_confidence<T: Scalar>(eig: &EigenDecomposition<T>, sources: usize) -> Confidence {
    let m = eig.dim();
    let noise = eig.eigenvalues[sources..].iter().fold(T::zero(), |a, &b| a + b) / T::from_usize(m - sources).unwrap();
    let weakest_signal = eig.eigenvalues[sources - 1];
    if weakest_signal >= T::lit(CONFIDENCE_RATIO) * noise && weakest_signal > T::zero() {
        Confidence::Ok
    } else {
        Confidence::LowConfidence
    }
}

fn angle_from_phase<T: Scalar>(phase: T) -> Result<T> {
    let s = phase / T::PI();
    if !(s.abs() < T::one()) {
        return Err(Error::Aliasing {
            phase_rad: phase.to_f64_lossy(),
        });
    }
    Ok(s.asin())
}

/// Single-source ESPRIT from the shift invariance of the dominant
/// eigenvector between the two overlapping `M − 1` element subarrays.
pub fn esprit_aoa<T: Scalar>(r: &ComplexMatrix<T>, sources: usize) -> Result<AoaEstimate<T>> {
    let m = r.rows();
    if m < 2 {
        return Err(Error::Dimension("ESPRIT needs at least 2 antennas".into()));
    }
    if sources != 1 {
        return Err(Error::Usage(format!("ESPRIT supports a single source, got {sources}")));
    }
    let eig = decompose(r)?;
    let e = eig.eigenvector(0);
    let (lower, upper) = (&e[..m - 1], &e[1..]);
    let energy = norm_sqr(lower);
    if energy.is_zero() {
        return Err(Error::DegenerateSpectrum);
    }
    let rotation = inner(lower, upper) / energy;
    let angle_rad = angle_from_phase(rotation.arg())?;
    Ok(AoaEstimate {
        angle_rad,
        algorithm: Algorithm::Esprit,
        condition: eigen_confidence(&eig, sources),
    })
}

/// Coefficients (ascending powers) of `z^{M−1} · aᴴ(z) C a(z)` with
/// `C = E_N E_Nᴴ`: the coefficient of `z^{M−1−k}` is the `k`-th diagonal
/// sum `Σ_m C[m, m−k]`.
pub fn root_music_polynomial<T: Scalar>(r: &ComplexMatrix<T>, sources: usize) -> Result<Vec<Complex<T>>> {
    let eig = decompose(r)?;
    root_music_polynomial_from(&eig, sources)
}

fn root_music_polynomial_from<T: Scalar>(eig: &EigenDecomposition<T>, sources: usize) -> Result<Vec<Complex<T>>> {
    let m = eig.dim();
    check_sources(sources, m)?;
    let noise: Vec<Vec<Complex<T>>> = (sources..m).map(|i| eig.eigenvector(i)).collect();
    let projector = ComplexMatrix::from_fn(m, m, |i, j| {
        noise.iter().fold(Complex::zero(), |acc, e| acc + e[i] * e[j].conj())
    });
    let mi = m as isize;
    let mut coeffs = vec![Complex::<T>::zero(); 2 * m - 1];
    for k in -(mi - 1)..mi {
        let mut sum = Complex::zero();
        for row in 0..mi {
            let col = row - k;
            if (0..mi).contains(&col) {
                sum += projector[(row as usize, col as usize)];
            }
        }
        coeffs[(mi - 1 - k) as usize] = sum;
    }
    Ok(coeffs)
}

/// Root-MUSIC: among polynomial roots inside (or on) the unit circle, the
/// one closest to it gives `sin θ = arg(z) / π`.
pub fn root_music_aoa<T: Scalar>(r: &ComplexMatrix<T>, sources: usize) -> Result<AoaEstimate<T>> {
    let m = r.rows();
    if m < 2 {
        return Err(Error::Dimension("Root-MUSIC needs at least 2 antennas".into()));
    }
    let eig = decompose(r)?;
    let coeffs = root_music_polynomial_from(&eig, sources)?;
    let roots = nontrivial_roots(&coeffs)?;

    let inside_tol = T::tol(1e-6);
    let mut candidates: Vec<Complex<T>> = roots
        .into_iter()
        .filter(|z| z.norm() <= T::one() + inside_tol)
        .collect();
    candidates.sort_by(|a, b| {
        let da = (T::one() - a.norm()).abs();
        let db = (T::one() - b.norm()).abs();
        da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
    });
    let closest = candidates.first().copied().ok_or(Error::DegenerateSpectrum)?;
    if !((T::one() - closest.norm()).abs() < T::lit(0.5)) {
        return Err(Error::DegenerateSpectrum);
    }
    Ok(AoaEstimate {
        angle_rad: angle_from_phase(closest.arg())?,
        algorithm: Algorithm::RootMusic,
        condition: eigen_confidence(&eig, sources),
    })
}

/// Roots of the Root-MUSIC polynomial, with negligible outer coefficients
/// (roots at zero or infinity) trimmed first.
pub fn nontrivial_roots<T: Scalar>(coeffs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let negligible = scale * T::tol(1e-12);
    let lo = coeffs.iter().position(|c| c.norm() > negligible);
    let hi = coeffs.iter().rposition(|c| c.norm() > negligible);
    match (lo, hi) {
        (Some(lo), Some(hi)) if hi > lo => poly_roots(&coeffs[lo..=hi]),
        _ => Err(Error::DegenerateSpectrum),
    }
}

/// Dispatches to the estimator for `algorithm` with a single source.
pub fn estimate<T: Scalar>(
    algorithm: Algorithm,
    r: &ComplexMatrix<T>,
    grid: &SteeringGrid<T>,
) -> Result<AoaEstimate<T>> {
    match algorithm {
        Algorithm::Music => grid.music(r, 1),
        Algorithm::Esprit => esprit_aoa(r, 1),
        Algorithm::RootMusic => root_music_aoa(r, 1),
    }
}
