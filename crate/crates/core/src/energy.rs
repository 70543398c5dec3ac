//! Power-mode catalogue and execution-count energy accounting.
//!
//! Energy is attributed to estimator executions only: a run costs
//! `executions × e_exec` per algorithm. Idle and receive-chain power are
//! not modelled.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aoa::Algorithm;
use crate::error::{Error, Result};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
/// Measured whole-trajectory totals in the fastest mode, in joules.
pub const MODE0_TOTAL_MUSIC_J: f64 = 627.22;
pub const MODE0_TOTAL_ESPRIT_J: f64 = 679.77;
pub const MODE0_TOTAL_ROOT_MUSIC_J: f64 = 648.70;
/// Trajectory length the totals above were measured over.
pub const REFERENCE_DURATION_S: f64 = 80.333;

/// One value per estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerAlgorithm<V> {
    pub music: V,
    pub esprit: V,
    pub root_music: V,
}

impl<V: Copy> PerAlgorithm<V> {
    pub fn get(&self, a: Algorithm) -> V {
        match a {
            Algorithm::Music => self.music,
            Algorithm::Esprit => self.esprit,
            Algorithm::RootMusic => self.root_music,
        }
    }

    pub fn map<W>(&self, mut f: impl FnMut(Algorithm, V) -> W) -> PerAlgorithm<W> {
        PerAlgorithm {
            music: f(Algorithm::Music, self.music),
            esprit: f(Algorithm::Esprit, self.esprit),
            root_music: f(Algorithm::RootMusic, self.root_music),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerMode {
    pub id: u8,
    pub cpu_mhz: f64,
    pub t_base_s: PerAlgorithm<f64>,
    pub e_exec_j: PerAlgorithm<f64>,
}

impl PowerMode {
    pub fn validate(&self) -> Result<()> {
        for a in Algorithm::ALL {
            if !(self.t_base_s.get(a) >= 0.02 - 1e-12) {
                return Err(Error::Config(format!(
                    "mode {}: t_base for {a} is {} s, below the 20 ms SSB period",
                    self.id,
                    self.t_base_s.get(a)
                )));
            }
            if !(self.e_exec_j.get(a) > 0.0) {
                return Err(Error::Config(format!(
                    "mode {}: e_exec for {a} must be positive",
                    self.id
                )));
            }
        }
        if !(self.cpu_mhz > 0.0) {
            return Err(Error::Config(format!("mode {}: cpu_mhz must be positive", self.id)));
        }
        Ok(())
    }
}

/// How per-execution energy is extrapolated from mode 0 to slower modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeEnergyScaling {
    /// `e_mode = e_0 · f_mode / f_0`.
    #[default]
    ProportionalToFrequency,
    /// `e_mode = e_0 · (t_base_mode / t_base_0) · (f_0 / f_mode)`.
    BaseIntervalOverFrequency,
}

/// `(id, cpu MHz, t_base ms for music / esprit / root-music)`.
const MODE_TABLE: [(u8, f64, [f64; 3]); 8] = [
    (0, 2265.6, [80.0, 65.0, 70.0]),
    (1, 1200.0, [150.0, 130.0, 135.0]),
    (2, 1200.0, [150.0, 130.0, 135.0]),
    (3, 1200.0, [150.0, 130.0, 135.0]),
    (4, 1450.0, [120.0, 110.0, 110.0]),
    (5, 1780.0, [100.0, 90.0, 95.0]),
    (6, 2100.0, [100.0, 70.0, 75.0]),
    (7, 2188.0, [100.0, 70.0, 75.0]),
];

/// Number of fixed-period executions in `duration_s`: `floor(duration / period)`.
///
/// The ratio is nudged by a few ulps before flooring so that exact
/// multiples expressed in decimal seconds are not lost to rounding.
pub fn execution_count(duration_s: f64, period_s: f64) -> Result<u64> {
    if !(duration_s > 0.0) || !(period_s > 0.0) {
        return Err(Error::Domain(format!(
            "duration {duration_s} s and period {period_s} s must be positive"
        )));
    }
    let ratio = duration_s / period_s;
    Ok((ratio * (1.0 + 4.0 * f64::EPSILON)).floor() as u64)
}

/// Per-execution energy such that `floor(duration / period)` executions
/// cost `total_j`.
pub fn calibrate_e_exec(total_j: f64, duration_s: f64, period_s: f64) -> Result<f64> {
    let n = execution_count(duration_s, period_s)?;
    if n == 0 {
        return Err(Error::Domain(format!(
            "period {period_s} s exceeds duration {duration_s} s: no executions to calibrate against"
        )));
    }
    Ok(total_j / n as f64)
}

/// Mode-0 base intervals from the power-mode table.
pub fn mode0_t_base() -> PerAlgorithm<f64> {
    let t = MODE_TABLE[0].2;
    PerAlgorithm {
        music: t[0] / 1000.0,
        esprit: t[1] / 1000.0,
        root_music: t[2] / 1000.0,
    }
}

/// Mode-0 per-execution energies such that fixed-baseline runs over
/// `duration_s` cost `totals_j`.
pub fn calibrate_mode0(totals_j: &PerAlgorithm<f64>, duration_s: f64) -> Result<PerAlgorithm<f64>> {
    let t_base = mode0_t_base();
    Ok(PerAlgorithm {
        music: calibrate_e_exec(totals_j.music, duration_s, t_base.music)?,
        esprit: calibrate_e_exec(totals_j.esprit, duration_s, t_base.esprit)?,
        root_music: calibrate_e_exec(totals_j.root_music, duration_s, t_base.root_music)?,
    })
}

pub fn reference_totals() -> PerAlgorithm<f64> {
    PerAlgorithm {
        music: MODE0_TOTAL_MUSIC_J,
        esprit: MODE0_TOTAL_ESPRIT_J,
        root_music: MODE0_TOTAL_ROOT_MUSIC_J,
    }
}

/// Mode-0 per-execution energies calibrated from the reference totals.
pub fn mode0_e_exec() -> PerAlgorithm<f64> {
    calibrate_mode0(&reference_totals(), REFERENCE_DURATION_S).expect("reference periods are valid")
}

pub fn modes_with_scaling(scaling: ModeEnergyScaling) -> Vec<PowerMode> {
    modes_from_mode0(&mode0_e_exec(), scaling)
}

/// The power-mode table with every mode's energy derived from mode 0's.
pub fn modes_from_mode0(e0: &PerAlgorithm<f64>, scaling: ModeEnergyScaling) -> Vec<PowerMode> {
    let (_, f0, t0) = MODE_TABLE[0];
    MODE_TABLE
        .iter()
        .map(|&(id, cpu_mhz, t_ms)| {
            let t_base_s = PerAlgorithm {
                music: t_ms[0] / 1000.0,
                esprit: t_ms[1] / 1000.0,
                root_music: t_ms[2] / 1000.0,
            };
            let e_exec_j = e0.map(|a, e| {
                let i = a as usize;
                match scaling {
                    ModeEnergyScaling::ProportionalToFrequency => e * cpu_mhz / f0,
                    ModeEnergyScaling::BaseIntervalOverFrequency => e * (t_ms[i] / t0[i]) * (f0 / cpu_mhz),
                }
            });
            PowerMode {
                id,
                cpu_mhz,
                t_base_s,
                e_exec_j,
            }
        })
        .collect()
}

/// The eight Jetson power modes with default per-execution energies.
pub fn default_modes() -> Vec<PowerMode> {
    modes_with_scaling(ModeEnergyScaling::default())
}

pub fn find_mode(modes: &[PowerMode], id: u8) -> Result<&PowerMode> {
    modes
        .iter()
        .find(|m| m.id == id)
        .ok_or_else(|| Error::Lookup(format!("no power mode with id {id}")))
}

/// Execution counts keyed by `(mode, algorithm)`; the total is always
/// recomputed as `Σ count × e_exec`, so it does not depend on charging order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    entries: BTreeMap<(u8, Algorithm), LedgerEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct LedgerEntry {
    executions: u64,
    e_exec_j: f64,
}

impl EnergyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn executions(&self) -> u64 {
        self.entries.values().map(|e| e.executions).sum()
    }

    pub fn total_j(&self) -> f64 {
        self.entries.values().map(|e| e.executions as f64 * e.e_exec_j).sum()
    }

    pub fn account(&mut self, mode: &PowerMode, algorithm: Algorithm) -> Result<()> {
        let e_exec_j = mode.e_exec_j.get(algorithm);
        if !(e_exec_j > 0.0) {
            return Err(Error::Lookup(format!(
                "mode {} has no execution energy for {algorithm}",
                mode.id
            )));
        }
        let entry = self.entries.entry((mode.id, algorithm)).or_insert(LedgerEntry {
            executions: 0,
            e_exec_j,
        });
        if entry.e_exec_j != e_exec_j {
            return Err(Error::Lookup(format!(
                "mode {} {algorithm} charged with two different execution energies",
                mode.id
            )));
        }
        entry.executions += 1;
        Ok(())
    }

    /// Sums two ledgers, e.g. from parallel workers.
    pub fn merge(&mut self, other: &EnergyLedger) -> Result<()> {
        for (key, theirs) in &other.entries {
            let mine = self.entries.entry(*key).or_insert(LedgerEntry {
                executions: 0,
                e_exec_j: theirs.e_exec_j,
            });
            if mine.e_exec_j != theirs.e_exec_j {
                return Err(Error::Lookup(format!("conflicting execution energy for {key:?}")));
            }
            mine.executions += theirs.executions;
        }
        Ok(())
    }
}

/// Extrapolates per-trajectory energy to a 24-hour day.
pub fn daily_scaling(per_traj_j: f64, traj_duration_s: f64) -> Result<f64> {
    if !(traj_duration_s > 0.0) {
        return Err(Error::Domain("trajectory duration must be positive".into()));
    }
    Ok(per_traj_j * SECONDS_PER_DAY / traj_duration_s)
}
