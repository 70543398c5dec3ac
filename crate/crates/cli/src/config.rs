//! TOML experiment configuration. Every section is optional and falls back
//! to the library defaults; unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use ssbloc::adaptive::{AntiWindup, ErrorBounds, PidGains};
use ssbloc::aoa::Algorithm;
use ssbloc::channel::{ChannelConfig, Impairments};
use ssbloc::energy::{
    mode0_e_exec, modes_from_mode0, reference_totals, ModeEnergyScaling, PerAlgorithm, REFERENCE_DURATION_S,
};
use ssbloc::kinematics::{RrhSite, Trajectory};
use ssbloc::sim::{Regime, ScenarioConfig, TestHooks};
use ssbloc::waveform::OfdmConfig;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioSection {
    pub regime: Regime,
    pub algorithm: Algorithm,
    pub mode_id: u8,
    pub t_max_s: f64,
    pub symbol_count: usize,
    pub odometer_sigma_mps: f64,
    pub endfire_guard_deg: f64,
    pub turn_rate_window_s: f64,
    pub heading_gate_deg: f64,
    pub anti_windup: AntiWindup,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let d = ScenarioConfig::default();
        Self {
            regime: d.regime,
            algorithm: d.algorithm,
            mode_id: d.mode_id,
            t_max_s: d.t_max_s,
            symbol_count: d.symbol_count,
            odometer_sigma_mps: d.odometer_sigma_mps,
            endfire_guard_deg: d.endfire_guard_deg,
            turn_rate_window_s: d.turn_rate_window_s,
            heading_gate_deg: d.heading_gate_deg,
            anti_windup: d.anti_windup,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnergySection {
    pub scaling: ModeEnergyScaling,
    /// Replaces the calibrated mode-0 per-execution energies.
    pub mode0_e_exec_j: Option<PerAlgorithm<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub modes: Vec<u8>,
    /// Explicit seeds; when absent, `runs` consecutive seeds from the top-level seed.
    pub seeds: Option<Vec<u64>>,
    pub runs: usize,
    pub energy_budget_j: Option<f64>,
    pub rms_tolerance_m: Option<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            modes: (0..8).collect(),
            seeds: None,
            runs: 10,
            energy_budget_j: None,
            rms_tolerance_m: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub algorithms: Vec<Algorithm>,
    pub seeds: Option<Vec<u64>>,
    pub runs: usize,
}

impl Default for CompareSection {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            seeds: None,
            runs: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateSection {
    pub duration_s: f64,
    /// Fixed-baseline mode-0 energy per trajectory for each estimator.
    pub totals_j: PerAlgorithm<f64>,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        Self {
            duration_s: REFERENCE_DURATION_S,
            totals_j: reference_totals(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CliConfig {
    pub seed: u64,
    pub scenario: ScenarioSection,
    pub channel: ChannelConfig,
    pub impairments: Impairments,
    pub ofdm: OfdmConfig,
    pub pid: PidGains,
    pub bounds: ErrorBounds,
    pub trajectory: Trajectory,
    pub rrh: RrhSite,
    pub energy: EnergySection,
    pub hooks: TestHooks,
    pub sweep: SweepSection,
    pub compare: CompareSection,
    pub calibrate: CalibrateSection,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|message| CliError::ParseConfig {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let s = &self.scenario;
        let e0 = self.energy.mode0_e_exec_j.unwrap_or_else(mode0_e_exec);
        let cfg = ScenarioConfig {
            regime: s.regime,
            algorithm: s.algorithm,
            mode_id: s.mode_id,
            t_max_s: s.t_max_s,
            seed: self.seed,
            channel: self.channel.clone(),
            impairments: self.impairments,
            ofdm: self.ofdm.clone(),
            symbol_count: s.symbol_count,
            pid: self.pid.clone(),
            anti_windup: s.anti_windup,
            bounds: self.bounds.clone(),
            odometer_sigma_mps: s.odometer_sigma_mps,
            endfire_guard_deg: s.endfire_guard_deg,
            turn_rate_window_s: s.turn_rate_window_s,
            heading_gate_deg: s.heading_gate_deg,
            trajectory: self.trajectory.clone(),
            rrh: self.rrh,
            modes: modes_from_mode0(&e0, self.energy.scaling),
            hooks: self.hooks.clone(),
        };
        cfg.validate().map_err(CliError::Invalid)?;
        Ok(cfg)
    }

    fn seed_list(&self, explicit: &Option<Vec<u64>>, runs: usize, section: &str) -> Result<Vec<u64>, CliError> {
        let seeds: Vec<u64> = match explicit {
            Some(list) => list.clone(),
            None => (0..runs as u64).map(|i| self.seed.wrapping_add(i)).collect(),
        };
        if seeds.is_empty() {
            return Err(CliError::Invalid(ssbloc::Error::Config(format!(
                "[{section}] needs at least one seed (set `seeds` or a positive `runs`)"
            ))));
        }
        Ok(seeds)
    }

    pub fn sweep_seeds(&self) -> Result<Vec<u64>, CliError> {
        self.seed_list(&self.sweep.seeds, self.sweep.runs, "sweep")
    }

    pub fn compare_seeds(&self) -> Result<Vec<u64>, CliError> {
        self.seed_list(&self.compare.seeds, self.compare.runs, "compare")
    }
}
