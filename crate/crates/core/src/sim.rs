//! End-to-end scenario runner and design-space exploration.
//!
//! A run drives the ground-truth trajectory, dead-reckons an estimated pose
//! on noisy odometry, and at every wake-up synthesizes an SSB reception,
//! estimates the arrival angle and re-derives the heading from the bearing
//! to the radio head as seen from the *estimated* position. Position error
//! is monitored on a fixed 20 ms grid so regimes with different wake-up
//! patterns are sampled identically.

use std::collections::{BTreeSet, VecDeque};

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adaptive::{normalize_errors, AntiWindup, ErrorBounds, NormalizedErrors, PidGains, WakeUpController};
use crate::aoa::{covariance, estimate, Algorithm, Confidence, SteeringGrid};
use crate::channel::{estimate_snr_db, propagate, ChannelConfig, Impairments};
use crate::energy::{default_modes, execution_count, find_mode, EnergyLedger, PowerMode};
use crate::error::{Error, Result};
use crate::kinematics::{
    compute_aoh, compute_aois, dead_reckon, fold_to_front, true_aoa, true_state, unfold_aoa, wrap_angle, Point2,
    RrhSite, Trajectory, VehicleState,
};
use crate::random::{derive_seed, stream, STREAM_CHANNEL, STREAM_FRAME, STREAM_ODOMETER};
use crate::waveform::{generate_frame, BasebandFrame, OfdmConfig, DEFAULT_SYMBOL_COUNT};

/// SSB periodicity; also the dead-reckoning and error-monitoring step.
pub const SSB_PERIOD_S: f64 = 0.020;
pub const DEFAULT_T_MAX_S: f64 = 0.240;
pub const DEFAULT_ENDFIRE_GUARD_DEG: f64 = 75.0;
pub const DEFAULT_TURN_RATE_WINDOW_S: f64 = 40.0;
pub const DEFAULT_HEADING_GATE_DEG: f64 = 10.0;
pub const GATE_RESYNC_REJECTIONS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Estimate at every SSB (20 ms).
    #[serde(rename = "theoretical_20ms")]
    Theoretical20ms,
    /// Estimate every `t_base` of the power mode.
    FixedBaseline,
    /// PID-scheduled wake-ups within `[t_base, t_max]`.
    Adaptive,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Theoretical20ms => "theoretical_20ms",
            Regime::FixedBaseline => "fixed_baseline",
            Regime::Adaptive => "adaptive",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Overrides for tests and calibration studies. All off by default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestHooks {
    /// Feed these errors to the controller instead of the measured ones.
    pub pinned_errors: Option<NormalizedErrors>,
    /// Replace the estimator output with the true (folded) arrival angle.
    pub genie_aoa: bool,
    /// Feed the controller the true SNR instead of the blind estimate.
    pub genie_snr: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub regime: Regime,
    pub algorithm: Algorithm,
    pub mode_id: u8,
    pub t_max_s: f64,
    pub seed: u64,
    pub channel: ChannelConfig,
    pub impairments: Impairments,
    pub ofdm: OfdmConfig,
    pub symbol_count: usize,
    pub pid: PidGains,
    pub anti_windup: AntiWindup,
    pub bounds: ErrorBounds,
    pub odometer_sigma_mps: f64,
    /// Folded estimates beyond this magnitude (degrees) leave the heading
    /// unchanged; the array resolves little near endfire.
    pub endfire_guard_deg: f64,
    /// Trailing window (s) of accepted heading fixes used to fit the turn
    /// rate the heading coasts on while held. Zero coasts at constant heading.
    pub turn_rate_window_s: f64,
    /// Heading fixes further than this (degrees) from the current heading
    /// are rejected, unless the previous `GATE_RESYNC_REJECTIONS` were too.
    pub heading_gate_deg: f64,
    pub trajectory: Trajectory,
    pub rrh: RrhSite,
    pub modes: Vec<PowerMode>,
    pub hooks: TestHooks,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            regime: Regime::Adaptive,
            algorithm: Algorithm::Music,
            mode_id: 0,
            t_max_s: DEFAULT_T_MAX_S,
            seed: 0,
            channel: ChannelConfig::default(),
            impairments: Impairments::default(),
            ofdm: OfdmConfig::default(),
            symbol_count: DEFAULT_SYMBOL_COUNT,
            pid: PidGains::default(),
            anti_windup: AntiWindup::default(),
            bounds: ErrorBounds::default(),
            odometer_sigma_mps: 0.05,
            endfire_guard_deg: DEFAULT_ENDFIRE_GUARD_DEG,
            turn_rate_window_s: DEFAULT_TURN_RATE_WINDOW_S,
            heading_gate_deg: DEFAULT_HEADING_GATE_DEG,
            trajectory: Trajectory::default(),
            rrh: RrhSite::default(),
            modes: default_modes(),
            hooks: TestHooks::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn mode(&self) -> Result<&PowerMode> {
        find_mode(&self.modes, self.mode_id)
    }

    pub fn t_base_s(&self) -> Result<f64> {
        Ok(self.mode()?.t_base_s.get(self.algorithm))
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.ofdm.validate()?;
        self.pid.validate()?;
        self.bounds.validate()?;
        self.trajectory.validate()?;
        for m in &self.modes {
            m.validate()?;
        }
        let t_base = self.t_base_s()?;
        if self.regime == Regime::Adaptive && !(t_base <= self.t_max_s) {
            return Err(Error::Config(format!(
                "t_max_s ({}) is below t_base_s ({t_base}) of mode {} for {}",
                self.t_max_s, self.mode_id, self.algorithm
            )));
        }
        if !(self.odometer_sigma_mps >= 0.0) {
            return Err(Error::Config("odometer_sigma_mps must be non-negative".into()));
        }
        if !(self.endfire_guard_deg > 0.0 && self.endfire_guard_deg < 90.0) {
            return Err(Error::Config(format!(
                "endfire_guard_deg ({}) must lie in (0, 90)",
                self.endfire_guard_deg
            )));
        }
        if !(self.turn_rate_window_s >= 0.0) {
            return Err(Error::Config("turn_rate_window_s must be non-negative".into()));
        }
        if !(self.heading_gate_deg > 0.0) {
            return Err(Error::Config("heading_gate_deg must be positive".into()));
        }
        if self.symbol_count == 0 {
            return Err(Error::Config("symbol_count must be at least 1".into()));
        }
        Ok(())
    }
}

/// One wake-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRecord {
    pub t_s: f64,
    /// Interval that ended at this wake-up.
    pub wt_used_s: f64,
    pub snr_est_db: f64,
    pub true_snr_db: f64,
    /// `None` when the estimator failed and the heading was held.
    pub aoa_est_rad: Option<f64>,
    pub aoa_true_rad: f64,
    pub condition: Option<Confidence>,
    pub pos_est: Point2,
    pub pos_true: Point2,
    pub err_x_m: f64,
    pub err_y_m: f64,
    pub cum_energy_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub records: Vec<LocalizationRecord>,
    /// Monitoring instants (every 20 ms) and absolute per-axis errors there.
    pub monitor_t_s: Vec<f64>,
    pub err_x_series: Vec<f64>,
    pub err_y_series: Vec<f64>,
    pub worst_err_x: f64,
    pub worst_err_y: f64,
    pub rms_x: f64,
    pub rms_y: f64,
    pub total_energy_j: f64,
    pub execution_count: u64,
    pub held_headings: u64,
    pub duration_s: f64,
    pub arc_length_m: f64,
}

impl RunResult {
    pub fn worst_err(&self) -> f64 {
        self.worst_err_x.max(self.worst_err_y)
    }

    pub fn mean_wt_s(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.wt_used_s).sum::<f64>() / self.records.len() as f64
    }
}

/// Issues wake-up instants. Fixed periods use `k · period` so the count over
/// the run is exactly `floor(duration / period)`.
enum Schedule {
    Fixed {
        period: f64,
        k: u64,
    },
    Adaptive {
        controller: WakeUpController,
        next: f64,
        last_wt: f64,
    },
}

impl Schedule {
    fn next_wake(&self) -> f64 {
        match self {
            Schedule::Fixed { period, k } => *k as f64 * period,
            Schedule::Adaptive { next, .. } => *next,
        }
    }

    fn interval(&self) -> f64 {
        match self {
            Schedule::Fixed { period, .. } => *period,
            Schedule::Adaptive { last_wt, .. } => *last_wt,
        }
    }
}

/// Accepted heading fixes, and the coasting line the heading follows while
/// fixes are withheld.
struct HeadingTracker {
    window_s: f64,
    /// `(t, heading)` with headings unwrapped against their predecessor.
    fixes: VecDeque<(f64, f64)>,
    /// `(t0, heading0, rate)` while coasting.
    coast: Option<(f64, f64, f64)>,
}

impl HeadingTracker {
    fn new(window_s: f64) -> Self {
        Self {
            window_s,
            fixes: VecDeque::new(),
            coast: None,
        }
    }

    fn accept(&mut self, t: f64, aoh: f64) {
        let unwrapped = match self.fixes.back() {
            Some(&(_, prev)) => prev + wrap_angle(aoh - prev),
            None => aoh,
        };
        self.fixes.push_back((t, unwrapped));
        while self.fixes.front().is_some_and(|&(t0, _)| t0 < t - self.window_s) {
            self.fixes.pop_front();
        }
        self.coast = None;
    }

    fn hold(&mut self) {
        if self.coast.is_none() {
            if let Some(&(t0, h0)) = self.fixes.back() {
                self.coast = Some(match self.fit() {
                    Some((mt, mh, rate)) => (t0, mh + rate * (t0 - mt), rate),
                    None => (t0, h0, 0.0),
                });
            }
        }
    }

    /// Least-squares line through the window as `(mean t, mean heading,
    /// slope)`; `None` until the window is half covered.
    fn fit(&self) -> Option<(f64, f64, f64)> {
        let n = self.fixes.len();
        let (first, last) = (self.fixes.front()?, self.fixes.back()?);
        if n < 3 || last.0 - first.0 < 0.5 * self.window_s {
            return None;
        }
        let nf = n as f64;
        let mt = self.fixes.iter().map(|f| f.0).sum::<f64>() / nf;
        let mh = self.fixes.iter().map(|f| f.1).sum::<f64>() / nf;
        let sxy: f64 = self.fixes.iter().map(|f| (f.0 - mt) * (f.1 - mh)).sum();
        let sxx: f64 = self.fixes.iter().map(|f| (f.0 - mt).powi(2)).sum();
        (sxx > 0.0).then(|| (mt, mh, sxy / sxx))
    }

    fn coasting_heading(&self, t: f64) -> Option<f64> {
        self.coast.map(|(t0, h0, rate)| wrap_angle(h0 + rate * (t - t0)))
    }
}

struct Runner<'a> {
    cfg: &'a ScenarioConfig,
    mode: &'a PowerMode,
    frame: BasebandFrame<f64>,
    grid: SteeringGrid<f64>,
    est: VehicleState,
    ledger: EnergyLedger,
    last_v_odo: f64,
    held: u64,
    heading: HeadingTracker,
    gate_rejections: u32,
}

impl Runner<'_> {
    /// Odometer reading over `[t0, t1]`: true mean speed plus one Gaussian
    /// draw per 20 ms cell.
    fn odometer(&self, t0: f64, t1: f64, cell: u64) -> f64 {
        let traj = &self.cfg.trajectory;
        let v = (traj.distance_at(t1) - traj.distance_at(t0)) / (t1 - t0);
        let noise = if self.cfg.odometer_sigma_mps > 0.0 {
            let n: f64 = StandardNormal.sample(&mut stream(self.cfg.seed, STREAM_ODOMETER, cell));
            self.cfg.odometer_sigma_mps * n
        } else {
            0.0
        };
        (v + noise).max(0.0)
    }

    fn advance(&mut self, t0: f64, t1: f64, cell: u64) -> Result<()> {
        if t1 <= t0 {
            return Ok(());
        }
        let v = self.odometer(t0, t1, cell);
        self.last_v_odo = v;
        if let Some(h) = self.heading.coasting_heading(0.5 * (t0 + t1)) {
            self.est.aoh_rad = h;
        }
        self.est = dead_reckon(&self.est, v, t1 - t0)?;
        self.est.t_s = t1;
        Ok(())
    }

    fn wake(&mut self, t: f64, wt_used: f64) -> Result<(LocalizationRecord, f64)> {
        let cfg = self.cfg;
        let traj = &cfg.trajectory;
        let truth = true_state(&traj.track, &traj.profile, t)?;
        let aoa_true = true_aoa(&truth, &cfg.rrh)?;
        let distance = truth.pos.distance(cfg.rrh.pos);

        // the array only resolves the front half-plane
        let half_pi = std::f64::consts::FRAC_PI_2;
        let folded = fold_to_front(aoa_true).clamp(-half_pi + 1e-9, half_pi - 1e-9);
        let key = (t * 1e6).round() as u64;
        let rx = propagate(
            &self.frame,
            folded,
            distance,
            &cfg.channel,
            cfg.impairments,
            derive_seed(cfg.seed, STREAM_CHANNEL, key),
        )?;

        let snr_est = match estimate_snr_db(&rx.snapshots) {
            Ok(s) => s,
            Err(Error::DegenerateCovariance) => rx.true_snr_db,
            Err(e) => return Err(e),
        };
        let snr_for_control = if cfg.hooks.genie_snr { rx.true_snr_db } else { snr_est };

        let estimate = if cfg.hooks.genie_aoa {
            Ok((folded, Confidence::Ok))
        } else {
            let r = covariance(&rx.snapshots);
            estimate(cfg.algorithm, &r, &self.grid).map(|e| (e.angle_rad, e.condition))
        };

        let beta = compute_aois(self.est.pos, &cfg.rrh)?;
        let (aoa_est, condition) = match estimate {
            Ok((angle, cond)) => {
                let predicted = wrap_angle(beta - self.est.aoh_rad);
                let aoa = unfold_aoa(angle, predicted);
                let aoh = compute_aoh(beta, aoa);
                let usable = cond == Confidence::Ok && angle.abs() <= cfg.endfire_guard_deg.to_radians();
                let gated = usable
                    && wrap_angle(aoh - self.est.aoh_rad).abs() > cfg.heading_gate_deg.to_radians()
                    && self.gate_rejections < GATE_RESYNC_REJECTIONS;
                if gated {
                    self.gate_rejections += 1;
                } else if usable {
                    self.gate_rejections = 0;
                }
                if usable && !gated {
                    self.est.aoh_rad = aoh;
                    self.heading.accept(t, aoh);
                } else {
                    self.heading.hold();
                    self.held += 1;
                }
                (Some(aoa), Some(cond))
            }
            Err(e) => {
                log::debug!("estimator failed at t = {t:.3} s: {e}; holding heading");
                self.heading.hold();
                self.held += 1;
                (None, None)
            }
        };
        self.ledger.account(self.mode, cfg.algorithm)?;

        let record = LocalizationRecord {
            t_s: t,
            wt_used_s: wt_used,
            snr_est_db: snr_est,
            true_snr_db: rx.true_snr_db,
            aoa_est_rad: aoa_est,
            aoa_true_rad: aoa_true,
            condition,
            pos_est: self.est.pos,
            pos_true: truth.pos,
            err_x_m: (self.est.pos.x - truth.pos.x).abs(),
            err_y_m: (self.est.pos.y - truth.pos.y).abs(),
            cum_energy_j: self.ledger.total_j(),
        };
        Ok((record, snr_for_control))
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult> {
    cfg.validate()?;
    let traj = &cfg.trajectory;
    let duration = traj.duration();
    let mode = cfg.mode()?;
    let t_base = mode.t_base_s.get(cfg.algorithm);

    let frame = generate_frame::<f64>(&cfg.ofdm, derive_seed(cfg.seed, STREAM_FRAME, 0), cfg.symbol_count)?;
    let start = true_state(&traj.track, &traj.profile, 0.0)?;
    let mut runner = Runner {
        cfg,
        mode,
        frame,
        grid: SteeringGrid::uniform(cfg.channel.antennas),
        est: start,
        ledger: EnergyLedger::new(),
        last_v_odo: 0.0,
        held: 0,
        heading: HeadingTracker::new(cfg.turn_rate_window_s),
        gate_rejections: 0,
    };

    let mut schedule = match cfg.regime {
        Regime::Theoretical20ms => Schedule::Fixed {
            period: SSB_PERIOD_S,
            k: 1,
        },
        Regime::FixedBaseline => Schedule::Fixed { period: t_base, k: 1 },
        Regime::Adaptive => {
            let mut controller =
                WakeUpController::new(cfg.pid.clone(), t_base, cfg.t_max_s)?.with_anti_windup(cfg.anti_windup);
            let initial = cfg.hooks.pinned_errors.unwrap_or(NormalizedErrors::ZERO);
            let wt = controller.calculate_wake_up_time(initial, t_base)?;
            Schedule::Adaptive {
                controller,
                next: wt,
                last_wt: wt,
            }
        }
    };

    let mut records = Vec::new();
    let mut monitor_t = Vec::new();
    let mut err_x = Vec::new();
    let mut err_y = Vec::new();

    let mut t = 0.0;
    let mut tick: u64 = 1;
    loop {
        let next_tick = tick as f64 * SSB_PERIOD_S;
        let next_wake = schedule.next_wake();
        let target = next_tick.min(next_wake).min(duration);
        if target <= t && next_tick > duration && next_wake > duration {
            break;
        }
        runner.advance(t, target, tick - 1)?;
        t = target;

        if next_tick <= t {
            let truth = true_state(&traj.track, &traj.profile, t)?;
            monitor_t.push(t);
            err_x.push((runner.est.pos.x - truth.pos.x).abs());
            err_y.push((runner.est.pos.y - truth.pos.y).abs());
            tick += 1;
        }

        if next_wake <= t && next_wake <= duration {
            let (record, snr) = runner.wake(t, schedule.interval())?;
            records.push(record);
            match &mut schedule {
                Schedule::Fixed { k, .. } => *k += 1,
                Schedule::Adaptive {
                    controller,
                    next,
                    last_wt,
                } => {
                    let eps = match cfg.hooks.pinned_errors {
                        Some(e) => e,
                        None => normalize_errors(snr, runner.last_v_odo, traj.speed_at(t), &cfg.bounds)?,
                    };
                    let wt = controller.calculate_wake_up_time(eps, *last_wt)?;
                    *last_wt = wt;
                    *next = t + wt;
                }
            }
        }

        if t >= duration && next_tick > duration && schedule.next_wake() > duration {
            break;
        }
    }

    let worst = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    let rms = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            (v.iter().map(|e| e * e).sum::<f64>() / v.len() as f64).sqrt()
        }
    };
    Ok(RunResult {
        worst_err_x: worst(&err_x),
        worst_err_y: worst(&err_y),
        rms_x: rms(&err_x),
        rms_y: rms(&err_y),
        total_energy_j: runner.ledger.total_j(),
        execution_count: runner.ledger.executions(),
        held_headings: runner.held,
        duration_s: duration,
        arc_length_m: traj.distance_at(duration),
        records,
        monitor_t_s: monitor_t,
        err_x_series: err_x,
        err_y_series: err_y,
    })
}

/// Executions a fixed-period regime performs over the trajectory.
pub fn fixed_execution_count(cfg: &ScenarioConfig) -> Result<u64> {
    let period = match cfg.regime {
        Regime::Theoretical20ms => SSB_PERIOD_S,
        _ => cfg.t_base_s()?,
    };
    execution_count(cfg.trajectory.duration(), period)
}

/// Averages over the seeds of one power mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeAggregate {
    pub mode_id: u8,
    pub cpu_mhz: f64,
    pub regime: Regime,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub rms_x_m: f64,
    pub rms_y_m: f64,
    pub worst_x_m: f64,
    pub worst_y_m: f64,
    pub mean_energy_j: f64,
    pub mean_executions: f64,
}

impl ModeAggregate {
    pub fn design_point(&self) -> DesignPoint {
        DesignPoint {
            mode_id: self.mode_id,
            rms_x_m: self.rms_x_m,
            rms_y_m: self.rms_y_m,
            energy_j: self.mean_energy_j,
        }
    }
}

/// Runs every `(mode, seed)` pair; the base config supplies everything else.
/// Results come back in `modes` order regardless of scheduling.
pub fn sweep_runs(base: &ScenarioConfig, modes: &[u8], seeds: &[u64]) -> Result<Vec<Vec<RunResult>>> {
    if modes.is_empty() || seeds.is_empty() {
        return Err(Error::Usage("sweep needs at least one mode and one seed".into()));
    }
    let jobs: Vec<(usize, u8, u64)> = modes
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| seeds.iter().map(move |&s| (i, m, s)))
        .collect();
    let results: Vec<(usize, RunResult)> = jobs
        .par_iter()
        .map(|&(i, mode_id, seed)| {
            let cfg = ScenarioConfig {
                mode_id,
                seed,
                ..base.clone()
            };
            run_scenario(&cfg).map(|r| (i, r))
        })
        .collect::<Result<_>>()?;
    let mut grouped: Vec<Vec<RunResult>> = vec![Vec::with_capacity(seeds.len()); modes.len()];
    for (i, r) in results {
        grouped[i].push(r);
    }
    Ok(grouped)
}

pub fn aggregate(base: &ScenarioConfig, mode_id: u8, runs: &[RunResult]) -> Result<ModeAggregate> {
    let mode = find_mode(&base.modes, mode_id)?;
    let n = runs.len() as f64;
    let mean = |f: &dyn Fn(&RunResult) -> f64| runs.iter().map(f).sum::<f64>() / n;
    Ok(ModeAggregate {
        mode_id,
        cpu_mhz: mode.cpu_mhz,
        regime: base.regime,
        algorithm: base.algorithm,
        runs: runs.len(),
        rms_x_m: mean(&|r| r.rms_x),
        rms_y_m: mean(&|r| r.rms_y),
        worst_x_m: mean(&|r| r.worst_err_x),
        worst_y_m: mean(&|r| r.worst_err_y),
        mean_energy_j: mean(&|r| r.total_energy_j),
        mean_executions: mean(&|r| r.execution_count as f64),
    })
}

/// Per-mode averages of `run_scenario` over `seeds`.
pub fn sweep_modes(base: &ScenarioConfig, modes: &[u8], seeds: &[u64]) -> Result<Vec<ModeAggregate>> {
    let grouped = sweep_runs(base, modes, seeds)?;
    modes
        .iter()
        .zip(&grouped)
        .map(|(&m, runs)| aggregate(base, m, runs))
        .collect()
}

/// Accuracy/energy summary of one mode, the unit of design-point selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub mode_id: u8,
    pub rms_x_m: f64,
    pub rms_y_m: f64,
    pub energy_j: f64,
}

/// Modes within the energy budget and whose larger RMS axis error is within
/// tolerance. At least one constraint is required.
pub fn select_design_points(
    table: &[DesignPoint],
    energy_budget_j: Option<f64>,
    rms_tolerance_m: Option<f64>,
) -> Result<BTreeSet<u8>> {
    if energy_budget_j.is_none() && rms_tolerance_m.is_none() {
        return Err(Error::Usage("give an energy budget, an RMS tolerance, or both".into()));
    }
    Ok(table
        .iter()
        .filter(|p| energy_budget_j.is_none_or(|b| p.energy_j <= b))
        .filter(|p| rms_tolerance_m.is_none_or(|tol| p.rms_x_m.max(p.rms_y_m) <= tol))
        .map(|p| p.mode_id)
        .collect())
}

/// One row of an algorithm × regime comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub regime: Regime,
    pub mode_id: u8,
    pub runs: usize,
    pub mean_energy_j: f64,
    pub mean_executions: f64,
    pub worst_x_m: f64,
    pub worst_y_m: f64,
    pub rms_x_m: f64,
    pub rms_y_m: f64,
    /// `(baseline − adaptive) / baseline` for adaptive rows; zero otherwise.
    pub energy_savings: f64,
}

/// Fixed-baseline and adaptive runs of each algorithm in the base mode.
pub fn compare_regimes(base: &ScenarioConfig, algorithms: &[Algorithm], seeds: &[u64]) -> Result<Vec<ComparisonRow>> {
    if algorithms.is_empty() || seeds.is_empty() {
        return Err(Error::Usage(
            "comparison needs at least one algorithm and one seed".into(),
        ));
    }
    let mut rows = Vec::new();
    for &algorithm in algorithms {
        let mut baseline_energy = None;
        for regime in [Regime::FixedBaseline, Regime::Adaptive] {
            let cfg = ScenarioConfig {
                algorithm,
                regime,
                ..base.clone()
            };
            let agg = sweep_modes(&cfg, &[cfg.mode_id], seeds)?.remove(0);
            let savings = match (regime, baseline_energy) {
                (Regime::Adaptive, Some(b)) if b > 0.0 => (b - agg.mean_energy_j) / b,
                _ => 0.0,
            };
            if regime == Regime::FixedBaseline {
                baseline_energy = Some(agg.mean_energy_j);
            }
            rows.push(ComparisonRow {
                algorithm,
                regime,
                mode_id: cfg.mode_id,
                runs: agg.runs,
                mean_energy_j: agg.mean_energy_j,
                mean_executions: agg.mean_executions,
                worst_x_m: agg.worst_x_m,
                worst_y_m: agg.worst_y_m,
                rms_x_m: agg.rms_x_m,
                rms_y_m: agg.rms_y_m,
                energy_savings: savings,
            });
        }
    }
    Ok(rows)
}
