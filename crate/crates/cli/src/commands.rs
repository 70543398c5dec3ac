//! The four subcommands and the files they write.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use ssbloc::aoa::Algorithm;
use ssbloc::energy::{
    calibrate_mode0, execution_count, mode0_t_base, modes_from_mode0, ModeEnergyScaling, PerAlgorithm, PowerMode,
};
use ssbloc::sim::{
    aggregate, compare_regimes, run_scenario, select_design_points, sweep_runs, ComparisonRow, Regime, RunResult,
    ScenarioConfig,
};

use crate::config::CliConfig;
use crate::error::CliError;

pub const TRAJECTORY_CSV: &str = "trajectory.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const DSE_CSV: &str = "dse.csv";
pub const COMPARE_CSV: &str = "compare.csv";
pub const CALIBRATION_JSON: &str = "calibration.json";

#[derive(Debug, Serialize)]
struct TrajectoryRow {
    t_s: f64,
    x_true: f64,
    y_true: f64,
    x_est: f64,
    y_est: f64,
    err_x_m: f64,
    err_y_m: f64,
    snr_db: f64,
    wt_ms: f64,
    aoa_true_deg: f64,
    aoa_est_deg: Option<f64>,
    cum_energy_j: f64,
}

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    command: &'static str,
    seed: u64,
    regime: Regime,
    algorithm: Algorithm,
    mode_id: u8,
    duration_s: f64,
    arc_length_m: f64,
    executions: u64,
    total_energy_j: f64,
    worst_err_x_m: f64,
    worst_err_y_m: f64,
    rms_x_m: f64,
    rms_y_m: f64,
    held_headings: u64,
    mean_wt_ms: f64,
    config: &'a ScenarioConfig,
}

#[derive(Debug, Serialize)]
struct DseRow {
    mode_id: u8,
    cpu_mhz: f64,
    regime: Regime,
    algorithm: Algorithm,
    rms_x_m: f64,
    rms_y_m: f64,
    worst_x_m: f64,
    worst_y_m: f64,
    mean_energy_j: f64,
}

#[derive(Debug, Serialize)]
struct Selection {
    energy_budget_j: Option<f64>,
    rms_tolerance_m: Option<f64>,
    selected_modes: Vec<u8>,
}

#[derive(Debug, Serialize)]
struct SweepSummary<'a> {
    command: &'static str,
    seed: u64,
    seeds: &'a [u64],
    regime: Regime,
    algorithm: Algorithm,
    modes: &'a [u8],
    rows: usize,
    selection: Option<Selection>,
    config: &'a ScenarioConfig,
}

#[derive(Debug, Serialize)]
struct CompareRow {
    algorithm: Algorithm,
    regime: Regime,
    mode_id: u8,
    runs: usize,
    mean_energy_j: f64,
    mean_executions: f64,
    worst_x_m: f64,
    worst_y_m: f64,
    rms_x_m: f64,
    rms_y_m: f64,
    savings: f64,
    savings_pct: f64,
}

impl From<&ComparisonRow> for CompareRow {
    fn from(r: &ComparisonRow) -> Self {
        Self {
            algorithm: r.algorithm,
            regime: r.regime,
            mode_id: r.mode_id,
            runs: r.runs,
            mean_energy_j: r.mean_energy_j,
            mean_executions: r.mean_executions,
            worst_x_m: r.worst_x_m,
            worst_y_m: r.worst_y_m,
            rms_x_m: r.rms_x_m,
            rms_y_m: r.rms_y_m,
            savings: r.energy_savings,
            savings_pct: 100.0 * r.energy_savings,
        }
    }
}

#[derive(Debug, Serialize)]
struct CompareSummary<'a> {
    command: &'static str,
    seed: u64,
    seeds: &'a [u64],
    mode_id: u8,
    rows: &'a [CompareRow],
    mean_savings_pct: f64,
    config: &'a ScenarioConfig,
}

#[derive(Debug, Serialize)]
struct CalibrationReport {
    command: &'static str,
    duration_s: f64,
    totals_j: PerAlgorithm<f64>,
    mode0_t_base_s: PerAlgorithm<f64>,
    mode0_executions: PerAlgorithm<u64>,
    mode0_e_exec_j: PerAlgorithm<f64>,
    scaling: ModeEnergyScaling,
    modes: Vec<PowerMode>,
}

fn prepare(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.to_path_buf(),
        source,
    })
}

fn write_csv<R: Serialize>(path: PathBuf, rows: impl IntoIterator<Item = R>) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv {
        path: path.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn write_json<T: Serialize>(path: PathBuf, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.clone(),
        source,
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(|source| CliError::Io { path, source })
}

fn trajectory_rows(run: &RunResult) -> impl Iterator<Item = TrajectoryRow> + '_ {
    run.records.iter().map(|r| TrajectoryRow {
        t_s: r.t_s,
        x_true: r.pos_true.x,
        y_true: r.pos_true.y,
        x_est: r.pos_est.x,
        y_est: r.pos_est.y,
        err_x_m: r.err_x_m,
        err_y_m: r.err_y_m,
        snr_db: r.snr_est_db,
        wt_ms: 1000.0 * r.wt_used_s,
        aoa_true_deg: r.aoa_true_rad.to_degrees(),
        aoa_est_deg: r.aoa_est_rad.map(f64::to_degrees),
        cum_energy_j: r.cum_energy_j,
    })
}

pub fn run(config: &CliConfig, out: &Path) -> Result<(), CliError> {
    let cfg = config.scenario()?;
    log::info!(
        "running {} {} in mode {}, seed {}",
        cfg.regime,
        cfg.algorithm,
        cfg.mode_id,
        cfg.seed
    );
    let result = run_scenario(&cfg)?;
    prepare(out)?;
    write_csv(out.join(TRAJECTORY_CSV), trajectory_rows(&result))?;
    let summary = RunSummary {
        command: "run",
        seed: cfg.seed,
        regime: cfg.regime,
        algorithm: cfg.algorithm,
        mode_id: cfg.mode_id,
        duration_s: result.duration_s,
        arc_length_m: result.arc_length_m,
        executions: result.execution_count,
        total_energy_j: result.total_energy_j,
        worst_err_x_m: result.worst_err_x,
        worst_err_y_m: result.worst_err_y,
        rms_x_m: result.rms_x,
        rms_y_m: result.rms_y,
        held_headings: result.held_headings,
        mean_wt_ms: 1000.0 * result.mean_wt_s(),
        config: &cfg,
    };
    write_json(out.join(SUMMARY_JSON), &summary)
}

pub fn sweep(config: &CliConfig, out: &Path) -> Result<(), CliError> {
    let base = config.scenario()?;
    let seeds = config.sweep_seeds()?;
    let modes = &config.sweep.modes;
    log::info!("sweeping {} modes x {} seeds", modes.len(), seeds.len());
    let grouped = sweep_runs(&base, modes, &seeds)?;
    let table = modes
        .iter()
        .zip(&grouped)
        .map(|(&m, runs)| aggregate(&base, m, runs))
        .collect::<Result<Vec<_>, _>>()?;

    let (budget, tol) = (config.sweep.energy_budget_j, config.sweep.rms_tolerance_m);
    let selection = if budget.is_some() || tol.is_some() {
        let points: Vec<_> = table.iter().map(|a| a.design_point()).collect();
        Some(Selection {
            energy_budget_j: budget,
            rms_tolerance_m: tol,
            selected_modes: select_design_points(&points, budget, tol)?.into_iter().collect(),
        })
    } else {
        None
    };

    prepare(out)?;
    write_csv(
        out.join(DSE_CSV),
        table.iter().map(|a| DseRow {
            mode_id: a.mode_id,
            cpu_mhz: a.cpu_mhz,
            regime: a.regime,
            algorithm: a.algorithm,
            rms_x_m: a.rms_x_m,
            rms_y_m: a.rms_y_m,
            worst_x_m: a.worst_x_m,
            worst_y_m: a.worst_y_m,
            mean_energy_j: a.mean_energy_j,
        }),
    )?;
    let summary = SweepSummary {
        command: "sweep",
        seed: base.seed,
        seeds: &seeds,
        regime: base.regime,
        algorithm: base.algorithm,
        modes,
        rows: table.len(),
        selection,
        config: &base,
    };
    write_json(out.join(SUMMARY_JSON), &summary)
}

pub fn compare(config: &CliConfig, out: &Path) -> Result<(), CliError> {
    let base = config.scenario()?;
    let seeds = config.compare_seeds()?;
    log::info!(
        "comparing {} algorithms over {} seeds",
        config.compare.algorithms.len(),
        seeds.len()
    );
    let rows: Vec<CompareRow> = compare_regimes(&base, &config.compare.algorithms, &seeds)?
        .iter()
        .map(CompareRow::from)
        .collect();
    let adaptive: Vec<f64> = rows
        .iter()
        .filter(|r| r.regime == Regime::Adaptive)
        .map(|r| r.savings_pct)
        .collect();
    let mean_savings_pct = if adaptive.is_empty() {
        0.0
    } else {
        adaptive.iter().sum::<f64>() / adaptive.len() as f64
    };
    prepare(out)?;
    write_csv(out.join(COMPARE_CSV), &rows)?;
    let summary = CompareSummary {
        command: "compare",
        seed: base.seed,
        seeds: &seeds,
        mode_id: base.mode_id,
        rows: &rows,
        mean_savings_pct,
        config: &base,
    };
    write_json(out.join(SUMMARY_JSON), &summary)
}

pub fn calibrate(config: &CliConfig, out: &Path) -> Result<(), CliError> {
    let c = &config.calibrate;
    let e0 = calibrate_mode0(&c.totals_j, c.duration_s)?;
    let t_base = mode0_t_base();
    let executions = PerAlgorithm {
        music: execution_count(c.duration_s, t_base.music)?,
        esprit: execution_count(c.duration_s, t_base.esprit)?,
        root_music: execution_count(c.duration_s, t_base.root_music)?,
    };
    let report = CalibrationReport {
        command: "calibrate",
        duration_s: c.duration_s,
        totals_j: c.totals_j,
        mode0_t_base_s: t_base,
        mode0_executions: executions,
        mode0_e_exec_j: e0,
        scaling: config.energy.scaling,
        modes: modes_from_mode0(&e0, config.energy.scaling),
    };
    prepare(out)?;
    write_json(out.join(CALIBRATION_JSON), &report)
}
