use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn ssbloc(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_ssbloc"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
}

#[test]
fn run_writes_trajectory_and_summary() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "seed = 7\n", &["run"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let (header, rows) = csv_rows(&dir.path().join("out/trajectory.csv"));
    assert_eq!(
        header,
        [
            "t_s",
            "x_true",
            "y_true",
            "x_est",
            "y_est",
            "err_x_m",
            "err_y_m",
            "snr_db",
            "wt_ms",
            "aoa_true_deg",
            "aoa_est_deg",
            "cum_energy_j"
        ]
    );
    let summary = json(&dir.path().join("out/summary.json"));
    for key in [
        "seed",
        "regime",
        "algorithm",
        "mode_id",
        "executions",
        "total_energy_j",
        "worst_err_x_m",
        "worst_err_y_m",
        "rms_x_m",
        "rms_y_m",
        "config",
    ] {
        assert!(summary.get(key).is_some(), "summary lacks {key}");
    }
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["executions"].as_u64().unwrap() as usize, rows.len());

    let last: f64 = rows.last().unwrap()[col(&header, "cum_energy_j")].parse().unwrap();
    let total = summary["total_energy_j"].as_f64().unwrap();
    assert!((last - total).abs() <= 1e-9 * total, "{last} vs {total}");

    let wt = col(&header, "wt_ms");
    for row in &rows {
        let w: f64 = row[wt].parse().unwrap();
        assert!((80.0 - 1e-9..=240.0 + 1e-9).contains(&w), "wt {w}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let cfg = "seed = 3\n[scenario]\nalgorithm = \"esprit\"\n";
    assert!(ssbloc(a.path(), cfg, &["run"]).status.success());
    assert!(ssbloc(b.path(), cfg, &["run", "--jobs", "1"]).status.success());
    for f in ["trajectory.csv", "summary.json"] {
        assert_eq!(
            fs::read(a.path().join("out").join(f)).unwrap(),
            fs::read(b.path().join("out").join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "seed = 1\n", &["run", "--seed", "99"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&dir.path().join("out/summary.json"))["seed"], 99);
}

#[test]
fn t_max_below_t_base_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "[scenario]\nregime = \"adaptive\"\nt_max_s = 0.05\n", &["run"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("t_max_s") && err.contains("t_base_s"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn empty_seed_list_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "[sweep]\nseeds = []\n", &["sweep"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn unknown_algorithm_lists_allowed_values() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "[scenario]\nalgorithm = \"capon\"\n", &["run"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for name in ["capon", "music", "esprit", "root_music"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn unreadable_config_and_zero_jobs_exit_2() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ssbloc"))
        .args(["run", "--config"])
        .arg(dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = ssbloc(dir.path(), "", &["run", "--jobs", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("out"), "not a directory").unwrap();
    let o = ssbloc(dir.path(), "", &["calibrate"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn sweep_covers_every_mode_and_selection_replays() {
    let dir = TempDir::new().unwrap();
    let cfg = "seed = 11\n[sweep]\nruns = 1\nenergy_budget_j = 500.0\nrms_tolerance_m = 1.0\n";
    let o = ssbloc(dir.path(), cfg, &["sweep"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let (header, rows) = csv_rows(&dir.path().join("out/dse.csv"));
    assert_eq!(
        header,
        [
            "mode_id",
            "cpu_mhz",
            "regime",
            "algorithm",
            "rms_x_m",
            "rms_y_m",
            "worst_x_m",
            "worst_y_m",
            "mean_energy_j"
        ]
    );
    assert_eq!(rows.len(), 8);

    let f = |row: &Vec<String>, name: &str| -> f64 { row[col(&header, name)].parse().unwrap() };
    let replay: Vec<u64> = rows
        .iter()
        .filter(|r| f(r, "mean_energy_j") <= 500.0 && f(r, "rms_x_m").max(f(r, "rms_y_m")) <= 1.0)
        .map(|r| r[col(&header, "mode_id")].parse().unwrap())
        .collect();
    let summary = json(&dir.path().join("out/summary.json"));
    let selected: Vec<u64> = summary["selection"]["selected_modes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(selected, replay);
    assert_eq!(summary["seeds"], serde_json::json!([11]));
}

#[test]
fn compare_reports_baseline_energy_and_savings() {
    let dir = TempDir::new().unwrap();
    let cfg = "[compare]\nalgorithms = [\"music\"]\nruns = 1\n";
    let o = ssbloc(dir.path(), cfg, &["compare"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let (header, rows) = csv_rows(&dir.path().join("out/compare.csv"));
    assert_eq!(rows.len(), 2);
    let g = |row: &Vec<String>, name: &str| row[col(&header, name)].clone();
    assert_eq!(g(&rows[0], "regime"), "fixed_baseline");
    assert_eq!(g(&rows[1], "regime"), "adaptive");
    let baseline: f64 = g(&rows[0], "mean_energy_j").parse().unwrap();
    assert!((baseline - 627.22).abs() < 1e-6, "{baseline}");
    let savings: f64 = g(&rows[1], "savings").parse().unwrap();
    assert!((0.0..1.0).contains(&savings), "{savings}");
    let pct: f64 = g(&rows[1], "savings_pct").parse().unwrap();
    assert!((pct - 100.0 * savings).abs() < 1e-9);
    assert!(json(&dir.path().join("out/summary.json"))["mean_savings_pct"].is_number());
}

#[test]
fn calibrate_recovers_reference_counts() {
    let dir = TempDir::new().unwrap();
    let o = ssbloc(dir.path(), "", &["calibrate"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = json(&dir.path().join("out/calibration.json"));
    assert_eq!(report["mode0_executions"], serde_json::json!({"music": 1004, "esprit": 1235, "root_music": 1147}));
    let e = report["mode0_e_exec_j"]["music"].as_f64().unwrap();
    assert!((e * 1004.0 - 627.22).abs() < 1e-9);
    let modes = report["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 8);
}
