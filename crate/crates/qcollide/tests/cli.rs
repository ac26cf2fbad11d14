use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qcollide::output::format_real;
use serde_json::Value;
use tempfile::TempDir;

fn qcollide(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcollide"))
        .current_dir(dir)
        .env_remove("QCOLLIDE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn summary(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SMALL_GRID: &[&str] = &["--set", "theta_points=5", "--set", "phi_points=5", "--n-steps", "60"];

#[test]
fn headers_are_exact() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("phase-diagram", "gamma,delta,nm,class"),
        ("coherence-diagram", "theta,phi,nm,class"),
        ("correlation-trace", "n,distance,bound"),
        ("thermo-trace", "n,delta_s,beta_q,heat,heat_dia,heat_coh,mutual_info"),
        ("heat-alignment", "n,heat,delta_distance"),
    ];
    for (cmd, expected) in cases {
        let out_name = format!("{cmd}.csv");
        let mut args = vec![
            cmd,
            "-o",
            &out_name,
            "--set",
            "gamma_points=2",
            "--set",
            "delta_points=2",
        ];
        args.extend_from_slice(SMALL_GRID);
        let out = qcollide(dir.path(), &args);
        assert!(out.status.success(), "{cmd}: {}", stderr(&out));
        let (header, rows) = read_csv(&dir.path().join(&out_name));
        assert_eq!(header, expected);
        assert!(!rows.is_empty());
        let width = expected.split(',').count();
        assert!(rows.iter().all(|r| r.len() == width));
    }
}

#[test]
fn numeric_fields_have_seventeen_digits() {
    let dir = TempDir::new().unwrap();
    assert!(qcollide(dir.path(), &["thermo-trace", "--n-steps", "20"])
        .status
        .success());
    let (_, rows) = read_csv(&dir.path().join("thermo-trace.csv"));
    for field in rows.iter().flatten() {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
    }
}

#[test]
fn phase_diagram_classifies_anchor_points() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "pd.cfg",
        "experiment=phase-diagram\n# coarse axes; anchors are merged in\ngamma_points=2\ndelta_points=2\ntheta_points=7\nphi_points=7\n",
    );
    let out = qcollide(dir.path(), &["phase-diagram", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&dir.path().join("phase-diagram.csv"));
    let class_at = |g: f64, d: f64| {
        rows.iter()
            .find(|r| r[0] == format_real(g) && r[1] == format_real(d))
            .map(|r| r[3].clone())
            .unwrap()
    };
    assert_eq!(class_at(PI / 14.0, PI / 6.0), "Markovian");
    assert_eq!(class_at(PI / 14.0, PI / 9.0), "NonMarkovian");
    for r in &rows {
        let (g, d) = (num(&r[0]), num(&r[1]));
        assert!(g > 0.0 && g <= PI / 2.0 && d > 0.0 && d <= PI / 2.0);
        assert!(num(&r[2]) >= 0.0);
    }
    let s = summary(&dir.path().join("phase-diagram.json"));
    let counts = &s["classification_counts"];
    let total = counts["Markovian"].as_u64().unwrap() + counts["NonMarkovian"].as_u64().unwrap();
    assert_eq!(total as usize, rows.len());
}

#[test]
fn correlation_trace_stays_under_bound() {
    let dir = TempDir::new().unwrap();
    let out = qcollide(
        dir.path(),
        &["correlation-trace", "--correlation", "quantum", "--xi", "0.855"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&dir.path().join("correlation-trace.csv"));
    assert_eq!(rows.len(), 201);
    let bound = num(&rows[0][2]);
    let max = rows.iter().map(|r| num(&r[1])).fold(0.0, f64::max);
    assert!(max > 0.0 && max <= bound + 1e-10);
    assert_eq!(num(&rows[200][0]), 200.0);
}

#[test]
fn classical_trace_reports_witness() {
    let dir = TempDir::new().unwrap();
    let out = qcollide(
        dir.path(),
        &[
            "correlation-trace",
            "--correlation",
            "classical",
            "--set",
            "theta_points=5",
            "--set",
            "phi_points=5",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&dir.path().join("correlation-trace.json"));
    assert!(s["results"]["witness"].as_f64().unwrap() <= 1e-7);
    assert_eq!(s["classification_counts"]["Markovian"], 1);
}

#[test]
fn thermo_trace_without_coupling_is_zero() {
    let dir = TempDir::new().unwrap();
    let out = qcollide(dir.path(), &["thermo-trace", "--gamma", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = read_csv(&dir.path().join("thermo-trace.csv"));
    assert_eq!(rows.len(), 200);
    for r in &rows {
        for col in [1, 3, 4, 5] {
            assert_eq!(num(&r[col]), 0.0);
        }
    }
}

#[test]
fn heat_alignment_summary() {
    let dir = TempDir::new().unwrap();
    let out = qcollide(dir.path(), &["heat-alignment", "--delta", "pi/9"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&dir.path().join("heat-alignment.json"));
    assert!(s["results"]["sign_consistency"].as_f64().unwrap() >= 0.9);
    assert_eq!(s["classification_counts"]["NonMarkovian"], 1);
}

#[test]
#[allow(clippy::approx_constant)]
fn summary_echoes_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.cfg",
        "p=0.4\nphi1=3.14159\ntheta_points=3\nphi_points=3\nn_steps=10\n",
    );
    let out = qcollide(
        dir.path(),
        &[
            "coherence-diagram",
            "--config",
            cfg.to_str().unwrap(),
            "-o",
            "out/coh.csv",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let s = summary(&dir.path().join("out/coh.json"));
    assert_eq!(s["config"]["p"].as_f64(), Some(0.4));
    assert_eq!(s["config"]["phi1"].as_f64(), Some(3.14159));
    assert_eq!(s["config"]["n_steps"], 10);
    assert_eq!(s["config"]["experiment"], "coherence-diagram");
    assert!(s["version"].as_str().unwrap().starts_with("qcollide "));
    assert!(s["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(
        s["classification_counts"]["Markovian"].as_u64().unwrap()
            + s["classification_counts"]["NonMarkovian"].as_u64().unwrap(),
        9
    );
}

#[test]
fn config_errors_exit_2_with_one_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.cfg", "gamma=3.0\nbogus=1\n");
    let out = qcollide(dir.path(), &["phase-diagram", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(err.contains("line 1") && err.contains("line 2"), "{err}");

    let clash = write(dir.path(), "clash.cfg", "experiment=thermo-trace\n");
    let out = qcollide(dir.path(), &["phase-diagram", "--config", clash.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = qcollide(dir.path(), &["thermo-trace", "--set", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_qcollide"))
        .current_dir(dir.path())
        .env("QCOLLIDE_THREADS", "zero")
        .args(["thermo-trace", "--n-steps", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_violation_exits_3() {
    let dir = TempDir::new().unwrap();
    // coherent auxiliary qubit has no inverse temperature
    let out = qcollide(dir.path(), &["thermo-trace", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr(&out).trim_end().lines().count(), 1);
}

#[test]
fn io_errors_exit_4() {
    let dir = TempDir::new().unwrap();
    let out = qcollide(dir.path(), &["thermo-trace", "--config", "missing.cfg"]);
    assert_eq!(out.status.code(), Some(4));
    let blocker = write(dir.path(), "file", "");
    let target = blocker.join("x.csv");
    let out = qcollide(
        dir.path(),
        &["thermo-trace", "--n-steps", "5", "-o", target.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_qcollide"))
            .current_dir(dir.path())
            .env("QCOLLIDE_THREADS", threads)
            .args(["coherence-diagram", "--p", "0.8", "-o", out])
            .args(SMALL_GRID)
            .output()
            .unwrap();
        assert!(o.status.success());
        std::fs::read(dir.path().join(out)).unwrap()
    };
    assert_eq!(run("1", "a.csv"), run("4", "b.csv"));
}
