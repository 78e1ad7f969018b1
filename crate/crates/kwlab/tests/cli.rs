use std::path::Path;
use std::process::{Command, Output};

fn kwlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kwlab")).args(args).output().expect("spawn kwlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("cfg.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn clifford_suite_passes() {
    let o = kwlab(&["verify", "clifford"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "clifford");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&kwlab(&["verify", "nonsense"])), 2);
    assert_eq!(code(&kwlab(&["frobnicate"])), 2);
    assert_eq!(code(&kwlab(&["verify", "algebra", "--tolerance-scale", "0"])), 2);
    assert_eq!(code(&kwlab(&["spectral", "exclusion", "--case", "case7"])), 2);
    assert_eq!(code(&kwlab(&["verify", "operator", "--background", "sphere"])), 2);
}

#[test]
fn model_report_is_deterministic() {
    let args = ["verify", "model", "--m", "2", "--samples", "100", "--seed", "7"];
    let (a, b) = (kwlab(&args), kwlab(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["phi_bound"]["pass"].as_bool().unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_kwlab"))
            .args(["verify", "flow-smoke", "--seed", "3"])
            .env("KWLAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = kwlab(&["verify", "algebra", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["suite"], "algebra");
}

#[test]
fn cfl_violation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"N": 16, "dt": 0.4, "steps": 10, "init": {"kind": "random", "amplitude": 0.01}}"#);
    let o = kwlab(&["flow", "run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("suggested dt"));
}

#[test]
fn bad_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"N": 8, "dt": 0.01, "steps": "many"}"#);
    let o = kwlab(&["flow", "run", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("steps"));
    assert_eq!(code(&kwlab(&["flow", "run", "--config", "/nonexistent/cfg.json"])), 2);
}

#[test]
fn zero_initial_data_gives_a_zero_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"N": 8, "dt": 0.01, "steps": 12, "init": {"kind": "zero"}}"#);
    let o = kwlab(&["flow", "run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("trace.csv")).unwrap();
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers[0], "step");
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 13);
    for row in &rows {
        for (h, v) in headers.iter().zip(row.iter()).skip(2) {
            assert!(v.is_empty() || v.parse::<f64>().unwrap() == 0.0, "{h} = {v}");
        }
    }
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn abelian_flow_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"N": 12, "dt": 0.02, "steps": 200, "init": {"kind": "abelian", "amplitude": 0.1}}"#);
    let o = kwlab(&["flow", "run", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"]["status"], "completed");
    assert!(v["monotone"].as_bool().unwrap());
}

#[test]
fn spectral_ode_reports_admissibility() {
    let dir = tempfile::tempdir().unwrap();
    let o = kwlab(&["spectral", "ode", "--lambda", "1", "--k", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["admissible"], true);
    assert!(dir.path().join("ode.csv").exists());
}
