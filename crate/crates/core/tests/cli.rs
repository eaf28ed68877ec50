use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn relq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relq"))
        .args(args)
        .env_remove("RELQ_THREADS")
        .output()
        .expect("run relq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn verify_passes_for_small_and_large_models() {
    for m in ["2", "64"] {
        let out = relq(&["verify", "--M", m, "--format", "json"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "M = {m}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["model"]["M"].as_u64().unwrap().to_string(), m);
        let checks = v["checks"].as_array().unwrap();
        assert!(checks.len() >= 20);
        assert!(checks.iter().all(|c| c["pass"] == true));
    }
}

#[test]
fn corrupted_wrap_fails_verification() {
    let out = relq(&["verify", "--M", "6", "--corrupt-wrap", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let ccr = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "ccr")
        .unwrap();
    assert_eq!(ccr["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ccr"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--M", "0"][..],
        &["spectrum", "--M", "-3"],
        &["spectrum", "--tol", "nonsense=1e-3"],
        &["spectrum", "--tol", "spectrum=-1"],
        &["spectrum", "--format", "xml"],
        &["trajectory", "--M", "4", "--i1", "5"],
        &["twopoint", "--M", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(relq(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tolerance_breach_exits_one() {
    let out = relq(&["spectrum", "--M", "20", "--tol", "spectrum=1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("k,root,"));
}

#[test]
fn spectrum_csv_for_two_states() {
    let out = relq(&["spectrum", "--M", "2", "--t", "0,0.7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,root,eig@0,eig@0.7,deviation");
    assert_eq!(lines.len(), 3);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for (line, want) in lines[1..].iter().zip([-half, half]) {
        let fields: Vec<f64> = line
            .split(',')
            .skip(1)
            .map(|f| f.parse().unwrap())
            .collect();
        assert!((fields[0] - want).abs() < 1e-12);
        assert!((fields[1] - want).abs() < 1e-12);
        assert!(fields[3] < 1e-12);
        // 17 significant digits
        let mantissa = line.split(',').nth(1).unwrap().split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17);
    }
}

#[test]
fn negative_times_are_accepted() {
    let out = relq(&["spectrum", "--M", "3", "--t", "-1.5,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("k,root,eig@-1.5,eig@2,"));
}

#[test]
fn trajectory_degenerate_endpoint() {
    let out = relq(&[
        "trajectory",
        "--M",
        "3",
        "--i1",
        "3",
        "--dphi",
        "0.4",
        "--t",
        "0,1,2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,q1,p1,q2,p2,I1,dphi,H,degenerate");
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(f[4].parse::<f64>().unwrap(), 0.0);
        assert_eq!(f[6], "");
        assert!(f[7].parse::<f64>().unwrap().abs() < 1e-13);
        assert_eq!(f[8], "true");
    }
}

#[test]
fn trajectory_json_round_trip() {
    let out = relq(&[
        "trajectory",
        "--M",
        "10",
        "--i1",
        "2.5",
        "--dphi",
        "1.1",
        "--t",
        "-3,-1,0,2,5,9",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for row in v["data"]["rows"].as_array().unwrap() {
        assert!((row["I1"].as_f64().unwrap() - 2.5).abs() < 1e-12);
        assert!((row["dphi"].as_f64().unwrap() - 1.1).abs() < 1e-12);
        assert!(row["H"].as_f64().unwrap().abs() < 1e-13);
        assert_eq!(row["degenerate"], false);
    }
}

#[test]
fn propagator_equal_times_is_identity() {
    let out = relq(&["propagator", "--M", "4", "--from", "0.3", "--to", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,l,re,im,abs2");
    assert_eq!(lines.len(), 1 + 16 + 1);
    for line in &lines[1..17] {
        let f: Vec<&str> = line.split(',').collect();
        let re: f64 = f[2].parse().unwrap();
        let want = if f[0] == f[1] { 1.0 } else { 0.0 };
        assert!((re - want).abs() < 1e-12);
    }
    assert!(lines[17].starts_with("unitarity,,,,"));
}

#[test]
fn propagator_unitarity_row() {
    let out = relq(&["propagator", "--M", "32", "--from", "-0.4", "--to", "2.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let dev: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!(dev < 1e-11);
}

#[test]
fn twopoint_reports_both_phases() {
    let out = relq(&[
        "twopoint", "--M", "9", "--from", "0.2", "--to", "1.7", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let row = &v["data"]["rows"][0];
    assert!((row["magnitude"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((row["phase"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!(row["reference_phase"].is_f64());
}

#[test]
fn output_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = relq(&[
            "verify",
            "--M",
            "7",
            "--seed",
            "42",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["data"]["seed"], 42);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "M = 5\nt = [0.0, 2.0]\nformat = \"json\"\n[tol]\nspectrum = 1e-9\n",
    )
    .unwrap();
    let out = relq(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["model"]["M"], 5);
    assert_eq!(v["checks"][0]["tolerance"], 1e-9);
    assert_eq!(v["data"]["t"], serde_json::json!([0.0, 2.0]));

    let out = relq(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--M",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 4);

    fs::write(&cfg, "M = 5\nunknown = 1\n").unwrap();
    assert_eq!(
        relq(&["spectrum", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        relq(&["spectrum", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn thread_cap_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_relq"))
            .args(["propagator", "--M", "12"])
            .env("RELQ_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}
