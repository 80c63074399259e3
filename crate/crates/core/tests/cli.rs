use std::path::Path;
use std::process::{Command, Output};

fn canonkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canonkern")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("suite.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const QUICK: &str = "checks = [\"classical.correction_free\", \"duality\", \"linear.momentum_space\"]\n";

#[test]
fn passing_selection_exits_zero_and_writes_versioned_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{QUICK}seed = 11\nreport.timestamp = \"2024-01-01T00:00:00Z\"\n"));
    let out = dir.path().join("report.json");
    let o = canonkern(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["version"], 1);
    assert_eq!(report["seed"], 11);
    assert_eq!(report["timestamp"], "2024-01-01T00:00:00Z");
    let first = &report["reports"][0];
    let residual = first["sup_residual"].as_str().unwrap();
    // 15 significant digits in scientific notation
    let mantissa = residual.split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 15, "{residual}");
}

#[test]
fn unattainable_tolerance_exits_one_and_lists_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{QUICK}tolerance.all = 1e-20\n"));
    let out = dir.path().join("report.json");
    let o = canonkern(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!report["summary"]["failed"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAILED"));
}

#[test]
fn malformed_config_exits_two_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["params.m = [", "params.hbar = -1.0", "no.such.key = 3"] {
        let cfg = write_config(dir.path(), text);
        let o = canonkern(&["run", "--config", &cfg]);
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{text}");
    }
    let o = canonkern(&["run", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "checks = [\"classical.invariance\"]\nsuite.invariance.samples = 10\n");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(canonkern(&["run", "--config", &cfg, "--out", a.to_str().unwrap(), "--jobs", "1"]).status.code(), Some(0));
    assert_eq!(canonkern(&["run", "--config", &cfg, "--out", b.to_str().unwrap(), "--jobs", "4"]).status.code(), Some(0));
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn kernel_dump_has_header_and_grid_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let o = canonkern(&[
        "dump", "--kind", "kernel", "--family", "quadratic", "--theta", "1.5708", "--grid", "50", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 2501);
    assert_eq!(text.lines().next(), Some("q,Q,Re,Im"));
    assert!(!text.contains('\r'));
}

#[test]
fn eigenfunction_and_phase_map_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let ef = dir.path().join("ai.csv");
    let o = canonkern(&[
        "dump", "--kind", "eigenfunction", "--family", "linear", "--energy", "0", "--grid", "101", "--lo", "-7.9",
        "--hi", "3.2", "--out", ef.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let values: Vec<(f64, f64)> = std::fs::read_to_string(ef)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(values.len(), 101);
    let right: Vec<f64> = values.iter().filter(|v| v.0 > 0.0).map(|v| v.1).collect();
    assert!(right.windows(2).all(|w| w[1] < w[0]));

    let pm = dir.path().join("pm.csv");
    let o = canonkern(&[
        "dump", "--kind", "phase-map", "--family", "sinusoidal", "--mu", "3", "--grid", "8", "--lo", "-1", "--hi", "1",
        "--out", pm.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(pm).unwrap();
    assert_eq!(text.lines().next(), Some("q,p,Q,P"));
    let h = |q: f64, p: f64| 0.5 * p * p + 0.25 * (2.0 * q).cos();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((h(v[0], v[1]) - h(v[2], v[3])).abs() < 1e-9, "{line}");
    }
}

#[test]
fn dump_reports_bad_requests_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = canonkern(&["dump", "--kind", "kernel", "--family", "quadratic", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = dir.path().join("no/such/dir/k.csv");
    let o = canonkern(&["dump", "--kind", "kernel", "--family", "linear", "--nu", "0.5", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/dir"));
}

#[test]
fn list_checks_names_every_criterion() {
    let o = canonkern(&["list-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("quadratic.addition_theorem"));
    for c in 1..=10 {
        assert!(text.contains(&format!("criterion {c:>2}")), "{c}");
    }
}
