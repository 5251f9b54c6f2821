use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("shubinlab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

fn run(out: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shubinlab"))
        .arg("--output-dir")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ordering_table_matches_golden() {
    let out = scratch("ordering");
    let r = run(&out, &["ordering-table", "--max", "2"]);
    assert_eq!(r.status.code(), Some(0));
    let golden = include_str!("golden/ordering_table_max2.csv");
    assert_eq!(String::from_utf8(r.stdout).unwrap(), golden);
    assert_eq!(std::fs::read_to_string(out.join("ordering-table.csv")).unwrap(), golden);
}

#[test]
fn ordering_suite_passes() {
    let out = scratch("verify-ordering");
    let r = run(&out, &["verify", "--suite", "ordering"]);
    assert_eq!(r.status.code(), Some(0));
    let report = json(out.join("verify-ordering.json"));
    assert_eq!(report["pass"], true);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        for key in ["name", "paper_eq", "residual", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(report["config"]["N"], 128);
}

#[test]
fn verify_report_is_deterministic_and_exit_code_follows_it() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    let ra = run(&a, &["verify", "--suite", "cayley", "--seed", "11"]);
    let rb = run(&b, &["verify", "--suite", "cayley", "--seed", "11"]);
    let ja = std::fs::read_to_string(a.join("verify-cayley.json")).unwrap();
    let jb = std::fs::read_to_string(b.join("verify-cayley.json")).unwrap();
    assert_eq!(ja.replace(a.to_str().unwrap(), ""), jb.replace(b.to_str().unwrap(), ""));
    let pass = json(a.join("verify-cayley.json"))["pass"].as_bool().unwrap();
    assert_eq!(ra.status.code(), Some(if pass { 0 } else { 1 }));
    assert_eq!(ra.status.code(), rb.status.code());
}

#[test]
fn usage_errors_exit_2() {
    let out = scratch("usage");
    assert_eq!(run(&out, &["wigner", "--signal", "square"]).status.code(), Some(2));
    assert_eq!(run(&out, &["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(&out, &["-N", "100", "ordering-table"]).status.code(), Some(2));
    assert_eq!(run(&out, &["wigner", "--signal", "gaussian", "--tau", "1.5"]).status.code(), Some(2));
}

#[test]
fn wigner_writes_table_and_marginals() {
    let out = scratch("wigner");
    let r = run(&out, &["wigner", "--signal", "gaussian", "--tau", "0.5"]);
    assert_eq!(r.status.code(), Some(0));
    let s = json(out.join("wigner-gaussian-tau0.5-marginals.json"));
    assert!(s["max_imag"].as_f64().unwrap() <= 1e-10);
    assert!(s["marginal_x_residual"].as_f64().unwrap() <= 1e-6);
    let table = std::fs::read_to_string(out.join("wigner-gaussian-tau0.5.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("x,p,re,im"));
    assert_eq!(lines.count(), 128 * 128);
}

#[test]
fn two_gaussian_shows_cross_terms() {
    let out = scratch("two-gaussian");
    assert_eq!(run(&out, &["wigner", "--signal", "two-gaussian", "--tau", "0.5"]).status.code(), Some(0));
    let table = std::fs::read_to_string(out.join("wigner-two-gaussian-tau0.5.csv")).unwrap();
    let mut peak = 0.0f64;
    let mut between = 0.0f64;
    for line in table.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let m = v[2].hypot(v[3]);
        peak = peak.max(m);
        if v[0].abs() < 0.2 {
            between = between.max(m);
        }
    }
    assert!(between > 0.1 * peak, "between {between} peak {peak}");
}

#[test]
fn covariance_scan_rows() {
    let out = scratch("scan");
    assert_eq!(run(&out, &["covariance-scan"]).status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("covariance-scan.csv")).unwrap();
    let residual = |g: &str, q: &str| -> Option<f64> {
        csv.lines().find(|l| l.starts_with(&format!("{g},{q},"))).and_then(|l| l.split(',').nth(2)?.parse().ok())
    };
    assert_eq!(csv.lines().next(), Some("generator,quantization,residual,note"));
    assert!(residual("J", "BJ").unwrap() <= 1e-5);
    assert!(residual("V(1)", "BJ").unwrap() >= 1e-2);
    assert!(residual("J", "tau=0.5").unwrap() <= 1e-5);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let out = scratch("config");
    std::fs::create_dir_all(&out).unwrap();
    let cfg = out.join("run.cfg");
    std::fs::write(&cfg, "N = 64\nseed = 3\n").unwrap();
    let r = run(&out, &["--config", cfg.to_str().unwrap(), "--seed", "5", "verify", "--suite", "ordering"]);
    assert_eq!(r.status.code(), Some(0));
    let report = json(out.join("verify-ordering.json"));
    assert_eq!(report["config"]["N"], 64);
    assert_eq!(report["config"]["seed"], 5);
}
