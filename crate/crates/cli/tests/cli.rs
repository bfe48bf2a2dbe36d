use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bench")).args(args).output().unwrap()
}

fn run_to(out: &Path, extra: &[&str]) -> String {
    let mut args = vec!["run", "--synthetic", "n=120,p=4,noise=0.1", "--passes", "3", "--out"];
    args.push(out.to_str().unwrap());
    args.extend_from_slice(extra);
    let o = bench(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::read_to_string(out).unwrap()
}

#[test]
fn run_writes_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_to(&dir.path().join("a.csv"), &["--seeds", "0,1"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("run_id,scheme,schedule,seed,t,effective_passes,objective,iterate_norm")
    );
    // seven curves, two seeds, three evaluations
    assert_eq!(lines.clone().count(), 7 * 2 * 3);
    assert!(lines.any(|l| l.contains(",W,proposed,1,360,3,")));
}

#[test]
fn output_is_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(&dir.path().join("a.csv"), &["--seeds", "0,1,2", "--threads", "1"]);
    let b = run_to(&dir.path().join("b.csv"), &["--seeds", "0,1,2", "--threads", "4"]);
    assert_eq!(a, b);
}

#[test]
fn explicit_schemes_and_steps() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_to(
        &dir.path().join("a.csv"),
        &["--schemes", "0,W2", "--step", "general:3,2", "--step", "proposed", "--lambda", "0.01"],
    );
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert!(rows[0].starts_with("0,0,\"general:3,2\",0,120,1,"));
    assert!(rows.last().unwrap().starts_with("1,W2,proposed,0,360,3,"));
}

#[test]
fn radius_reports_both_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&[
        "run", "--synthetic", "n=50,p=3", "--passes", "1", "--radius", "2", "--out",
        dir.path().join("a.csv").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("whole space") && err.contains("radius 2"), "{err}");
}

#[test]
fn libsvm_input() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.txt");
    fs::write(&data, "+1 1:1 2:0.5\n-1 1:-1 2:0.25\n1 1:2\n0 2:-1\n").unwrap();
    let out = dir.path().join("a.csv");
    let o = bench(&["run", "--data", data.to_str().unwrap(), "--passes", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 1 + 7 * 2);
}

#[test]
fn bad_inputs_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let out = out.to_str().unwrap();
    let data = dir.path().join("bad.txt");
    fs::write(&data, "+1 1:1\nabc 1:2\n").unwrap();
    let o = bench(&["run", "--data", data.to_str().unwrap(), "--out", out]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad label at line 2"));

    for extra in [
        vec!["--schemes", "Q"],
        vec!["--step", "general:0.4,1"],
        vec!["--lambda", "-1"],
        vec!["--passes", "0"],
    ] {
        let mut args = vec!["run", "--synthetic", "n=20,p=2", "--out", out];
        args.extend(extra.iter().copied());
        assert!(!bench(&args).status.success(), "{extra:?}");
    }
    assert!(!bench(&["run", "--out", out]).status.success());
}

#[test]
fn fstar_writes_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fstar.csv");
    let o = bench(&["fstar", "--synthetic", "n=100,p=3", "--passes", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,method,iterations"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = fields[0].parse().unwrap();
    assert!(value > 0.0 && value < 1.0);
    assert_eq!(fields[2], "2000");
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim().parse::<f64>().unwrap(), value);

    let o = bench(&["fstar", "--synthetic", "n=100,p=3", "--multiplier", "5", "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn verify_passes_on_small_problem() {
    let o = bench(&["verify", "--synthetic", "n=200,p=4,noise=0.1", "--passes", "4", "--seeds", "0,1,2", "--sequences", "50"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
}
