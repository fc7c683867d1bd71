use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensorstat"))
        .args(args)
        .env("TENSORSTAT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn decompose_a1_fourth_power() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["decompose", "--algebra", "A1", "--rep", "1", "--power", "4"]));
    assert_eq!(v["algebra"], "A1");
    let entries: Vec<(i64, String)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0][0].as_i64().unwrap(), e[1].as_str().unwrap().to_owned()))
        .collect();
    assert_eq!(entries, vec![(0, "2".into()), (2, "3".into()), (4, "1".into())]);
}

#[test]
fn decompose_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["decompose", "--algebra", "A2", "--rep", "1,0", "--power", "3", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "lambda_1,lambda_2,multiplicity\n0,0,1\n1,1,2\n3,0,1\n");
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["decompose", "--algebra", "B2", "--rep", "0,1", "--power", "5"];
    let first = run(dir.path(), &args);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let fresh = run(dir.path(), &[&args[..], &["--no-cache"]].concat());
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["decompose", "--algebra", "A1", "--rep", "2", "--power", "3"];
    let good = run(dir.path(), &args);
    for f in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(f.unwrap().path(), "{not json").unwrap();
    }
    assert_eq!(run(dir.path(), &args).stdout, good.stdout);
}

#[test]
fn measure_a1_square() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(
        dir.path(),
        &["measure", "--algebra", "A1", "--rep", "1", "--power", "2", "--t", "0", "--format", "json"],
    ));
    let entries = v["entries"].as_array().unwrap();
    let p: Vec<(i64, f64)> = entries.iter().map(|e| (e[0][0].as_i64().unwrap(), e[1].as_f64().unwrap())).collect();
    assert_eq!(p.len(), 2);
    assert_eq!(p[0].0, 0);
    assert!((p[0].1 - 0.25).abs() < 1e-15);
    assert_eq!(p[1].0, 2);
    assert!((p[1].1 - 0.75).abs() < 1e-15);
}

#[test]
fn measure_csv_probabilities_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["measure", "--algebra", "G2", "--rep", "1,0", "--power", "6", "--t", "0.2,0.1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("lambda_1,lambda_2,probability"));
    let total: f64 = lines.map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn rate_point_json() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(dir.path(), &["asymptotic", "--algebra", "A1", "--rep", "1", "--power", "4", "--xi", "0.25"]));
    let x = v["x"][0].as_f64().unwrap();
    assert!((x - 0.5f64.atanh()).abs() < 1e-12, "x = {x}");
}

#[test]
fn limit_compare_reports_tv() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(
        dir.path(),
        &["limit-compare", "--algebra", "A1", "--rep", "1", "--power", "200", "--law", "plancherel"],
    ));
    assert_eq!(v["law"], "plancherel");
    let tv = v["tv"].as_f64().unwrap();
    assert!(tv > 0.0 && tv < 0.05, "tv = {tv}");
}

#[test]
fn mismatched_law_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["limit-compare", "--algebra", "A1", "--rep", "1", "--power", "20", "--law", "gaussian"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sampling_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["sample", "--algebra", "A2", "--rep", "1,0", "--power", "8", "--chains", "600", "--seed", "11"];
    let one = run(dir.path(), &[&base[..], &["--threads", "1"]].concat());
    let many = run(dir.path(), &[&base[..], &["--threads", "5"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn trajectories_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("paths.jsonl");
    let o = run(
        dir.path(),
        &[
            "sample", "--algebra", "A1", "--rep", "1", "--power", "5", "--chains", "7", "--trajectories",
            path.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 7);
    for l in &lines {
        let steps = l["steps"].as_array().unwrap();
        assert_eq!(steps.len(), 6);
        assert_eq!(steps[0][0], 0);
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(
        dir.path(),
        &["decompose", "--algebra", "A1", "--rep", "1", "--power", "2", "-o", path.to_str().unwrap()],
    );
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["algebra"], "A1");
}

#[test]
fn pde_and_hook_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["pde-check", "--algebra", "A2", "--rep", "1,0", "--grid", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    let o = run(dir.path(), &["hook-check", "--max-rank", "2", "--max-power", "6", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);
}

#[test]
fn selftest_subset() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["selftest", "--only", "2,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" PASS ")).count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(dir.path(), args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["decompose", "--algebra", "Q7", "--rep", "1"]), Some(1));
    assert_eq!(code(&["decompose", "--algebra", "A2", "--rep", "1"]), Some(1));
    assert_eq!(code(&["decompose", "--algebra", "A2", "--rep", "-1,0"]), Some(1));
    assert_eq!(code(&["asymptotic", "--algebra", "A1", "--rep", "1", "--xi", "0.6"]), Some(2));
    assert_eq!(code(&["selftest", "--only", "13"]), Some(1));
}
