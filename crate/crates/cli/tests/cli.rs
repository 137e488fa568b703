use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const PAPER_GRAPH: &str = "p edge 8 8\ne 1 5\ne 1 6\ne 2 5\ne 2 6\ne 2 7\ne 2 8\ne 4 7\ne 4 8\n";

fn divcover(args: &[&str]) -> Output {
    divcover_env(args, None)
}

fn divcover_env(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_divcover"));
    cmd.args(args).env_remove("DIVCOVER_SEED");
    if let Some(s) = seed {
        cmd.env("DIVCOVER_SEED", s);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, algorithm: &str, budget: u64, k: usize) -> String {
    fs::write(dir.join("g.graph"), PAPER_GRAPH).unwrap();
    let path = dir.join("cfg.json");
    let cfg = serde_json::json!({
        "algorithm": algorithm,
        "k": k,
        "mu": 2,
        "lambda": 2,
        "budget": budget,
        "seed": 3,
        "target_diversity": 8,
        "graph_path": "g.graph",
    });
    fs::write(&path, cfg.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn enumerate_lists_nine_covers() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.graph");
    fs::write(&g, PAPER_GRAPH).unwrap();
    let out = divcover(&["enumerate", "--graph", g.to_str().unwrap(), "--k", "4"]);
    assert!(out.status.success());
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 9);
    assert!(lines
        .iter()
        .any(|v| v["vertices"] == serde_json::json!([1, 2, 4])));
}

#[test]
fn verify_lemmas_passes() {
    let out = divcover(&["verify-lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn oracle_reports_optimum_and_local_check() {
    let out = divcover(&[
        "oracle",
        "--graph",
        "builtin:paper",
        "--k",
        "4",
        "--mu",
        "2",
        "--check",
        "{1,2,7,8}",
        "--check",
        "{2,4,5,6}",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["optimal_diversity"], 8);
    assert_eq!(v["optimal_count"], 1);
    assert_eq!(v["checked_population"]["is_strict_local_optimum"], true);
}

#[test]
fn run_is_seeded_and_env_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "one_mu_one_mu", 100_000, 4);
    let args = ["run", "--config", cfg.as_str(), "--start", "lemma3_pair"];
    let a = divcover(&args);
    let b = divcover(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["record"]["seed"], 3);
    assert_eq!(v["population"]["diversity"], 8);

    let c = divcover_env(&args, Some("99"));
    let v: Value = serde_json::from_str(&stdout(&c)).unwrap();
    assert_eq!(v["record"]["seed"], 99);
}

#[test]
fn experiment_writes_csv_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mu_plus_one", 200, 4);
    let run = |workers: &str, name: &str| {
        let out = dir.path().join(name);
        let o = divcover(&[
            "experiment",
            "--config",
            &cfg,
            "--trials",
            "6",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
            "--start",
            "lemma3_pair",
            "--p0",
            "exact-paper-instance",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read_to_string(out).unwrap(), stdout(&o))
    };
    let (one, summary) = run("1", "a.csv");
    let (many, _) = run("3", "b.csv");
    assert_eq!(one, many);
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(
        lines[1],
        "seed,algorithm,mu,lambda,k,hitting_time,final_diversity,iterations_run,accepted_count"
    );
    assert_eq!(lines.len(), 8);
    assert!(lines[2].starts_with("3,mu_plus_one,2,2,4,inf,6,200,"));
    let v: Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(v["finite"], 0);
    assert!(v["dominance"]["dominated"].is_null());
}

#[test]
fn estimate_prints_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "one_mu_one_mu", 10, 4);
    let out = divcover(&["estimate", "--config", &cfg, "--samples", "20000"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let f = v["frequency"].as_f64().unwrap();
    assert!(
        (f - 1.0 / 640.0).abs() < 5.0 * (1.0 / 640.0 / 20000.0f64).sqrt(),
        "{f}"
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    fs::write(&bad, "p edge 3 1\ne 1 4\n").unwrap();
    let o = divcover(&["enumerate", "--graph", bad.to_str().unwrap(), "--k", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let cfg = write_config(dir.path(), "mu_plus_one", 10, 2);
    assert_eq!(divcover(&["run", "--config", &cfg]).status.code(), Some(2));

    let o = divcover(&[
        "oracle",
        "--graph",
        "builtin:extended:12",
        "--k",
        "16",
        "--mu",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let cfg = write_config(dir.path(), "mu_plus_one", 10, 4);
    assert_eq!(
        divcover_env(&["run", "--config", &cfg], Some("x"))
            .status
            .code(),
        Some(4)
    );
    assert_eq!(divcover(&["run"]).status.code(), Some(4));
}
