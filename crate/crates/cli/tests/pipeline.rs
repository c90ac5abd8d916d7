use std::path::{Path, PathBuf};
use std::process::Command;

use modmax_cli::error::CliError;
use modmax_cli::gen::cmd_gen;
use modmax_cli::record::RECORD_HEADER;
use modmax_cli::report::{cmd_report, read_records, ReportOptions};
use modmax_cli::run::{cmd_run, evaluate, RunConfig};
use modmax_cli::solve::{cmd_solve, SolveOptions};

const TWO_TRIANGLES: &str = "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n";
const K3: &str = "0 1\n1 2\n2 0\n";
const C4: &str = "0 1\n1 2\n2 3\n3 0\n";

fn corpus(dir: &Path) -> PathBuf {
    for (name, text) in [("k3.txt", K3), ("two_triangles.txt", TWO_TRIANGLES), ("c4.txt", C4)] {
        std::fs::write(dir.join(name), text).unwrap();
    }
    let cfg = dir.join("run.json");
    std::fs::write(
        &cfg,
        r#"{"networks": ["k3.txt", "two_triangles.txt", "c4.txt"],
            "algorithms": ["cnm", "louvain", "leiden", "combo"],
            "record_timing": false}"#,
    )
    .unwrap();
    cfg
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modmax"))
}

#[test]
fn three_network_corpus_gives_twelve_consistent_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = cmd_run(&corpus(dir.path()), &dir.path().join("out")).unwrap();
    assert_eq!(out.records.len(), 12);
    for r in &out.records {
        let q_star = r.q_star.unwrap();
        assert!(r.q_alg <= q_star + 1e-9, "{r:?}");
        if r.gop == Some(1.0) {
            assert_eq!((r.ami, r.rmi, r.ecs), (Some(1.0), Some(1.0), Some(1.0)), "{r:?}");
        }
        assert!(!r.baseline_unavailable);
    }
    let two: Vec<_> = out.records.iter().filter(|r| r.network == "two_triangles").collect();
    assert!(two.iter().all(|r| r.q_star == Some(0.5) && r.gop == Some(1.0) && r.k_alg == 2));
    let c4 = out.networks.iter().find(|n| n.network == "c4").unwrap();
    assert_eq!(c4.optima_count, Some(3));
}

#[test]
fn report_consumes_run_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    cmd_run(&corpus(dir.path()), &out_dir).unwrap();
    let header = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap(), RECORD_HEADER.join(","));
    let records = read_records(&out_dir.join("records.csv")).unwrap();
    assert_eq!(records.len(), 12);
    let summary = cmd_report(&out_dir.join("records.csv"), &dir.path().join("rep"), &ReportOptions::default()).unwrap();
    assert!(summary.success_rates.iter().all(|r| (0.0..=1.0).contains(&r.success_rate)));
    assert_eq!(summary.suboptimal_records, 0);
    assert!(summary.time_bins_written);
    for f in ["success_rates.csv", "scatter.csv", "distributions.csv", "time_bins.csv", "summary.json"] {
        assert!(dir.path().join("rep").join(f).exists(), "{f}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep/summary.json")).unwrap()).unwrap();
    assert_eq!(json["schema_version"], "1");
}

#[test]
fn report_rejects_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    std::fs::write(&path, "network,algorithm,seed\nx,cnm,0\n").unwrap();
    let err = cmd_report(&path, &dir.path().join("rep"), &ReportOptions::default()).unwrap_err();
    assert!(matches!(err, CliError::Schema { .. }), "{err}");
}

#[test]
fn empty_algorithm_list_is_rejected() {
    let cfg = RunConfig::from_json(r#"{"networks": ["a.txt"], "algorithms": []}"#).unwrap();
    assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    let cfg = RunConfig::from_json(r#"{"networks": ["a.txt"], "algorithms": ["paris"]}"#).unwrap();
    assert!(matches!(cfg.validate(), Err(CliError::UnknownAlgorithm(_))));
}

#[test]
fn unreadable_network_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("k3.txt"), K3).unwrap();
    let cfg = RunConfig::from_json(r#"{"networks": ["k3.txt", "missing.txt"], "algorithms": ["louvain"]}"#).unwrap();
    let out = evaluate(&cfg, dir.path()).unwrap();
    assert_eq!(out.records.len(), 1);
    assert!(out.networks.iter().any(|n| n.network == "missing" && n.error.is_some()));
}

#[test]
fn node_limited_baseline_is_marked_unavailable() {
    let dir = tempfile::tempdir().unwrap();
    let karate = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/karate.txt");
    std::fs::copy(karate, dir.path().join("karate.txt")).unwrap();
    let cfg = RunConfig::from_json(
        r#"{"networks": ["karate.txt"], "algorithms": ["cnm"], "solver": {"node_limit": 1}}"#,
    )
    .unwrap();
    let out = evaluate(&cfg, dir.path()).unwrap();
    let r = &out.records[0];
    assert!(r.baseline_unavailable);
    assert_eq!((r.q_star, r.gop, r.ami), (None, None, None));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = corpus(dir.path());
    cmd_run(&cfg, &dir.path().join("a")).unwrap();
    cmd_run(&cfg, &dir.path().join("b")).unwrap();
    for f in ["records.csv", "records.json", "networks.csv"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn best_of_seeds_keeps_one_record() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("two.txt"), TWO_TRIANGLES).unwrap();
    let many = RunConfig::from_json(r#"{"networks": ["two.txt"], "algorithms": ["leiden"], "seeds": [3, 1, 2]}"#).unwrap();
    assert_eq!(evaluate(&many, dir.path()).unwrap().records.len(), 3);
    let best = RunConfig::from_json(
        r#"{"networks": ["two.txt"], "algorithms": ["leiden"], "seeds": [3, 1, 2], "best_of_seeds": true}"#,
    )
    .unwrap();
    let recs = evaluate(&best, dir.path()).unwrap().records;
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].seed, 3);
}

#[test]
fn solve_two_triangles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two_triangles.txt");
    std::fs::write(&path, TWO_TRIANGLES).unwrap();
    let exact = cmd_solve(&path, "exact", &SolveOptions::default()).unwrap();
    assert_eq!(exact.exit_code, 0);
    assert_eq!(exact.json["q_lb"], 0.5);
    assert_eq!(exact.json["q_ub"], 0.5);
    assert_eq!(exact.json["proven_optimal"], true);
    let opts = SolveOptions {
        seed: 1,
        ..SolveOptions::default()
    };
    let louvain = cmd_solve(&path, "louvain", &opts).unwrap();
    assert_eq!(louvain.json["q"], 0.5);
    assert_eq!(louvain.json["schema_version"], "1");
    let bnb = cmd_solve(&path, "bnb:0.1", &SolveOptions::default()).unwrap();
    assert!(bnb.exit_code == 3 || bnb.json["gap"].as_f64().unwrap() <= 0.1);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.txt");
    std::fs::write(&path, TWO_TRIANGLES).unwrap();
    let ok = binary().args(["solve", path.to_str().unwrap(), "exact"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(json["q_lb_exact"], "1/2");

    let unknown = binary().args(["solve", path.to_str().unwrap(), "paris"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("louvain"));

    let karate = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/karate.txt");
    let limited = binary()
        .args(["solve", karate.to_str().unwrap(), "exact", "--node-limit", "1"])
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(3));

    let missing = binary().args(["solve", "/nonexistent/g.txt", "exact"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn gen_writes_instances_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let specs: Vec<String> = (0..10)
        .map(|i| format!(r#"{{"n": 30, "d_min": 2, "d_max": 6, "k_min": 5, "k_max": 10, "mu": 0.1, "seed": {i}}}"#))
        .collect();
    let path = dir.path().join("specs.json");
    std::fs::write(&path, format!("[{}]", specs.join(","))).unwrap();
    let a = cmd_gen(&path, &dir.path().join("a"), 0.5).unwrap();
    assert_eq!(a.instances, 10);
    assert!(a.warnings.is_empty());
    cmd_gen(&path, &dir.path().join("b"), 0.5).unwrap();
    let mut files: Vec<_> = std::fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files.len(), 21);
    for f in files {
        let x = std::fs::read(dir.path().join("a").join(&f)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(&f)).unwrap();
        assert_eq!(x, y, "{f:?}");
    }
}

#[test]
fn gen_mixing_rules() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("specs.json");
    let spec = |mu: f64| format!(r#"{{"n": 30, "d_min": 2, "d_max": 6, "k_min": 5, "k_max": 10, "mu": {mu}}}"#);
    std::fs::write(&path, format!(r#"{{"specs": [{}, {}]}}"#, spec(0.1), spec(0.99))).unwrap();
    let s = cmd_gen(&path, &dir.path().join("out"), 0.5).unwrap();
    assert_eq!(s.warnings.len(), 1);
    assert!(s.warnings[0].starts_with("instance 1"));
    std::fs::write(&path, format!("[{}, {}]", spec(0.1), spec(1.0))).unwrap();
    match cmd_gen(&path, &dir.path().join("bad"), 0.5).unwrap_err() {
        CliError::Instance { index, .. } => assert_eq!(index, 1),
        e => panic!("{e}"),
    }
}
