use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_gridramsey");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("GRIDRAMSEY_THREADS")
        .output()
        .unwrap()
}

fn run_env(args: &[&str], threads: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env("GRIDRAMSEY_THREADS", threads)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn arrows_yes_and_no() {
    let o = run(&["arrows", "--G", "complete:6", "--F", "cycle:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["outcome"], "yes");
    let o = run(&[
        "arrows",
        "--G",
        "complete:5",
        "--F",
        "cycle:4",
        "--json",
        "-",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/arrows_k5_c4.json"));
}

#[test]
fn arrows_budget_is_an_undecided_failure() {
    let o = run(&[
        "arrows",
        "--G",
        "complete:6",
        "--F",
        "cycle:4",
        "--budget",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["outcome"], "budget_exceeded");
}

#[test]
fn witness_size_matches_golden() {
    let o = run(&["witness-size", "--n", "100", "--n", "1000", "--n", "10000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/witness_size.json"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["embed"][..],
        &["arrows", "--G", "complete:5", "--F", "wheel:3"],
        &["witness-size", "--n", "10", "--override", "zeta=1"],
        &["gen", "--host", "gnp:10,2.0"],
        &["nonsense"],
        &["experiment", "--host", "grid:0,3"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn bad_thread_env_is_a_usage_error() {
    let o = run_env(&["witness-size", "--n", "10"], "zero");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("GRIDRAMSEY_THREADS"));
    let o = run(&["--threads", "0", "witness-size", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = run(&["colour", "--host", "file:/no/such/graph.txt"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn gen_round_trips_through_a_file_host() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let o = run(&["gen", "--host", "gnp:200,0.1,5", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let o = run(&["gen", "--host", "gnp:200,0.1,5"]);
    assert_eq!(stdout(&o), text);
    let o = run(&[
        "colour",
        "--host",
        &format!("file:{p}"),
        "--strategy",
        "all-red",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let edges = text.lines().count() as u64 - 1;
    let r = json(&o);
    assert_eq!(r["edges"], edges);
    assert_eq!(r["red"], edges);
}

#[test]
fn colour_writes_majority_class() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maj.txt");
    let o = run(&[
        "colour",
        "--host",
        "complete:8",
        "--strategy",
        "random",
        "--seed",
        "3",
        "--c4",
        "--majority-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    assert!(2 * (lines - 1) >= 28);
}

#[test]
fn verify_props_runs_selected_properties() {
    let o = run(&[
        "verify-props",
        "--host",
        "gnp:300,0.5,1",
        "--properties",
        "i,v",
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let r = json(&o);
    assert!(r.to_string().contains("i_degrees"));
    assert!(!r.to_string().contains("\"vi\""));
}

#[test]
fn regularity_and_classify_run() {
    let o = run(&[
        "regularity",
        "--host",
        "gnp:300,0.3,2",
        "--eps",
        "0.3",
        "--trials",
        "50",
        "--alpha-prime",
        "0.5",
    ]);
    assert!(
        matches!(o.status.code(), Some(0) | Some(1)),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    json(&o);
    let o = run(&[
        "classify",
        "--host",
        "grid:4,4",
        "--bipartition",
        "--eps-prime",
        "0.15",
        "--alpha",
        "0.15",
        "--limit",
        "5",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    for line in out.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn grid_embeds_into_itself_from_the_cli() {
    let o = run(&[
        "--preset",
        "paper",
        "--override",
        "alpha=0.15",
        "--override",
        "eps_prime=0.15",
        "--override",
        "delta=0.5",
        "--override",
        "c=0.5",
        "embed",
        "--host",
        "grid:5,5",
        "--alpha-prime",
        "1",
        "--mode",
        "fixed:5",
        "--bipartition",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = json(&o);
    assert_eq!(r["valid"], true);
}

#[test]
fn experiment_reports_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = |k: &str| dir.path().join(k).to_str().unwrap().to_string();
    let args = |out: &str| {
        vec![
            "experiment",
            "--host",
            "gnp:1500,0.2",
            "--seeds",
            "1,2,3",
            "--json",
        ]
        .into_iter()
        .map(String::from)
        .chain([out.to_string()])
        .collect::<Vec<_>>()
    };
    for (threads, name) in [("1", "a.json"), ("8", "b.json")] {
        let a = args(&path(name));
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        let o = run_env(&a, threads);
        assert!(
            matches!(o.status.code(), Some(0) | Some(1)),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let a = std::fs::read(path("a.json")).unwrap();
    let b = std::fs::read(path("b.json")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn experiment_config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"host": "empty:30", "seeds": [4]}"#).unwrap();
    let o = run(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--host",
        "complete:5",
        "--seeds",
        "1,2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["config"]["host"], "empty:30");
    assert_eq!(r["trials"].as_array().unwrap().len(), 1);
    assert_eq!(r["trials"][0]["failure_stage"], "dense_pair");
    std::fs::write(&cfg, r#"{"hots": "empty:30"}"#).unwrap();
    let o = run(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
