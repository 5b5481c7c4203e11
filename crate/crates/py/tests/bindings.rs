use gridramsey_py::*;
use pyo3::exceptions::PyValueError;
use pyo3::Python;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn arrows_outcomes() {
    assert_eq!(
        parse(&arrows("complete:6", "cycle:4", None, true).unwrap())["outcome"],
        "yes"
    );
    let r = parse(&arrows("complete:5", "cycle:4", None, true).unwrap());
    assert_eq!(r["outcome"]["no"]["witness"].as_array().unwrap().len(), 10);
    let e = arrows("complete:5", "wheel:3", None, true).unwrap_err();
    Python::initialize();
    Python::attach(|py| assert!(e.is_instance_of::<PyValueError>(py)));
}

#[test]
fn hosts_and_grids() {
    let (n, edges) = host_edges("gnp:400,0.1", 2).unwrap();
    assert_eq!(n, 400);
    assert!(edges.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(host_edges("gnp:400,0.1", 2).unwrap().1, edges);
    assert_eq!(grid_edges(3, 4).unwrap().len(), 17);
    assert!(grid_edges(0, 4).is_err());
}

#[test]
fn constants_and_witnesses() {
    let chain = parse(&constants(0.5, 0.01, "paper", None).unwrap());
    assert_eq!(chain["alpha"], 0.025);
    assert_eq!(first_moment_threshold(1e6, 0.5e-3).unwrap(), Some(11));
    let ws = parse(&witness_size(vec![100, 1000], 0.5, "desk", None).unwrap());
    assert_eq!(ws[0]["C"], 448.0);
    assert!(constants(0.5, 0.01, "nonsense", None).is_err());
}

#[test]
fn props_selection() {
    let r = parse(&verify_props("gnp:300,0.3", None, 1, "i,v").unwrap());
    let ids: Vec<&str> = r
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["property"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["i_degrees", "i_codegrees", "v"]);
}

#[test]
fn experiment_runs_under_the_interpreter() {
    let config = r#"{"host": "grid:5,5", "strategy": "all-red", "preset": "paper", "alpha_prime": 1.0,
        "overrides": {"alpha": 0.15, "eps_prime": 0.15, "delta": 0.5, "c": 0.5},
        "mode": "fixed:5", "pair": {"kind": "bipartition"}, "seeds": [1]}"#;
    Python::initialize();
    let (a, b) = Python::attach(|py| {
        (
            experiment(py, config).unwrap(),
            experiment(py, config).unwrap(),
        )
    });
    assert_eq!(a, b);
    assert_eq!(parse(&a)["median_s"], 5.0);
    Python::attach(|py| assert!(experiment(py, "{\"bogus\": 1}").is_err()));
}
