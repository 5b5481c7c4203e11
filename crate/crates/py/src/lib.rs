//! Python bindings. Reports cross the boundary as the same byte-stable JSON
//! the command-line tool writes; `json.loads` them on the Python side.

use std::collections::BTreeMap;

use gridramsey::embed::{resolve_preset, Preset};
use gridramsey::error::Error;
use gridramsey::experiment::{run_experiment, ExperimentConfig, HostSpec};
use gridramsey::graph::{grid_graph, GridSpec};
use gridramsey::props::{
    first_moment_threshold as threshold, run_properties, Property, PropertyRun,
};
use gridramsey::ramsey::{
    arrows_exhaustive, default_density_constant, parse_pattern, size_ramsey_witness, ArrowsOptions,
};
use gridramsey::report::to_stable_json;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_)
        | Error::EdgeListParse { .. }
        | Error::TooLarge(_)
        | Error::Precondition(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn preset(name: &str) -> PyResult<Preset> {
    name.parse().map_err(|e: Error| py_err(e))
}

/// Edges of the host described by `spec` (e.g. `"gnp:1000,0.05"`), sorted, as `(u, v)` with `u < v`.
#[pyfunction]
#[pyo3(signature = (spec, seed=0))]
pub fn host_edges(spec: &str, seed: u64) -> PyResult<(usize, Vec<(usize, usize)>)> {
    let host: HostSpec = spec.parse().map_err(py_err)?;
    let g = host.build(seed).map_err(py_err)?;
    Ok((g.n(), g.edges().collect()))
}

/// Edges of the `s × t` grid; vertex `(r, c)` has index `r·t + c`.
#[pyfunction]
pub fn grid_edges(s: usize, t: usize) -> PyResult<Vec<(usize, usize)>> {
    Ok(grid_graph(GridSpec::new(s, t).map_err(py_err)?)
        .edges()
        .collect())
}

/// Decides `G → F` exhaustively; both arguments are pattern specs such as `"complete:6"`.
#[pyfunction]
#[pyo3(signature = (host, pattern, budget=None, symmetry=true))]
pub fn arrows(host: &str, pattern: &str, budget: Option<u64>, symmetry: bool) -> PyResult<String> {
    let g = parse_pattern(host).map_err(py_err)?;
    let f = parse_pattern(pattern).map_err(py_err)?;
    let r = arrows_exhaustive(&g, &f, ArrowsOptions { budget, symmetry }).map_err(py_err)?;
    to_stable_json(&r).map_err(py_err)
}

/// The resolved constant chain for `alpha_prime` at density `p`.
#[pyfunction]
#[pyo3(signature = (alpha_prime, p, preset_name="paper", overrides=None))]
pub fn constants(
    alpha_prime: f64,
    p: f64,
    preset_name: &str,
    overrides: Option<BTreeMap<String, f64>>,
) -> PyResult<String> {
    let chain = resolve_preset(
        preset(preset_name)?,
        alpha_prime,
        p,
        &overrides.unwrap_or_default(),
    )
    .map_err(py_err)?;
    to_stable_json(&chain).map_err(py_err)
}

/// Smallest `s` beyond which `G(n, p)` a.a.s. has no `s × s` grid, or `None`.
#[pyfunction]
pub fn first_moment_threshold(n: f64, p: f64) -> PyResult<Option<u64>> {
    threshold(n, p).map_err(py_err)
}

/// Host size witnesses for grid sides `ns`, with `c` from the chain and `C = 7/δ³` unless given.
#[pyfunction]
#[pyo3(signature = (ns, alpha_prime=0.5, preset_name="desk", big_c=None))]
pub fn witness_size(
    ns: Vec<u64>,
    alpha_prime: f64,
    preset_name: &str,
    big_c: Option<f64>,
) -> PyResult<String> {
    let chain =
        resolve_preset(preset(preset_name)?, alpha_prime, 1.0, &BTreeMap::new()).map_err(py_err)?;
    let big_c = big_c.unwrap_or_else(|| default_density_constant(chain.delta));
    let ws = ns
        .iter()
        .map(|&n| size_ramsey_witness(n, chain.c, big_c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    to_stable_json(&ws).map_err(py_err)
}

/// Property checks on a host; `properties` is a comma list of ids or `"all"`.
#[pyfunction]
#[pyo3(signature = (spec, p=None, seed=0, properties="all"))]
pub fn verify_props(spec: &str, p: Option<f64>, seed: u64, properties: &str) -> PyResult<String> {
    let host: HostSpec = spec.parse().map_err(py_err)?;
    let g = host.build(seed).map_err(py_err)?;
    let p = p.unwrap_or_else(|| host.density(&g));
    let run = PropertyRun {
        properties: Property::parse_list(properties).map_err(py_err)?,
        seed,
        ..PropertyRun::default()
    };
    let reports = run_properties(&g, p, &run).map_err(py_err)?;
    to_stable_json(&reports).map_err(py_err)
}

/// Runs an experiment from a JSON config (same keys as the `experiment --config` file).
/// The GIL is released while the pipeline runs.
#[pyfunction]
pub fn experiment(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let config: ExperimentConfig = serde_json::from_str(config_json)
        .map_err(|e| PyValueError::new_err(format!("config: {e}")))?;
    py.detach(|| run_experiment(&config).and_then(|r| to_stable_json(&r)))
        .map_err(py_err)
}

#[pymodule]
fn gridramsey_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(host_edges, m)?)?;
    m.add_function(wrap_pyfunction!(grid_edges, m)?)?;
    m.add_function(wrap_pyfunction!(arrows, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(first_moment_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(witness_size, m)?)?;
    m.add_function(wrap_pyfunction!(verify_props, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    Ok(())
}
