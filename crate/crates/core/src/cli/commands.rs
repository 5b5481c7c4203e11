use std::fs::File;
use std::io::{BufReader, BufWriter};

use serde::Serialize;
use serde_json::Value;

use super::{Cli, Command, HostArgs};
use crate::bitset::VertexSet;
use crate::embed::{
    embed_grid, resolve_preset, validate_embedding, ConstantChain, EmbedOptions, EmbedOutcome,
    PairSource,
};
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, ExperimentConfig, TrialReport};
use crate::graph::{read_edge_list, write_edge_list, Graph};
use crate::props::{run_properties, PreconditionPolicy, Property, PropertyReport, PropertyRun};
use crate::quality::{EdgeClassParams, EdgeClassifier};
use crate::ramsey::{
    arrows_exhaustive, colour_edges, default_density_constant, loglog_slope, majority_subgraph,
    monochromatic_c4_count, parse_pattern, size_ramsey_witness, verify_escape, ArrowsOptions,
    ArrowsOutcome, Colour, SizeRamseyWitness, Strategy,
};
use crate::random::derive_seed;
use crate::regularity::{
    dense_pair_from_partition, regular_partition, DensePair, PartitionConfig, PartitionReport,
};
use crate::report::{emit_report, to_stable_json_line, write_output};

/// Runs the command; `Ok(false)` means its primary assertion failed.
pub(super) fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Gen { host, out } => gen(host, out),
        Command::Colour {
            host,
            strategy,
            c4,
            majority_out,
            json,
        } => colour(host, strategy, *c4, majority_out.as_deref(), json),
        Command::VerifyProps {
            host,
            delta,
            delta_pairs,
            pairs,
            properties,
            enforce,
            codegree_limit,
            json,
        } => {
            let run = PropertyRun {
                properties: Property::parse_list(properties)?,
                delta: *delta,
                delta_pairs: *delta_pairs,
                pairs: *pairs,
                policy: if *enforce {
                    PreconditionPolicy::Enforce
                } else {
                    PreconditionPolicy::Record
                },
                codegree_limit: *codegree_limit,
                seed: host.seed,
            };
            verify_props(host, &run, json)
        }
        Command::Regularity {
            host,
            eps,
            t0,
            tmax,
            refine_rounds,
            trials,
            alpha_prime,
            json,
        } => {
            let config = PartitionConfig {
                t0: *t0,
                tmax: *tmax,
                lambda: None,
                refine_rounds: *refine_rounds,
                trials: *trials,
                seed: host.seed,
            };
            regularity(host, *eps, &config, *alpha_prime, json)
        }
        Command::Classify {
            host,
            a,
            b,
            bipartition,
            eps_prime,
            alpha,
            nu,
            gamma,
            dense_trials,
            limit,
            out,
        } => {
            let (g, p) = load(host)?;
            let (a, b) = if *bipartition {
                bipartition_sides(&g)?
            } else {
                let a = a
                    .as_deref()
                    .ok_or_else(|| Error::param("--a is required without --bipartition"))?;
                let b = b
                    .as_deref()
                    .ok_or_else(|| Error::param("--b is required without --bipartition"))?;
                (parse_ids(g.n(), a)?, parse_ids(g.n(), b)?)
            };
            let params = EdgeClassParams {
                eps_prime: *eps_prime,
                alpha: *alpha,
                p,
                nu: *nu,
                gamma: *gamma,
                dense_trials: *dense_trials,
                seed: host.seed,
            };
            classify(&g, a, b, params, *limit, out)
        }
        Command::Embed {
            host,
            alpha_prime,
            mode,
            bipartition,
            strategy,
            restarts,
            randomized,
            json,
        } => {
            let opts = EmbedOptions {
                mode: *mode,
                seed: host.seed,
                restarts: *restarts,
                pair: if *bipartition {
                    PairSource::Bipartition
                } else {
                    PairSource::Regularity
                },
                randomized: *randomized,
                ..EmbedOptions::default()
            };
            embed(cli, host, *alpha_prime, strategy.as_deref(), &opts, json)
        }
        Command::Arrows {
            g,
            f,
            budget,
            no_symmetry,
            json,
        } => arrows(g, f, *budget, !*no_symmetry, json),
        Command::WitnessSize {
            n,
            alpha_prime,
            big_c,
            json,
        } => witness_size(cli, n, *alpha_prime, *big_c, json),
        Command::Experiment {
            config,
            host,
            seeds,
            strategy,
            mode,
            timing,
            json,
        } => {
            let mut base = ExperimentConfig {
                preset: cli.preset,
                overrides: cli.override_map(),
                timing: *timing,
                ..ExperimentConfig::default()
            };
            if let Some(h) = host {
                base.host = h.clone();
            }
            if let Some(s) = seeds {
                base.seeds = s.clone();
            }
            if let Some(s) = strategy {
                base.strategy = s.clone();
            }
            if let Some(m) = mode {
                base.mode = *m;
            }
            let config = match config {
                Some(path) => merge_config(
                    &base,
                    &serde_json::from_reader(BufReader::new(File::open(path)?))
                        .map_err(|e| Error::param(format!("config {}: {e}", path.display())))?,
                )?,
                None => base,
            };
            experiment(cli, &config, json)
        }
    }
}

fn load(host: &HostArgs) -> Result<(Graph, f64)> {
    let g = host.host.build(host.seed)?;
    let p = host.p.unwrap_or_else(|| host.host.density(&g));
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!(
            "density {p} outside (0, 1]; pass --p"
        )));
    }
    Ok((g, p))
}

/// Parses `0-9,12,20-29` into a vertex set.
fn parse_ids(n: usize, s: &str) -> Result<VertexSet> {
    let mut ids = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::param(format!("bad vertex range {tok:?}")))
        };
        match tok.split_once('-') {
            Some((lo, hi)) => ids.extend(num(lo)?..=num(hi)?),
            None => ids.push(num(tok)?),
        }
    }
    VertexSet::from_ids(n, ids)
}

fn bipartition_sides(g: &Graph) -> Result<(VertexSet, VertexSet)> {
    let colours = g
        .bipartition()
        .ok_or_else(|| Error::param("host is not bipartite"))?;
    let side = |c: u8| VertexSet::from_ids(g.n(), (0..g.n()).filter(|&v| colours[v] == c));
    Ok((side(0)?, side(1)?))
}

fn gen(host: &HostArgs, out: &str) -> Result<bool> {
    let g = host.host.build(host.seed)?;
    if out == "-" {
        write_edge_list(&g, std::io::stdout().lock())?;
    } else {
        write_edge_list(&g, BufWriter::new(File::create(out)?))?;
    }
    Ok(true)
}

#[derive(Serialize)]
struct ColourReport {
    host: String,
    n: usize,
    edges: usize,
    strategy: Strategy,
    red: usize,
    blue: usize,
    majority_colour: Option<Colour>,
    majority_edges: usize,
    monochromatic_c4: Option<u64>,
}

fn colour(
    host: &HostArgs,
    strategy: &str,
    c4: bool,
    majority_out: Option<&std::path::Path>,
    json: &str,
) -> Result<bool> {
    let g = host.host.build(host.seed)?;
    let strategy = Strategy::parse(strategy, host.seed)?;
    let colouring = colour_edges(&g, &strategy);
    let majority = if g.edge_count() > 0 {
        Some(majority_subgraph(&g, &colouring)?)
    } else {
        None
    };
    if let (Some(path), Some((h, _))) = (majority_out, &majority) {
        write_edge_list(h, BufWriter::new(File::create(path)?))?;
    }
    let report = ColourReport {
        host: host.host.to_string(),
        n: g.n(),
        edges: g.edge_count(),
        strategy,
        red: colouring.count(Colour::Red),
        blue: colouring.count(Colour::Blue),
        majority_colour: majority.as_ref().map(|m| m.1),
        majority_edges: majority.as_ref().map_or(0, |m| m.0.edge_count()),
        monochromatic_c4: c4.then(|| monochromatic_c4_count(&g, &colouring)),
    };
    emit_report(&report, json)?;
    Ok(true)
}

#[derive(Serialize)]
struct PropsReport {
    host: String,
    n: usize,
    p: f64,
    run: PropertyRun,
    pass: bool,
    reports: Vec<PropertyReport>,
}

fn verify_props(host: &HostArgs, run: &PropertyRun, json: &str) -> Result<bool> {
    let (g, p) = load(host)?;
    let reports = run_properties(&g, p, run)?;
    let pass = reports.iter().all(|r| r.pass);
    emit_report(
        &PropsReport {
            host: host.host.to_string(),
            n: g.n(),
            p,
            run: run.clone(),
            pass,
            reports,
        },
        json,
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct RegularityReport {
    host: String,
    partition: PartitionReport,
    dense_pair: Option<DensePair>,
    dense_pair_error: Option<String>,
}

fn regularity(
    host: &HostArgs,
    eps: f64,
    config: &PartitionConfig,
    alpha_prime: Option<f64>,
    json: &str,
) -> Result<bool> {
    let (g, p) = load(host)?;
    let partition = regular_partition(&g, p, eps, config)?;
    let (dense_pair, dense_pair_error) = match alpha_prime {
        Some(ap) => match dense_pair_from_partition(&partition, ap) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, None),
    };
    let ok = partition.regular && dense_pair_error.is_none();
    emit_report(
        &RegularityReport {
            host: host.host.to_string(),
            partition,
            dense_pair,
            dense_pair_error,
        },
        json,
    )?;
    Ok(ok)
}

fn classify(
    g: &Graph,
    a: VertexSet,
    b: VertexSet,
    params: EdgeClassParams,
    limit: Option<usize>,
    out: &str,
) -> Result<bool> {
    let c = EdgeClassifier::new(g, a, b, params)?;
    let mut edges = Vec::new();
    'outer: for w in c.b().iter() {
        for z in g.neighbours(w).intersection(c.a()).iter() {
            if limit.is_some_and(|l| edges.len() >= l) {
                break 'outer;
            }
            edges.push((w, z));
        }
    }
    for &(w, z) in &edges {
        if c.in_r(w, z)? {
            c.in_q(w, z)?;
        }
    }
    let wanted: std::collections::HashSet<(usize, usize)> = edges.into_iter().collect();
    let mut text = String::new();
    for rec in c
        .records()
        .into_iter()
        .filter(|r| wanted.contains(&(r.u, r.v)))
    {
        text.push_str(&to_stable_json_line(&rec)?);
        text.push('\n');
    }
    write_output(&text, out)?;
    Ok(true)
}

#[derive(Serialize)]
struct EmbedReport {
    host: String,
    n: usize,
    p: f64,
    majority_colour: Option<Colour>,
    chain: ConstantChain,
    outcome: EmbedOutcome,
    valid: bool,
}

fn embed(
    cli: &Cli,
    host: &HostArgs,
    alpha_prime: f64,
    strategy: Option<&str>,
    opts: &EmbedOptions,
    json: &str,
) -> Result<bool> {
    let (g, p) = load(host)?;
    let (h, colour) = match strategy {
        Some(s) => {
            let colouring = colour_edges(&g, &Strategy::parse(s, derive_seed(host.seed, 1))?);
            let (h, c) = majority_subgraph(&g, &colouring)?;
            (h, Some(c))
        }
        None => (g, None),
    };
    let chain = resolve_preset(cli.preset, alpha_prime, p, &cli.override_map())?;
    if cli.verbose > 0 {
        for w in &chain.warnings {
            eprintln!("warning: {w}");
        }
    }
    let outcome = embed_grid(&h, p, &chain, opts)?;
    if cli.verbose > 0 {
        for s in &outcome.log.stages {
            eprintln!(
                "[{}] {}: {}",
                if s.ok { "ok" } else { "fail" },
                s.stage,
                s.detail
            );
        }
    }
    let valid = outcome
        .embedding
        .as_ref()
        .is_some_and(|e| validate_embedding(&h, e).valid);
    emit_report(
        &EmbedReport {
            host: host.host.to_string(),
            n: h.n(),
            p,
            majority_colour: colour,
            chain,
            outcome,
            valid,
        },
        json,
    )?;
    Ok(valid)
}

fn load_small(spec: &str) -> Result<Graph> {
    if spec.contains(':') && !std::path::Path::new(spec).exists() {
        return parse_pattern(spec);
    }
    read_edge_list(BufReader::new(File::open(spec)?))
}

fn arrows(g: &str, f: &str, budget: Option<u64>, symmetry: bool, json: &str) -> Result<bool> {
    let host = load_small(g)?;
    let pattern = parse_pattern(f)?;
    let report = arrows_exhaustive(&host, &pattern, ArrowsOptions { budget, symmetry })?;
    if let ArrowsOutcome::No { witness } = &report.outcome {
        verify_escape(&host, &pattern, witness)?;
    }
    emit_report(&report, json)?;
    Ok(report.decided())
}

#[derive(Serialize)]
struct WitnessReport {
    witnesses: Vec<SizeRamseyWitness>,
    /// Least-squares slope of ln(expected edges) against ln n.
    exponent: Option<f64>,
}

fn witness_size(
    cli: &Cli,
    ns: &[u64],
    alpha_prime: f64,
    big_c: Option<f64>,
    json: &str,
) -> Result<bool> {
    // c does not depend on p; any p resolves the chain
    let chain = resolve_preset(cli.preset, alpha_prime, 1.0, &cli.override_map())?;
    let big_c = big_c
        .or_else(|| chain.extra("C"))
        .unwrap_or_else(|| default_density_constant(chain.delta));
    let witnesses: Vec<SizeRamseyWitness> = ns
        .iter()
        .map(|&n| size_ramsey_witness(n, chain.c, big_c))
        .collect::<Result<_>>()?;
    let points: Vec<(f64, f64)> = witnesses
        .iter()
        .map(|w| (w.n as f64, w.expected_edges))
        .collect();
    let exponent = if points.len() >= 2 {
        loglog_slope(&points).ok()
    } else {
        None
    };
    emit_report(
        &WitnessReport {
            witnesses,
            exponent,
        },
        json,
    )?;
    Ok(true)
}

/// Overlays the fields of `file` on `base`; unknown keys are rejected.
fn merge_config(base: &ExperimentConfig, file: &Value) -> Result<ExperimentConfig> {
    let Value::Object(over) = file else {
        return Err(Error::param("config must be a JSON object"));
    };
    let mut merged =
        match serde_json::to_value(base).map_err(|e| Error::Serialization(e.to_string()))? {
            Value::Object(m) => m,
            _ => unreachable!("config serializes to an object"),
        };
    for (k, v) in over {
        merged.insert(k.clone(), v.clone());
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::param(format!("config: {e}")))
}

fn experiment(cli: &Cli, config: &ExperimentConfig, json: &str) -> Result<bool> {
    let report = run_experiment(config)?;
    if cli.verbose > 0 {
        for t in &report.trials {
            eprintln!("{}", trial_line(t));
        }
    }
    emit_report(&report, json)?;
    Ok(report.all_succeeded())
}

fn trial_line(t: &TrialReport) -> String {
    match (t.s_achieved, &t.failure_stage) {
        (Some(s), _) => format!("seed {}: {s}x{s} grid", t.seed),
        (None, Some(stage)) => format!("seed {}: failed at {stage}", t.seed),
        (None, None) => format!("seed {}: no grid", t.seed),
    }
}
