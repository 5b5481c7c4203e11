//! The majority-colour pipeline: sample or load a host, colour it, keep the
//! larger colour class and embed a grid into it.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{
    embed_grid, resolve_preset, validate_embedding, CertificateLog, EmbedOptions, PairSource,
    Preset, SizeMode,
};
use crate::error::{Error, Result};
use crate::graph::{grid_graph, read_edge_list, Graph, GridSpec};
use crate::ramsey::{colour_edges, majority_subgraph, Colour, Strategy};
use crate::random::{derive_seed, gnp, RandomModel};

/// Where a host graph comes from; written `gnp:n,p[,seed]`, `grid:s,t`,
/// `complete:n`, `empty:n`, or a path to an edge-list file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum HostSpec {
    /// `G(n, p)`; without a seed the trial seed is used.
    Gnp {
        n: usize,
        p: f64,
        seed: Option<u64>,
    },
    Grid {
        s: usize,
        t: usize,
    },
    Complete {
        n: usize,
    },
    Empty {
        n: usize,
    },
    File {
        path: String,
    },
}

impl FromStr for HostSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::param(format!(
                "bad host spec {s:?} (gnp:n,p[,seed] | grid:s,t | complete:n | empty:n | <file>)"
            ))
        };
        let Some((kind, args)) = s.split_once(':') else {
            return Ok(HostSpec::File {
                path: s.to_string(),
            });
        };
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let int = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match (kind, parts.as_slice()) {
            ("gnp", [n, p]) | ("gnp", [n, p, _]) => Ok(HostSpec::Gnp {
                n: int(n)?,
                p: p.parse().map_err(|_| bad())?,
                seed: match parts.get(2) {
                    Some(x) => Some(x.parse().map_err(|_| bad())?),
                    None => None,
                },
            }),
            ("grid", [a, b]) => Ok(HostSpec::Grid {
                s: int(a)?,
                t: int(b)?,
            }),
            ("complete", [n]) => Ok(HostSpec::Complete { n: int(n)? }),
            ("empty", [n]) => Ok(HostSpec::Empty { n: int(n)? }),
            ("file", [path]) => Ok(HostSpec::File {
                path: path.to_string(),
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for HostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HostSpec::Gnp {
                n,
                p,
                seed: Some(s),
            } => write!(f, "gnp:{n},{p},{s}"),
            HostSpec::Gnp { n, p, seed: None } => write!(f, "gnp:{n},{p}"),
            HostSpec::Grid { s, t } => write!(f, "grid:{s},{t}"),
            HostSpec::Complete { n } => write!(f, "complete:{n}"),
            HostSpec::Empty { n } => write!(f, "empty:{n}"),
            HostSpec::File { path } => write!(f, "file:{path}"),
        }
    }
}

impl TryFrom<String> for HostSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<HostSpec> for String {
    fn from(h: HostSpec) -> String {
        h.to_string()
    }
}

impl HostSpec {
    /// Builds the host; `seed` is used when the spec carries none.
    pub fn build(&self, seed: u64) -> Result<Graph> {
        match self {
            HostSpec::Gnp { n, p, seed: s } => gnp(&RandomModel::new(*n, *p, s.unwrap_or(seed))),
            HostSpec::Grid { s, t } => Ok(grid_graph(GridSpec::new(*s, *t)?)),
            HostSpec::Complete { n } => Ok(Graph::complete(*n)),
            HostSpec::Empty { n } => Ok(Graph::empty(*n)),
            HostSpec::File { path } => read_edge_list(BufReader::new(File::open(path)?)),
        }
    }

    /// The model density for `gnp`, the edge density for files, and 1 for
    /// grids, complete graphs and edgeless graphs.
    pub fn density(&self, g: &Graph) -> f64 {
        match self {
            HostSpec::Gnp { p, .. } => *p,
            HostSpec::File { .. } if g.edge_count() > 0 => {
                let n = g.n() as f64;
                2.0 * g.edge_count() as f64 / (n * (n - 1.0))
            }
            _ => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub host: HostSpec,
    /// `random`, `greedy-antigrid`, `balanced-by-vertex` or `all-red`.
    pub strategy: String,
    pub preset: Preset,
    pub overrides: BTreeMap<String, f64>,
    pub alpha_prime: f64,
    /// Density used by the embedder; defaults to [`HostSpec::density`].
    pub p: Option<f64>,
    pub mode: SizeMode,
    pub pair: PairSource,
    pub seeds: Vec<u64>,
    pub restarts: usize,
    pub path_restarts: usize,
    pub dense_trials: usize,
    pub randomized: bool,
    /// Record wall time in each trial; off by default so reports are byte-stable.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let e = EmbedOptions::default();
        ExperimentConfig {
            host: HostSpec::Gnp {
                n: 20_000,
                p: 0.05,
                seed: None,
            },
            strategy: "random".into(),
            preset: Preset::Desk,
            overrides: BTreeMap::new(),
            alpha_prime: 0.5,
            p: None,
            mode: SizeMode::Auto,
            pair: PairSource::Regularity,
            seeds: vec![1],
            restarts: e.restarts,
            path_restarts: e.path_restarts,
            dense_trials: e.dense_trials,
            randomized: false,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::param("seeds must be nonempty"));
        }
        Strategy::parse(&self.strategy, 0)?;
        if let Some(p) = self.p {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::param(format!("p = {p} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: u64,
    pub host: String,
    pub n: usize,
    pub host_edges: usize,
    pub p: f64,
    pub strategy: String,
    /// `None` for an edgeless host, which is passed on uncoloured.
    pub majority_colour: Option<Colour>,
    pub majority_edges: usize,
    /// `e(H)/e(G)`.
    pub ratio: Option<f64>,
    pub alpha_prime: f64,
    pub s_target: u64,
    pub s_achieved: Option<usize>,
    pub success: bool,
    pub failure_stage: Option<String>,
    pub failure_message: Option<String>,
    pub log: CertificateLog,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialReport>,
    pub successes: usize,
    /// Median achieved side length, counting failures as 0.
    pub median_s: f64,
}

impl ExperimentReport {
    pub fn all_succeeded(&self) -> bool {
        self.successes == self.trials.len()
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let k = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[k]
    } else {
        (xs[k - 1] + xs[k]) / 2.0
    }
}

/// One pass of the pipeline at `seed`. Stage failures are recorded in the
/// report; errors are reserved for bad configuration and broken invariants.
pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialReport> {
    config.validate()?;
    let start = Instant::now();
    let g = config.host.build(seed)?;
    let p = config.p.unwrap_or_else(|| config.host.density(&g));
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!(
            "host density {p} outside (0, 1]; give p explicitly"
        )));
    }
    let chain = resolve_preset(config.preset, config.alpha_prime, p, &config.overrides)?;
    let strategy = Strategy::parse(&config.strategy, derive_seed(seed, 1))?;
    let (h, colour) = if g.edge_count() == 0 {
        (g.clone(), None)
    } else {
        let colouring = colour_edges(&g, &strategy);
        let (h, c) = majority_subgraph(&g, &colouring)?;
        (h, Some(c))
    };
    if 2 * h.edge_count() < g.edge_count() {
        return Err(Error::Invariant(
            "majority class has fewer than half the edges".into(),
        ));
    }
    let opts = EmbedOptions {
        mode: config.mode,
        seed: derive_seed(seed, 2),
        restarts: config.restarts,
        path_restarts: config.path_restarts,
        dense_trials: config.dense_trials,
        pair: config.pair.clone(),
        randomized: config.randomized,
        ..EmbedOptions::default()
    };
    let out = embed_grid(&h, p, &chain, &opts)?;
    if let Some(emb) = &out.embedding {
        // embed_grid validates too; a report never claims an unchecked grid
        let v = validate_embedding(&h, emb);
        if !v.valid {
            return Err(Error::Invariant(format!(
                "invalid embedding returned: {:?}",
                v.violations
            )));
        }
    }
    let ratio = (g.edge_count() > 0).then(|| h.edge_count() as f64 / g.edge_count() as f64);
    Ok(TrialReport {
        seed,
        host: config.host.to_string(),
        n: g.n(),
        host_edges: g.edge_count(),
        p,
        strategy: config.strategy.clone(),
        majority_colour: colour,
        majority_edges: h.edge_count(),
        ratio,
        alpha_prime: config.alpha_prime,
        s_target: chain.s_target,
        s_achieved: out.embedding.as_ref().map(|e| e.spec.s),
        success: out.embedding.is_some(),
        failure_stage: out.failure.as_ref().map(|f| f.stage.clone()),
        failure_message: out.failure.as_ref().map(|f| f.message.clone()),
        log: out.log,
        wall_time: config.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

/// Runs every seed of `config` (in parallel) and collects the reports in seed order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let trials: Vec<TrialReport> = config
        .seeds
        .par_iter()
        .map(|&s| run_trial(config, s))
        .collect::<Result<_>>()?;
    let successes = trials.iter().filter(|t| t.success).count();
    let median_s = median(
        trials
            .iter()
            .map(|t| t.s_achieved.unwrap_or(0) as f64)
            .collect(),
    );
    Ok(ExperimentReport {
        config: config.clone(),
        trials,
        successes,
        median_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn host_spec_round_trip() {
        for s in [
            "gnp:1000,0.1,7",
            "gnp:50,0.5",
            "grid:5,5",
            "complete:6",
            "empty:3",
            "file:g.txt",
        ] {
            assert_eq!(s.parse::<HostSpec>().unwrap().to_string(), s);
        }
        assert_eq!(
            "gnp:1000,0.1,7".parse::<HostSpec>().unwrap(),
            HostSpec::Gnp {
                n: 1000,
                p: 0.1,
                seed: Some(7)
            }
        );
        assert_eq!(
            "host.txt".parse::<HostSpec>().unwrap(),
            HostSpec::File {
                path: "host.txt".into()
            }
        );
        assert!("gnp:10".parse::<HostSpec>().is_err());
        assert!("grid:a,b".parse::<HostSpec>().is_err());
    }

    #[test]
    fn median_counts_middle() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(median(vec![]), 0.0);
    }
}
