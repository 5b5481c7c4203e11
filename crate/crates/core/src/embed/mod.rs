//! Grid embedding into a dense subgraph of a random host: constant chain,
//! dense pair extraction and trimming, and row-by-row growth of the grid.

mod constants;
mod rows;
mod trim;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use constants::{
    parse_override, resolve_constants, resolve_preset, ConstantChain, Preset, CHAIN_KEYS,
    DEFAULT_T0, OVERRIDE_ONLY_KEYS,
};
pub use rows::{
    candidate_sets, extend_row, reachable_sets, seed_path, CandidateFailure, CandidateStats,
    Candidates, EdgeCertificate, EmbeddingState, PathRow, Reachable, SeedPathOutcome, Side,
};
pub use trim::{trim_dense_pair, TrimReport};
pub use validate::{validate_embedding, EmbeddingViolation, GridEmbedding, ValidationReport};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, GridSpec};
use crate::quality::{EdgeClassParams, EdgeClassifier};
use crate::random::derive_seed;
use crate::regularity::{dense_pair_from_partition, regular_partition, PartitionConfig};

/// Side length to embed; written `fixed:<s>` or `auto`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SizeMode {
    Fixed(usize),
    /// Largest side length in `[2, s_target]` that succeeds.
    Auto,
}

impl FromStr for SizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(SizeMode::Auto);
        }
        let k = s
            .strip_prefix("fixed:")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::param(format!("mode {s:?} is not fixed:<s> or auto")))?;
        Ok(SizeMode::Fixed(k))
    }
}

impl TryFrom<String> for SizeMode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SizeMode> for String {
    fn from(m: SizeMode) -> String {
        m.to_string()
    }
}

impl fmt::Display for SizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeMode::Fixed(s) => write!(f, "fixed:{s}"),
            SizeMode::Auto => f.write_str("auto"),
        }
    }
}

/// Where the pair `(A₁, B₁)` comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairSource {
    /// Densest regular pair of a sparse regular partition.
    Regularity,
    /// The two colour classes of a bipartite host.
    Bipartition,
    Given {
        a: VertexSet,
        b: VertexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedOptions {
    pub mode: SizeMode,
    pub seed: u64,
    /// Rows with fewer than this many vertices are not grown; `None` gives a
    /// square grid.
    pub rows: Option<usize>,
    /// Fresh classification seeds tried per row before restarting the first path.
    pub restarts: usize,
    /// First-path restarts per side length.
    pub path_restarts: usize,
    pub dense_trials: usize,
    /// Edge verdicts allowed per first-path search.
    pub seed_path_budget: u64,
    pub partition: PartitionConfig,
    pub pair: PairSource,
    /// Seeded random choices instead of smallest-id-first.
    pub randomized: bool,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            mode: SizeMode::Auto,
            seed: 0,
            rows: None,
            restarts: 5,
            path_restarts: 3,
            dense_trials: 48,
            seed_path_budget: 20_000,
            partition: PartitionConfig {
                refine_rounds: 1,
                trials: 200,
                ..PartitionConfig::default()
            },
            pair: PairSource::Regularity,
            randomized: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageLog {
    pub stage: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowLog {
    /// Index of the row being built.
    pub row: usize,
    pub attempt: usize,
    pub classifier_seed: u64,
    pub min_candidates: usize,
    pub min_reachable: usize,
    /// Indices whose reachable set kept fewer than half the candidates.
    pub below_half: usize,
    /// Row vertices that lost more than a `δ` fraction of their neighbourhood across.
    pub slack_violations: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeAttempt {
    pub s: usize,
    pub success: bool,
    pub path_restarts: usize,
    pub seed_path_nodes: u64,
    pub rows: Vec<RowLog>,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub p_density: Option<f64>,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificateLog {
    pub stages: Vec<StageLog>,
    pub pair: Option<PairSummary>,
    pub trim: Option<TrimReport>,
    pub attempts: Vec<SizeAttempt>,
    pub s_achieved: Option<usize>,
    pub map: Option<Vec<usize>>,
}

impl CertificateLog {
    fn stage(&mut self, stage: &str, ok: bool, detail: impl Into<String>) {
        self.stages.push(StageLog {
            stage: stage.into(),
            ok,
            detail: detail.into(),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedOutcome {
    pub embedding: Option<GridEmbedding>,
    pub log: CertificateLog,
    pub failure: Option<StageFailure>,
}

impl EmbedOutcome {
    pub fn into_result(self) -> Result<GridEmbedding> {
        match (self.embedding, self.failure) {
            (Some(e), _) => Ok(e),
            (None, Some(f)) => Err(Error::Embedding {
                stage: f.stage,
                message: f.message,
            }),
            (None, None) => Err(Error::Embedding {
                stage: "unknown".into(),
                message: "no embedding".into(),
            }),
        }
    }
}

struct Engine<'g> {
    h: &'g Graph,
    chain: &'g ConstantChain,
    p: f64,
    a: VertexSet,
    b: VertexSet,
    opts: &'g EmbedOptions,
    classifiers: Vec<EdgeClassifier<'g>>,
}

impl<'g> Engine<'g> {
    fn classifier(&mut self, k: usize) -> Result<&EdgeClassifier<'g>> {
        while self.classifiers.len() <= k {
            let seed = derive_seed(self.opts.seed, 1 + self.classifiers.len() as u64);
            let params = EdgeClassParams {
                eps_prime: self.chain.eps_prime,
                alpha: self.chain.alpha,
                p: self.p,
                nu: self.chain.nu,
                gamma: self.chain.gamma,
                dense_trials: self.opts.dense_trials,
                seed,
            };
            self.classifiers.push(EdgeClassifier::new(
                self.h,
                self.a.clone(),
                self.b.clone(),
                params,
            )?);
        }
        Ok(&self.classifiers[k])
    }

    fn pick_seed(&self, tag: u64) -> Option<u64> {
        self.opts
            .randomized
            .then(|| derive_seed(self.opts.seed, tag))
    }

    /// One full attempt at side length `s`; returns the rows on success.
    fn attempt(&mut self, s: usize, log: &mut CertificateLog) -> Result<Option<Vec<PathRow>>> {
        let rows_wanted = self.opts.rows.unwrap_or(s);
        let mut record = SizeAttempt {
            s,
            success: false,
            path_restarts: 0,
            seed_path_nodes: 0,
            rows: Vec::new(),
            failure: None,
        };
        for path_try in 0..=self.opts.path_restarts {
            record.path_restarts = path_try;
            let order = self.pick_seed(1000 + path_try as u64);
            let budget = self.opts.seed_path_budget;
            let first = seed_path(self.classifier(0)?, s, budget, path_try, order)?;
            record.seed_path_nodes += first.nodes;
            let Some(first) = first.path else {
                record.failure = Some(format!(
                    "seed path: longest certified path has {} of {s} vertices",
                    first.longest.len()
                ));
                continue;
            };
            let mut state = EmbeddingState::new(self.a.clone(), self.b.clone());
            state.push(first)?;
            let mut failed = None;
            while state.rows.len() < rows_wanted {
                let row = state.rows.len();
                let cands = candidate_sets(self.h, &state, self.chain, self.p)?;
                if let Some(f) = &cands.failure {
                    failed = Some(format!(
                        "row {row}: candidate set {} empty ({})",
                        f.index, f.cause
                    ));
                    record.rows.push(RowLog {
                        row,
                        attempt: 0,
                        classifier_seed: self.classifier(0)?.params().seed,
                        min_candidates: 0,
                        min_reachable: 0,
                        below_half: 0,
                        slack_violations: 0,
                        failure: failed.clone(),
                    });
                    break;
                }
                let min_candidates = cands.stats.iter().map(|c| c.size).min().unwrap_or(0);
                let mut grown = None;
                let pick = self.pick_seed(row as u64);
                for k in 0..self.opts.restarts.max(1) {
                    let c = self.classifier(k)?;
                    let reach = reachable_sets(c, &cands.sets)?;
                    let min_reachable = reach.sets.iter().map(|r| r.len()).min().unwrap_or(0);
                    let mut entry = RowLog {
                        row,
                        attempt: k,
                        classifier_seed: c.params().seed,
                        min_candidates,
                        min_reachable,
                        below_half: reach.below_half.len(),
                        slack_violations: 0,
                        failure: None,
                    };
                    if let Some(i) = reach.failure {
                        entry.failure = Some(format!("reachable set {i} empty"));
                        record.rows.push(entry);
                        continue;
                    }
                    let next = extend_row(c, &state, &cands.sets, &reach, pick)?;
                    grown = Some((next, entry));
                    break;
                }
                match grown {
                    Some((next, mut entry)) => {
                        state.push(next)?;
                        entry.slack_violations = state.slack_violations(self.h, self.chain.delta);
                        record.rows.push(entry);
                    }
                    None => {
                        failed = Some(format!("row {row}: no reachable path after restarts"));
                        break;
                    }
                }
            }
            state.restarts += path_try;
            if failed.is_none() {
                record.success = true;
                record.failure = None;
                log.attempts.push(record);
                return Ok(Some(state.rows));
            }
            record.failure = failed;
        }
        log.attempts.push(record);
        Ok(None)
    }
}

fn grid_from_rows(rows: &[PathRow]) -> Result<GridEmbedding> {
    let t = rows.first().map_or(0, |r| r.vertices.len());
    let spec = GridSpec::new(rows.len(), t)?;
    Ok(GridEmbedding::new(
        spec,
        rows.iter()
            .flat_map(|r| r.vertices.iter().copied())
            .collect(),
    ))
}

fn fail(log: CertificateLog, stage: &str, message: String) -> EmbedOutcome {
    EmbedOutcome {
        embedding: None,
        log,
        failure: Some(StageFailure {
            stage: stage.into(),
            message,
        }),
    }
}

/// Runs the full pipeline: dense pair, trim, first path, then one row at a
/// time. Every returned embedding has passed [`validate_embedding`].
pub fn embed_grid(
    h: &Graph,
    p: f64,
    chain: &ConstantChain,
    opts: &EmbedOptions,
) -> Result<EmbedOutcome> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("p = {p} outside (0, 1]")));
    }
    if let SizeMode::Fixed(0) = opts.mode {
        return Err(Error::param("side length must be positive"));
    }
    let mut log = CertificateLog::default();
    for w in &chain.warnings {
        log.stage("constants", true, w.clone());
    }

    let (a1, b1) = match &opts.pair {
        PairSource::Regularity => {
            let config = PartitionConfig {
                t0: (chain.t0.ceil() as usize).max(2),
                seed: derive_seed(opts.seed, 0),
                ..opts.partition.clone()
            };
            let config = PartitionConfig {
                tmax: config.tmax.max(config.t0),
                ..config
            };
            let report = match regular_partition(h, p, chain.eps / 2.0, &config) {
                Ok(r) => r,
                Err(e) => return Ok(fail(log, "partition", e.to_string())),
            };
            log.stage(
                "partition",
                true,
                format!(
                    "{} classes, |V0| = {}, irregular fraction {:.4}, rounds {}",
                    report.classes.len(),
                    report.exceptional.len(),
                    report.irregular_fraction,
                    report.rounds
                ),
            );
            match dense_pair_from_partition(&report, chain.alpha_prime) {
                Ok(d) => {
                    log.pair = Some(PairSummary {
                        i: Some(d.i),
                        j: Some(d.j),
                        p_density: Some(d.p_density),
                        a: d.a.len(),
                        b: d.b.len(),
                    });
                    (d.a, d.b)
                }
                Err(e) => {
                    log.stage("dense_pair", false, e.to_string());
                    return Ok(fail(log, "dense_pair", e.to_string()));
                }
            }
        }
        PairSource::Bipartition => match h.bipartition() {
            Some(colours) if h.edge_count() > 0 => {
                let side = |c: u8| {
                    VertexSet::from_ids(h.n(), (0..h.n()).filter(|&v| colours[v] == c))
                        .expect("ids in range")
                };
                let (a, b) = (side(0), side(1));
                log.pair = Some(PairSummary {
                    i: None,
                    j: None,
                    p_density: None,
                    a: a.len(),
                    b: b.len(),
                });
                (a, b)
            }
            _ => {
                let msg = "host is not bipartite with at least one edge".to_string();
                log.stage("dense_pair", false, msg.clone());
                return Ok(fail(log, "dense_pair", msg));
            }
        },
        PairSource::Given { a, b } => {
            if a.universe() != h.n() || b.universe() != h.n() || !a.is_disjoint(b) {
                return Err(Error::param("given pair must be disjoint subsets of V(H)"));
            }
            (a.clone(), b.clone())
        }
    };
    log.stage(
        "dense_pair",
        true,
        format!("|A1| = {}, |B1| = {}", a1.len(), b1.len()),
    );

    let (a, b) = match trim_dense_pair(h, &a1, &b1, chain, p) {
        Ok((a, b, report)) => {
            log.trim = Some(report);
            (a, b)
        }
        Err(e) => {
            log.stage("trim", false, e.to_string());
            return Ok(fail(log, "trim", e.to_string()));
        }
    };
    log.stage(
        "trim",
        true,
        format!("|A| = {}, |B| = {}", a.len(), b.len()),
    );

    let mut engine = Engine {
        h,
        chain,
        p,
        a,
        b,
        opts,
        classifiers: Vec::new(),
    };
    let mut best: Option<Vec<PathRow>> = None;
    match opts.mode {
        SizeMode::Fixed(s) => best = engine.attempt(s, &mut log)?,
        SizeMode::Auto => {
            // s² vertices must fit into the pair
            let fit = ((engine.a.len() + engine.b.len()) as f64).sqrt().floor() as u64;
            let top = chain.s_target.min(fit) as usize;
            if top < 2 {
                let msg = format!(
                    "target side length {top} is below 2 (s_target = {}, fit = {fit})",
                    chain.s_target
                );
                log.stage("auto", false, msg.clone());
                return Ok(fail(log, "auto", msg));
            }
            if let Some(rows) = engine.attempt(top, &mut log)? {
                best = Some(rows);
            } else {
                let (mut lo, mut hi) = (2usize, top - 1);
                while lo <= hi {
                    let mid = lo + (hi - lo) / 2;
                    match engine.attempt(mid, &mut log)? {
                        Some(rows) => {
                            best = Some(rows);
                            lo = mid + 1;
                        }
                        None => hi = mid - 1,
                    }
                }
            }
        }
    }
    let Some(rows) = best else {
        let msg = log
            .attempts
            .last()
            .and_then(|a| a.failure.clone())
            .unwrap_or_else(|| "no side length succeeded".into());
        return Ok(fail(log, "extend", msg));
    };
    let emb = grid_from_rows(&rows)?;
    let v = validate_embedding(h, &emb);
    if !v.valid {
        return Err(Error::Invariant(format!(
            "embedding failed validation: {:?}",
            v.violations
        )));
    }
    log.stage(
        "validate",
        true,
        format!("{} grid edges checked", v.checked_edges),
    );
    log.s_achieved = Some(emb.spec.t);
    log.map = Some(emb.map.clone());
    Ok(EmbedOutcome {
        embedding: Some(emb),
        log,
        failure: None,
    })
}
