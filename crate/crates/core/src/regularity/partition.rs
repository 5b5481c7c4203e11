use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_p, is_regular_pair_sampled, p_density, strictly_above, Witness};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::{derive_seed, stream_rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub t0: usize,
    #[serde(rename = "Tmax")]
    pub tmax: usize,
    /// Boundedness constant handed on to callers; the partition itself does not use it.
    pub lambda: Option<f64>,
    pub refine_rounds: usize,
    /// Sampled regularity budget per class pair.
    pub trials: usize,
    pub seed: u64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            t0: 2,
            tmax: 64,
            lambda: None,
            refine_rounds: 4,
            trials: 2000,
            seed: 0,
        }
    }
}

impl PartitionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t0 < 2 || self.t0 > self.tmax {
            return Err(Error::param(format!(
                "need 2 <= t0 <= Tmax, got t0 = {}, Tmax = {}",
                self.t0, self.tmax
            )));
        }
        Ok(())
    }
}

/// Equitable partition `V₀, V₁, …, V_t`; `V₀` is the exceptional class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub classes: Vec<VertexSet>,
    pub exceptional: VertexSet,
}

impl Partition {
    /// Cuts `order` into `t` consecutive classes of equal size; the remainder
    /// becomes the exceptional class.
    fn chop(n: usize, order: &[usize], t: usize) -> Result<Partition> {
        let size = order.len() / t;
        let mut classes = Vec::with_capacity(t);
        for chunk in order.chunks(size).take(t) {
            classes.push(VertexSet::from_ids(n, chunk.iter().copied())?);
        }
        let exceptional = VertexSet::from_ids(n, order[t * size..].iter().copied())?;
        Ok(Partition {
            classes,
            exceptional,
        })
    }

    pub fn class_size(&self) -> usize {
        self.classes.first().map_or(0, |c| c.len())
    }

    /// Checks disjointness, equal class sizes and coverage of `0..n`.
    pub fn check(&self, n: usize) -> Result<()> {
        let mut seen = self.exceptional.clone();
        if seen.universe() != n {
            return Err(Error::Invariant("partition universe mismatch".into()));
        }
        let size = self.class_size();
        for (i, c) in self.classes.iter().enumerate() {
            if c.len() != size {
                return Err(Error::Invariant(format!(
                    "class {i} has size {} != {size}",
                    c.len()
                )));
            }
            if !seen.is_disjoint(c) {
                return Err(Error::Invariant(format!(
                    "class {i} overlaps an earlier class"
                )));
            }
            seen.union_with(c);
        }
        if seen.len() != n {
            return Err(Error::Invariant(
                "partition does not cover every vertex".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub p_density: f64,
    /// `"regular"` or `"irregular"`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PairRecord {
    pub fn is_regular(&self) -> bool {
        self.verdict == "regular"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub classes: Vec<VertexSet>,
    pub exceptional: VertexSet,
    pub pairs: Vec<PairRecord>,
    pub eps: f64,
    pub p: f64,
    pub rounds: usize,
    pub irregular_fraction: f64,
    /// True when at most an ε-fraction of pairs were found irregular and
    /// `|V₀| ≤ εn`. Sampled evidence, not a certificate.
    pub regular: bool,
    pub seed: u64,
    pub trials: usize,
}

impl PartitionReport {
    pub fn partition(&self) -> Partition {
        Partition {
            classes: self.classes.clone(),
            exceptional: self.exceptional.clone(),
        }
    }
}

fn assess(
    h: &Graph,
    part: &Partition,
    p: f64,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<PairRecord>> {
    let t = part.classes.len();
    let pairs: Vec<(usize, usize)> = (0..t)
        .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let (x, y) = (&part.classes[i], &part.classes[j]);
            let d = p_density(h, x, y, p)?;
            let v = is_regular_pair_sampled(h, x, y, eps, p, trials, derive_seed(seed, k as u64))?;
            Ok(PairRecord {
                i,
                j,
                p_density: d,
                verdict: if v.holds() { "regular" } else { "irregular" }.to_string(),
                witness: v.witness,
            })
        })
        .collect()
}

/// Heuristic `(ε, p)`-regular partition.
///
/// Starts from a random equitable partition into `t0` classes and, while more
/// than an ε-fraction of class pairs carry a sampled irregularity witness,
/// splits every class along the first witness touching it, then re-cuts the
/// vertex order into `min(2t, Tmax)` equal classes. Stops after
/// `refine_rounds` refinements. The report gives the density and sampled
/// verdict of every class pair of the final partition.
pub fn regular_partition(
    h: &Graph,
    p: f64,
    eps: f64,
    config: &PartitionConfig,
) -> Result<PartitionReport> {
    config.validate()?;
    check_p(p)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps = {eps} outside (0, 1)")));
    }
    let n = h.n();
    if n < config.t0 {
        return Err(Error::pre(format!(
            "graph has {n} vertices, fewer than t0 = {}",
            config.t0
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(config.seed, u64::MAX));
    let mut t = config.t0;
    let mut part = Partition::chop(n, &order, t)?;
    let mut round = 0;
    loop {
        let round_seed = derive_seed(config.seed, round as u64);
        let pairs = assess(h, &part, p, eps, config.trials, round_seed)?;
        let irregular = pairs.iter().filter(|r| !r.is_regular()).count();
        let fraction = if pairs.is_empty() {
            0.0
        } else {
            irregular as f64 / pairs.len() as f64
        };
        let done = !strictly_above(fraction, eps);
        if done || round >= config.refine_rounds {
            let regular = done && !strictly_above(part.exceptional.len() as f64, eps * n as f64);
            part.check(n)?;
            return Ok(PartitionReport {
                classes: part.classes,
                exceptional: part.exceptional,
                pairs,
                eps,
                p,
                rounds: round,
                irregular_fraction: fraction,
                regular,
                seed: config.seed,
                trials: config.trials,
            });
        }
        // split each class along the first witness that touches it
        let mut splitter: Vec<Option<&VertexSet>> = vec![None; t];
        for r in &pairs {
            if let Some(w) = &r.witness {
                splitter[r.i].get_or_insert(&w.x);
                splitter[r.j].get_or_insert(&w.y);
            }
        }
        let mut next = Vec::with_capacity(n);
        for (c, s) in part.classes.iter().zip(&splitter) {
            match s {
                Some(s) => {
                    next.extend(c.intersection(s).iter());
                    next.extend(c.difference(s).iter());
                }
                None => next.extend(c.iter()),
            }
        }
        next.extend(part.exceptional.iter());
        t = (2 * t).min(config.tmax).min(n);
        part = Partition::chop(n, &next, t)?;
        round += 1;
    }
}

/// The class pair chosen to seed the embedding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensePair {
    pub i: usize,
    pub j: usize,
    pub p_density: f64,
    pub a: VertexSet,
    pub b: VertexSet,
}

/// Picks the class pair of maximum p-density among those with
/// `e_H(Vᵢ, Vⱼ) > (α′/4) p |Vᵢ| |Vⱼ|` and a regular sampled verdict; ties go to
/// the smallest `(i, j)`.
pub fn dense_pair_from_partition(report: &PartitionReport, alpha_prime: f64) -> Result<DensePair> {
    let floor = alpha_prime / 4.0;
    let mut best: Option<&PairRecord> = None;
    for r in &report.pairs {
        if !r.is_regular() || !strictly_above(r.p_density, floor) {
            continue;
        }
        if best.is_none_or(|b| r.p_density > b.p_density) {
            best = Some(r);
        }
    }
    match best {
        Some(r) => Ok(DensePair {
            i: r.i,
            j: r.j,
            p_density: r.p_density,
            a: report.classes[r.i].clone(),
            b: report.classes[r.j].clone(),
        }),
        None => {
            let table: Vec<String> = report
                .pairs
                .iter()
                .map(|r| format!("({},{}): {:.6} {}", r.i, r.j, r.p_density, r.verdict))
                .collect();
            Err(Error::NoQualifyingPair(format!(
                "no regular class pair has p-density above {floor}; densities: [{}]",
                table.join(", ")
            )))
        }
    }
}
