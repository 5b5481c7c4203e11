//! Verifiers for the almost-sure properties of `G(n, p)` the embedding relies
//! on, plus the Chernoff tail and first-moment grid-threshold calculators.
//!
//! Each verifier returns a [`PropertyReport`]; every listed violation can be
//! re-checked directly against the graph.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{and_count, VertexSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::stream_rng;
use crate::regularity::REL_TOL;

/// Maximum number of violations listed in a report.
pub const VIOLATION_CAP: usize = 100;

/// Default vertex-count limit for the quadratic codegree scan.
pub const CODEGREE_SCAN_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaParams {
    pub delta: f64,
}

impl DeltaParams {
    pub fn new(delta: f64) -> Result<Self> {
        if delta > 0.0 && delta <= 1.5 {
            Ok(DeltaParams { delta })
        } else {
            Err(Error::param(format!("delta = {delta} outside (0, 3/2]")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Property {
    /// Every degree is `(1 ± δ)pn`.
    #[serde(rename = "i_degrees")]
    Degrees,
    /// Every codegree is `(1 ± δ)p²n`.
    #[serde(rename = "i_codegrees")]
    Codegrees,
    /// Few vertices are heavy into a large subset of a neighbourhood.
    #[serde(rename = "ii")]
    HeavyIntoNeighbourhood,
    /// Few vertices are heavy into a linear-size set.
    #[serde(rename = "iii")]
    HeavyIntoSet,
    /// Edges between two neighbourhood subsets concentrate.
    #[serde(rename = "iv")]
    NeighbourhoodEdges,
    /// Edges inside and between linear-size sets concentrate.
    #[serde(rename = "v")]
    GlobalEdges,
    /// Constrained 4-cycle counts are at most twice their expectation.
    #[serde(rename = "vi")]
    C4Bound,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Degrees,
        Property::Codegrees,
        Property::HeavyIntoNeighbourhood,
        Property::HeavyIntoSet,
        Property::NeighbourhoodEdges,
        Property::GlobalEdges,
        Property::C4Bound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Degrees => "i_degrees",
            Property::Codegrees => "i_codegrees",
            Property::HeavyIntoNeighbourhood => "ii",
            Property::HeavyIntoSet => "iii",
            Property::NeighbourhoodEdges => "iv",
            Property::GlobalEdges => "v",
            Property::C4Bound => "vi",
        }
    }

    /// Parses an id; `"i"` expands to both degree and codegree checks.
    pub fn parse_list(s: &str) -> Result<Vec<Property>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "i" => out.extend([Property::Degrees, Property::Codegrees]),
                "all" => out.extend(Property::ALL),
                _ => out.push(
                    Property::ALL
                        .into_iter()
                        .find(|p| p.id() == tok)
                        .ok_or_else(|| Error::param(format!("unknown property {tok:?}")))?,
                ),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// One out-of-window observation: `value` should lie in the open interval
/// `(lo, hi)` (a missing bound is unconstrained).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub ids: Vec<usize>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub pass: bool,
    pub params: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, u64>,
    /// Largest `|observed − expected| / expected` over the checked quantities,
    /// for properties that are two-sided windows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_relative_deviation: Option<f64>,
    /// Whether the size preconditions held; false only when they were waived.
    pub precondition_met: bool,
    /// The first [`VIOLATION_CAP`] violations; `counts["violations"]` has the total.
    pub violations: Vec<Violation>,
}

impl PropertyReport {
    fn new(property: Property, p: f64, delta: f64) -> Self {
        let mut params = BTreeMap::new();
        params.insert("p".into(), p);
        params.insert("delta".into(), delta);
        PropertyReport {
            property,
            pass: true,
            params,
            counts: BTreeMap::new(),
            worst_relative_deviation: None,
            precondition_met: true,
            violations: Vec::new(),
        }
    }

    fn violation(&mut self, v: Violation) {
        self.pass = false;
        *self.counts.entry("violations".into()).or_insert(0) += 1;
        if self.violations.len() < VIOLATION_CAP {
            self.violations.push(v);
        }
    }

    fn finish(mut self) -> Self {
        self.counts.entry("violations".into()).or_insert(0);
        self
    }

    fn track_deviation(&mut self, value: f64, expected: f64) {
        if expected > 0.0 {
            let d = (value - expected).abs() / expected;
            let w = self.worst_relative_deviation.get_or_insert(0.0);
            if d > *w {
                *w = d;
            }
        }
    }

    /// Checks `value ∈ ((1−δ)expected, (1+δ)expected)`, recording a violation otherwise.
    fn window(&mut self, ids: Vec<usize>, value: f64, expected: f64, delta: f64) {
        self.track_deviation(value, expected);
        let (lo, hi) = ((1.0 - delta) * expected, (1.0 + delta) * expected);
        if !in_open_window(value, lo, hi) {
            self.violation(Violation {
                ids,
                value,
                lo: Some(lo),
                hi: Some(hi),
            });
        }
    }
}

/// `lo < value < hi`, with the relative tolerance applied in the value's favour.
pub fn in_open_window(value: f64, lo: f64, hi: f64) -> bool {
    value > lo - REL_TOL * lo.abs() && value < hi + REL_TOL * hi.abs()
}

fn check_p_delta(p: f64, delta: f64) -> Result<()> {
    DeltaParams::new(delta)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("p = {p} outside (0, 1]")));
    }
    Ok(())
}

fn at_least(size: usize, bound: f64, what: &str) -> Result<()> {
    if (size as f64) < bound - REL_TOL * bound.abs() {
        return Err(Error::pre(format!(
            "{what} has {size} vertices, needs at least {bound}"
        )));
    }
    Ok(())
}

/// Degrees lie strictly inside `((1−δ)pn, (1+δ)pn)`.
pub fn verify_degrees(g: &Graph, p: f64, delta: f64) -> Result<PropertyReport> {
    check_p_delta(p, delta)?;
    let expected = p * g.n() as f64;
    let mut r = PropertyReport::new(Property::Degrees, p, delta);
    for v in 0..g.n() {
        r.window(vec![v], g.degree(v) as f64, expected, delta);
    }
    r.counts.insert("checked".into(), g.n() as u64);
    Ok(r.finish())
}

/// Codegrees of all pairs lie strictly inside `((1−δ)p²n, (1+δ)p²n)`.
/// Graphs above `limit` vertices (default [`CODEGREE_SCAN_LIMIT`]) are refused.
pub fn verify_codegrees(
    g: &Graph,
    p: f64,
    delta: f64,
    limit: Option<usize>,
) -> Result<PropertyReport> {
    check_p_delta(p, delta)?;
    let n = g.n();
    let limit = limit.unwrap_or(CODEGREE_SCAN_LIMIT);
    if n > limit {
        return Err(Error::TooLarge(format!(
            "codegree scan over {n} vertices exceeds the limit of {limit}"
        )));
    }
    let expected = p * p * n as f64;
    let (lo, hi) = ((1.0 - delta) * expected, (1.0 + delta) * expected);
    // per-u: (violations in order, number of violations, worst deviation)
    let per_u: Vec<(Vec<Violation>, u64, f64)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut vs = Vec::new();
            let mut count = 0;
            let mut worst = 0.0f64;
            for w in u + 1..n {
                let c = and_count(g.row(u), g.row(w)) as f64;
                if expected > 0.0 {
                    worst = worst.max((c - expected).abs() / expected);
                }
                if !in_open_window(c, lo, hi) {
                    count += 1;
                    if vs.len() < VIOLATION_CAP {
                        vs.push(Violation {
                            ids: vec![u, w],
                            value: c,
                            lo: Some(lo),
                            hi: Some(hi),
                        });
                    }
                }
            }
            (vs, count, worst)
        })
        .collect();
    let mut r = PropertyReport::new(Property::Codegrees, p, delta);
    let mut total = 0;
    for (vs, count, worst) in per_u {
        total += count;
        for v in vs {
            if r.violations.len() < VIOLATION_CAP {
                r.violations.push(v);
            }
        }
        if n >= 2 {
            let w = r.worst_relative_deviation.get_or_insert(0.0);
            *w = w.max(worst);
        }
    }
    r.pass = total == 0;
    r.counts.insert("violations".into(), total);
    r.counts
        .insert("checked".into(), (n * n.saturating_sub(1) / 2) as u64);
    Ok(r.finish())
}

fn heavy_count(
    g: &Graph,
    set: &VertexSet,
    p: f64,
    delta: f64,
    property: Property,
) -> (usize, PropertyReport) {
    let cut = (1.0 + delta) * p * set.len() as f64;
    let bound = 7.0 / (delta.powi(3) * p);
    let mut r = PropertyReport::new(property, p, delta);
    r.params.insert("bound".into(), bound);
    r.params.insert("heavy_threshold".into(), cut);
    let heavy: Vec<usize> = (0..g.n())
        .filter(|&y| g.degree_into(y, set) as f64 > cut + REL_TOL * cut)
        .collect();
    r.counts.insert("heavy".into(), heavy.len() as u64);
    r.counts.insert("set_size".into(), set.len() as u64);
    if heavy.len() as f64 > bound {
        r.pass = false;
        r.counts.insert("violations".into(), heavy.len() as u64);
        for &y in heavy.iter().take(VIOLATION_CAP) {
            r.violations.push(Violation {
                ids: vec![y],
                value: g.degree_into(y, set) as f64,
                lo: None,
                hi: Some(cut),
            });
        }
    }
    (heavy.len(), r.finish())
}

/// Counts vertices `y` with `|N(y) ∩ X| > (1+δ)p|X|` for `X ⊆ N(v)`,
/// `|X| ≥ δpn`; passes iff the count is at most `7/(δ³p)`.
pub fn count_heavy_into_neighbourhood(
    g: &Graph,
    p: f64,
    delta: f64,
    v: usize,
    x: &VertexSet,
) -> Result<(usize, PropertyReport)> {
    check_p_delta(p, delta)?;
    if v >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        });
    }
    if !x.is_subset(&g.neighbours(v)) {
        return Err(Error::pre(format!("X is not contained in N({v})")));
    }
    at_least(x.len(), delta * p * g.n() as f64, "X")?;
    Ok(heavy_count(
        g,
        x,
        p,
        delta,
        Property::HeavyIntoNeighbourhood,
    ))
}

/// Counts vertices `y` with `|N(y) ∩ U| > (1+δ)p|U|` for `|U| ≥ δn`;
/// passes iff the count is at most `7/(δ³p)`.
pub fn count_heavy_into_set(
    g: &Graph,
    p: f64,
    delta: f64,
    u: &VertexSet,
) -> Result<(usize, PropertyReport)> {
    check_p_delta(p, delta)?;
    at_least(u.len(), delta * g.n() as f64, "U")?;
    Ok(heavy_count(g, u, p, delta, Property::HeavyIntoSet))
}

/// What to do when a size precondition fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionPolicy {
    /// Return a precondition error.
    Enforce,
    /// Check the conclusion anyway and record `precondition_met = false`.
    Record,
}

/// `e(U, W) = (1 ± δ)p|U||W|` for `U ⊆ N(u)`, `W ⊆ N(w)` with `|U| ≥ δpn` and
/// `|W| ≥ 3δ⁻³pn / ln n`.
#[allow(clippy::too_many_arguments)]
pub fn verify_nbhd_edge_concentration(
    g: &Graph,
    p: f64,
    delta: f64,
    u: usize,
    w: usize,
    uset: &VertexSet,
    wset: &VertexSet,
    policy: PreconditionPolicy,
) -> Result<PropertyReport> {
    let mut r = PropertyReport::new(Property::NeighbourhoodEdges, p, delta);
    r.precondition_met = nbhd_pre(g, p, delta, u, w, uset, wset).map_or_else(
        |e| {
            if policy == PreconditionPolicy::Enforce {
                Err(e)
            } else {
                Ok(false)
            }
        },
        |_| Ok(true),
    )?;
    nbhd_window(g, p, delta, u, w, uset, wset, &mut r);
    r.counts.insert("checked".into(), 1);
    Ok(r.finish())
}

fn nbhd_pre(
    g: &Graph,
    p: f64,
    delta: f64,
    u: usize,
    w: usize,
    uset: &VertexSet,
    wset: &VertexSet,
) -> Result<()> {
    check_p_delta(p, delta)?;
    if u >= g.n() || w >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: u.max(w),
            n: g.n(),
        });
    }
    if u == w {
        return Err(Error::pre("u and w must be distinct"));
    }
    if !uset.is_subset(&g.neighbours(u)) || !wset.is_subset(&g.neighbours(w)) {
        return Err(Error::pre("U and W must lie in N(u) and N(w)"));
    }
    let nf = g.n() as f64;
    at_least(uset.len(), delta * p * nf, "U")?;
    at_least(wset.len(), 3.0 * p * nf / (delta.powi(3) * nf.ln()), "W")
}

#[allow(clippy::too_many_arguments)]
fn nbhd_window(
    g: &Graph,
    p: f64,
    delta: f64,
    u: usize,
    w: usize,
    uset: &VertexSet,
    wset: &VertexSet,
    r: &mut PropertyReport,
) {
    let e = g.edge_count_between(uset, wset) as f64;
    let expected = p * uset.len() as f64 * wset.len() as f64;
    r.window(vec![u, w], e, expected, delta);
}

/// Runs the neighbourhood-edge check on several `(u, w)` pairs with
/// `U = N(u)`, `W = N(w)` and merges the results into one report.
pub fn verify_nbhd_edge_concentration_pairs(
    g: &Graph,
    p: f64,
    delta: f64,
    pairs: &[(usize, usize)],
    policy: PreconditionPolicy,
) -> Result<PropertyReport> {
    let mut r = PropertyReport::new(Property::NeighbourhoodEdges, p, delta);
    for &(u, w) in pairs {
        let (us, ws) = (g.neighbours(u), g.neighbours(w));
        if let Err(e) = nbhd_pre(g, p, delta, u, w, &us, &ws) {
            if policy == PreconditionPolicy::Enforce {
                return Err(e);
            }
            r.precondition_met = false;
        }
        nbhd_window(g, p, delta, u, w, &us, &ws, &mut r);
    }
    r.counts.insert("checked".into(), pairs.len() as u64);
    Ok(r.finish())
}

/// `e(A) = (1 ± δ)p·C(|A|, 2)` and `e(A, B) = (1 ± δ)p|A||B|` for disjoint
/// `A`, `B` of size at least `δn`.
pub fn verify_global_concentration(
    g: &Graph,
    p: f64,
    delta: f64,
    a: &VertexSet,
    b: &VertexSet,
) -> Result<PropertyReport> {
    check_p_delta(p, delta)?;
    let nf = g.n() as f64;
    at_least(a.len(), delta * nf, "A")?;
    at_least(b.len(), delta * nf, "B")?;
    if !a.is_disjoint(b) {
        return Err(Error::pre("A and B must be disjoint"));
    }
    let mut r = PropertyReport::new(Property::GlobalEdges, p, delta);
    let la = a.len() as f64;
    r.window(
        Vec::new(),
        g.edges_within(a) as f64,
        p * la * (la - 1.0) / 2.0,
        delta,
    );
    r.window(
        Vec::new(),
        g.edge_count_between(a, b) as f64,
        p * la * b.len() as f64,
        delta,
    );
    r.counts.insert("checked".into(), 2);
    Ok(r.finish())
}

/// Upper bound `2p⁴|X||Y||A||B|` on labelled 4-cycles `xyabx` with
/// `X ⊆ N(u)`, `Y ⊆ N(v)` disjoint, `A`, `B` disjoint.
#[allow(clippy::too_many_arguments)]
pub fn verify_c4_bound(
    g: &Graph,
    p: f64,
    delta: f64,
    u: usize,
    v: usize,
    x: &VertexSet,
    y: &VertexSet,
    a: &VertexSet,
    b: &VertexSet,
) -> Result<PropertyReport> {
    check_p_delta(p, delta)?;
    let nf = g.n() as f64;
    if u >= g.n() || v >= g.n() {
        return Err(Error::VertexOutOfRange {
            vertex: u.max(v),
            n: g.n(),
        });
    }
    if u == v {
        return Err(Error::pre("u and v must be distinct"));
    }
    if !x.is_subset(&g.neighbours(u)) || !y.is_subset(&g.neighbours(v)) {
        return Err(Error::pre("X and Y must lie in N(u) and N(v)"));
    }
    if !x.is_disjoint(y) || !a.is_disjoint(b) {
        return Err(Error::pre("X, Y and A, B must be disjoint pairs"));
    }
    at_least(x.len(), delta * p * nf, "X")?;
    at_least(y.len(), delta * p * nf, "Y")?;
    at_least(a.len(), delta * nf, "A")?;
    at_least(b.len(), delta * nf, "B")?;
    let count = g.count_c4_constrained(x, y, a, b);
    let bound = 2.0 * p.powi(4) * (x.len() * y.len()) as f64 * (a.len() * b.len()) as f64;
    let mut r = PropertyReport::new(Property::C4Bound, p, delta);
    r.params.insert("bound".into(), bound);
    r.counts.insert("c4_count".into(), count);
    r.counts.insert("checked".into(), 1);
    if count as f64 > bound + REL_TOL * bound {
        r.violation(Violation {
            ids: vec![u, v],
            value: count as f64,
            lo: None,
            hi: Some(bound),
        });
    }
    Ok(r.finish())
}

/// `2·exp(−δ²·n·p/3)`, the two-sided Chernoff bound for `Bin(n, p)`.
pub fn chernoff_tail(n_trials: f64, p: f64, delta: f64) -> Result<f64> {
    DeltaParams::new(delta)?;
    if !(0.0..=1.0).contains(&p) || n_trials.is_nan() || n_trials < 0.0 {
        return Err(Error::param("chernoff_tail needs n >= 0 and p in [0, 1]"));
    }
    Ok(2.0 * (-delta * delta * n_trials * p / 3.0).exp())
}

/// Smallest `s ≥ 2` with `n^{s²} p^{2s(s−1)} < 1`, i.e. the first-moment
/// threshold beyond which `G(n, p)` a.a.s. has no copy of `G_{s,s}`.
/// Returns `None` when no such `s` exists (`p ≥ n^{−1/2}`).
pub fn first_moment_threshold(n: f64, p: f64) -> Result<Option<u64>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("p = {p} outside (0, 1)")));
    }
    if n.is_nan() || n < 2.0 {
        return Err(Error::param("n must be at least 2"));
    }
    let (ln_n, ln_p) = (n.ln(), p.ln());
    // log E(s) = s² ln n + 2s(s−1) ln p = s·(s·L − 2 ln p) with L = ln n + 2 ln p
    let l = ln_n + 2.0 * ln_p;
    if l >= -1e-12 * ln_n {
        return Ok(None);
    }
    let log_e = |s: f64| s * s * ln_n + 2.0 * s * (s - 1.0) * ln_p;
    let mut s = ((2.0 * ln_p / l).floor() + 1.0).max(2.0);
    // settle rounding at the boundary by direct evaluation
    while s > 2.0 && log_e(s - 1.0) < 0.0 {
        s -= 1.0;
    }
    while log_e(s) >= 0.0 {
        s += 1.0;
    }
    Ok(Some(s as u64))
}

/// Which properties to check and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRun {
    pub properties: Vec<Property>,
    /// δ for degrees, (ii), (iii), (v) and (vi).
    pub delta: f64,
    /// δ for codegrees and (iv).
    pub delta_pairs: f64,
    /// Number of `(u, w)` pairs checked for (iv).
    pub pairs: usize,
    pub policy: PreconditionPolicy,
    pub codegree_limit: Option<usize>,
    pub seed: u64,
}

impl Default for PropertyRun {
    fn default() -> Self {
        PropertyRun {
            properties: Property::ALL.to_vec(),
            delta: 0.15,
            delta_pairs: 0.2,
            pairs: 50,
            policy: PreconditionPolicy::Record,
            codegree_limit: None,
            seed: 0,
        }
    }
}

fn random_set<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    avoid: Option<&VertexSet>,
) -> Result<VertexSet> {
    let pool: Vec<usize> = (0..n)
        .filter(|v| avoid.is_none_or(|a| !a.contains(*v)))
        .collect();
    let k = k.min(pool.len());
    VertexSet::from_ids(n, sample(rng, pool.len(), k).into_iter().map(|i| pool[i]))
}

/// Runs the selected property checks on `g`, choosing the vertices and sets
/// each check needs at random from `run.seed`:
///
/// - (ii): `X = N(v)` for a random `v`;
/// - (iii): a random `U` of size `⌈0.2n⌉`, or `⌈δn⌉` if larger;
/// - (iv): `U = N(u)`, `W = N(w)` for `run.pairs` random pairs;
/// - (v): a random balanced split `A`, `B`;
/// - (vi): `X = N(u) \ N(v)`, `Y = N(v) \ N(u)` for random `u ≠ v`, and
///   random disjoint `A`, `B` of size `⌈δn⌉`.
pub fn run_properties(g: &Graph, p: f64, run: &PropertyRun) -> Result<Vec<PropertyReport>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::param("property checks need at least 2 vertices"));
    }
    let mut out = Vec::new();
    for (k, &prop) in run.properties.iter().enumerate() {
        let mut rng = stream_rng(run.seed, k as u64);
        let report = match prop {
            Property::Degrees => verify_degrees(g, p, run.delta)?,
            Property::Codegrees => verify_codegrees(g, p, run.delta_pairs, run.codegree_limit)?,
            Property::HeavyIntoNeighbourhood => {
                let v = rng.gen_range(0..n);
                count_heavy_into_neighbourhood(g, p, run.delta, v, &g.neighbours(v))?.1
            }
            Property::HeavyIntoSet => {
                let k =
                    ((0.2 * n as f64).ceil() as usize).max((run.delta * n as f64).ceil() as usize);
                let u = random_set(&mut rng, n, k, None)?;
                count_heavy_into_set(g, p, run.delta, &u)?.1
            }
            Property::NeighbourhoodEdges => {
                let pairs: Vec<(usize, usize)> = (0..run.pairs)
                    .map(|_| {
                        let s = sample(&mut rng, n, 2);
                        (s.index(0), s.index(1))
                    })
                    .collect();
                verify_nbhd_edge_concentration_pairs(g, p, run.delta_pairs, &pairs, run.policy)?
            }
            Property::GlobalEdges => {
                let a = random_set(&mut rng, n, n / 2, None)?;
                let b = VertexSet::full(n).difference(&a);
                verify_global_concentration(g, p, run.delta, &a, &b)?
            }
            Property::C4Bound => {
                let s = sample(&mut rng, n, 2);
                let (u, v) = (s.index(0), s.index(1));
                let (nu, nv) = (g.neighbours(u), g.neighbours(v));
                let x = nu.difference(&nv);
                let y = nv.difference(&nu);
                let k = (run.delta * n as f64 - REL_TOL).ceil() as usize;
                let a = random_set(&mut rng, n, k, None)?;
                let b = random_set(&mut rng, n, k, Some(&a))?;
                verify_c4_bound(g, p, run.delta, u, v, &x, &y, &a, &b)?
            }
        };
        out.push(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_degree_margin_is_one_over_n() {
        let g = Graph::complete(10);
        let r = verify_degrees(&g, 1.0, 0.2).unwrap();
        assert!(r.pass);
        assert!((r.worst_relative_deviation.unwrap() - 0.1).abs() < 1e-12);
        let r = verify_degrees(&g, 1.0, 0.05).unwrap();
        assert!(!r.pass);
        assert_eq!(r.counts["violations"], 10);
    }

    #[test]
    fn empty_graph_fails_degrees_with_capped_list() {
        let r = verify_degrees(&Graph::empty(150), 0.5, 0.2).unwrap();
        assert!(!r.pass);
        assert_eq!(r.violations.len(), VIOLATION_CAP);
        assert_eq!(r.counts["violations"], 150);
    }

    #[test]
    fn k5_codegree_margin() {
        // codegree 3 against p²n = 5: inside the δ = 0.5 window, outside δ = 0.3
        let r = verify_codegrees(&Graph::complete(5), 1.0, 0.5, None).unwrap();
        assert!(r.pass);
        assert!((r.worst_relative_deviation.unwrap() - 0.4).abs() < 1e-12);
        let r = verify_codegrees(&Graph::complete(5), 1.0, 0.3, None).unwrap();
        assert!(!r.pass);
        assert_eq!(r.counts["violations"], 10);
        assert!(verify_codegrees(&Graph::empty(5), 0.5, 0.5, None)
            .map(|r| !r.pass)
            .unwrap());
        assert!(verify_codegrees(&Graph::empty(30), 0.5, 0.5, Some(20)).is_err());
    }

    #[test]
    fn chernoff_examples() {
        assert_eq!(chernoff_tail(0.0, 0.3, 1.0).unwrap(), 2.0);
        let b = chernoff_tail(300.0, 1.0, 1.0).unwrap();
        assert!((b / (2.0 * (-100f64).exp()) - 1.0).abs() < 1e-12);
        let (b1, b2) = (
            chernoff_tail(50.0, 0.4, 0.5).unwrap(),
            chernoff_tail(100.0, 0.4, 0.5).unwrap(),
        );
        assert!((b2 - b1 * b1 / 2.0).abs() < 1e-15);
        assert!(chernoff_tail(10.0, 0.5, 1.6).is_err());
        assert!(chernoff_tail(10.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn first_moment_examples() {
        let n = 1e6f64;
        assert_eq!(first_moment_threshold(n, 0.5 / n.sqrt()).unwrap(), Some(11));
        assert_eq!(first_moment_threshold(n, 1.0 / n.sqrt()).unwrap(), None);
        assert_eq!(first_moment_threshold(n, 0.5).unwrap(), None);
        assert!(first_moment_threshold(n, 1.0).is_err());
    }

    #[test]
    fn property_list_parsing() {
        assert_eq!(
            Property::parse_list("i,iv").unwrap(),
            vec![
                Property::Degrees,
                Property::Codegrees,
                Property::NeighbourhoodEdges
            ]
        );
        assert!(Property::parse_list("vii").is_err());
    }
}
