//! Row-by-row growth of the grid: the first path, candidate sets for the
//! next row, reachable subsets, and the extension step.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::constants::ConstantChain;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::quality::EdgeClassifier;
use crate::random::stream_rng;
use crate::regularity::{strictly_above, strictly_below};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// An `R ∩ Q` verdict for the ordered edge `(w, z)`, `w ∈ B`, under `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCertificate {
    pub w: usize,
    pub z: usize,
    pub seed: u64,
}

/// One row of the grid: a path alternating between the two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRow {
    pub vertices: Vec<usize>,
    pub sides: Vec<Side>,
    pub certificates: Vec<EdgeCertificate>,
}

/// Rows built so far and the vertices they use.
#[derive(Clone, Debug)]
pub struct EmbeddingState {
    pub rows: Vec<PathRow>,
    pub used: VertexSet,
    pub a: VertexSet,
    pub b: VertexSet,
    pub restarts: usize,
}

impl EmbeddingState {
    pub fn new(a: VertexSet, b: VertexSet) -> Self {
        EmbeddingState {
            rows: Vec::new(),
            used: VertexSet::new(a.universe()),
            a,
            b,
            restarts: 0,
        }
    }

    pub fn side_of(&self, v: usize) -> Option<Side> {
        if self.a.contains(v) {
            Some(Side::A)
        } else if self.b.contains(v) {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn side(&self, s: Side) -> &VertexSet {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn push(&mut self, row: PathRow) -> Result<()> {
        for &v in &row.vertices {
            if !self.used.insert(v) {
                return Err(Error::Invariant(format!(
                    "vertex {v} already used by an earlier row"
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Vertices of the last row whose neighbourhood across has lost more than
    /// a `δ` fraction to used vertices.
    pub fn slack_violations(&self, h: &Graph, delta: f64) -> usize {
        let Some(row) = self.rows.last() else {
            return 0;
        };
        row.vertices
            .iter()
            .zip(&row.sides)
            .filter(|&(&v, &side)| {
                let across = h.neighbours(v).intersection(self.side(side.other()));
                let free = across.difference(&self.used).len();
                strictly_below(free as f64, (1.0 - delta) * across.len() as f64)
            })
            .count()
    }
}

/// Orders an `A`–`B` edge with its `B` endpoint first.
fn oriented(c: &EdgeClassifier<'_>, u: usize, v: usize) -> (usize, usize) {
    if c.b().contains(u) {
        (u, v)
    } else {
        (v, u)
    }
}

fn certified(c: &EdgeClassifier<'_>, u: usize, v: usize) -> Result<Option<EdgeCertificate>> {
    let (w, z) = oriented(c, u, v);
    Ok(c.in_r_and_q(w, z)?.then(|| EdgeCertificate {
        w,
        z,
        seed: c.edge_seed(w, z),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPathOutcome {
    pub path: Option<PathRow>,
    /// Longest certified path seen (the path itself on success).
    pub longest: Vec<usize>,
    /// Edge verdicts requested.
    pub nodes: u64,
}

/// Depth-first search for an `s`-vertex path of `R ∩ Q` edges alternating
/// between `A` and `B`. Start vertices are tried in ascending order, rotated
/// by `skip`; neighbours in ascending order (or shuffled when `order_seed`
/// is set).
pub fn seed_path(
    c: &EdgeClassifier<'_>,
    s: usize,
    budget: u64,
    skip: usize,
    order_seed: Option<u64>,
) -> Result<SeedPathOutcome> {
    let h = c.graph();
    let mut starts: Vec<usize> = c.a().union(c.b()).iter().collect();
    if let Some(seed) = order_seed {
        starts.shuffle(&mut stream_rng(seed, 0));
    }
    if !starts.is_empty() {
        let k = skip % starts.len();
        starts.rotate_left(k);
    }
    let across = |v: usize| -> Vec<usize> {
        let other = if c.a().contains(v) { c.b() } else { c.a() };
        let mut out: Vec<usize> = h.neighbours(v).intersection(other).iter().collect();
        if let Some(seed) = order_seed {
            out.shuffle(&mut stream_rng(seed, v as u64 + 1));
        }
        out
    };
    let mut longest: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    let mut on_path = VertexSet::new(h.n());
    for &start in &starts {
        let mut path = vec![start];
        let mut certs: Vec<EdgeCertificate> = Vec::new();
        on_path.insert(start);
        let mut frames: Vec<(Vec<usize>, usize)> = vec![(across(start), 0)];
        if longest.is_empty() {
            longest = path.clone();
        }
        while path.len() < s {
            let Some((cands, next)) = frames.last_mut() else {
                break;
            };
            if *next >= cands.len() {
                frames.pop();
                let v = path.pop().expect("frame per path vertex");
                on_path.remove(v);
                certs.pop();
                if frames.is_empty() {
                    break;
                }
                continue;
            }
            let u = cands[*next];
            *next += 1;
            if on_path.contains(u) {
                continue;
            }
            if nodes >= budget {
                break;
            }
            nodes += 1;
            let last = *path.last().expect("nonempty path");
            if let Some(cert) = certified(c, last, u)? {
                path.push(u);
                certs.push(cert);
                on_path.insert(u);
                frames.push((across(u), 0));
                if path.len() > longest.len() {
                    longest = path.clone();
                }
            }
        }
        if path.len() == s {
            let sides = path
                .iter()
                .map(|&v| if c.a().contains(v) { Side::A } else { Side::B })
                .collect();
            return Ok(SeedPathOutcome {
                path: Some(PathRow {
                    vertices: path,
                    sides,
                    certificates: certs,
                }),
                longest,
                nodes,
            });
        }
        for &v in &path {
            on_path.remove(v);
        }
        if nodes >= budget {
            break;
        }
    }
    Ok(SeedPathOutcome {
        path: None,
        longest,
        nodes,
    })
}

/// Sizes behind one candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateStats {
    /// Unused neighbours across.
    pub base: usize,
    /// Of those, neighbours of another same-side row vertex.
    pub overlap: usize,
    /// Neighbours across with too many neighbours among used vertices.
    pub heavy: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFailure {
    pub index: usize,
    /// `used`, `overlap` or `heavy`: the subtraction that emptied the set.
    pub cause: String,
}

#[derive(Clone, Debug)]
pub struct Candidates {
    pub sets: Vec<VertexSet>,
    pub stats: Vec<CandidateStats>,
    pub failure: Option<CandidateFailure>,
}

/// Candidate sets for the row above the last one: for each row vertex `xᵢ`,
/// its unused neighbours across, minus neighbours of other row vertices on
/// the same side, minus vertices with more than `(δ/2)αp|side|` neighbours
/// among used vertices other than `xᵢ`.
pub fn candidate_sets(
    h: &Graph,
    state: &EmbeddingState,
    chain: &ConstantChain,
    p: f64,
) -> Result<Candidates> {
    let row = state
        .rows
        .last()
        .ok_or_else(|| Error::pre("candidate sets need at least one row"))?;
    let s = row.vertices.len();
    let nbhd: Vec<VertexSet> = row
        .vertices
        .iter()
        .zip(&row.sides)
        .map(|(&x, &side)| h.neighbours(x).intersection(state.side(side.other())))
        .collect();
    // prefix and suffix unions of same-side neighbourhoods
    let mut overlap_of = vec![VertexSet::new(h.n()); s];
    for side in [Side::A, Side::B] {
        let idx: Vec<usize> = (0..s).filter(|&i| row.sides[i] == side).collect();
        let mut prefix = VertexSet::new(h.n());
        for &i in &idx {
            overlap_of[i] = prefix.clone();
            prefix.union_with(&nbhd[i]);
        }
        let mut suffix = VertexSet::new(h.n());
        for &i in idx.iter().rev() {
            overlap_of[i].union_with(&suffix);
            suffix.union_with(&nbhd[i]);
        }
    }
    let mut sets = Vec::with_capacity(s);
    let mut stats = Vec::with_capacity(s);
    let mut failure = None;
    for i in 0..s {
        let x = row.vertices[i];
        let side_len = state.side(row.sides[i].other()).len();
        let limit = chain.delta / 2.0 * chain.alpha * p * side_len as f64;
        let base = nbhd[i].difference(&state.used);
        let overlap = base.intersection(&overlap_of[i]);
        let mut heavy = VertexSet::new(h.n());
        let mut used_but_x = state.used.clone();
        used_but_x.remove(x);
        for v in nbhd[i].iter() {
            if strictly_above(h.degree_into(v, &used_but_x) as f64, limit) {
                heavy.insert(v);
            }
        }
        let set = base.difference(&overlap).difference(&heavy);
        if set.is_empty() && failure.is_none() {
            let cause = if base.is_empty() {
                "used"
            } else if base.difference(&overlap).is_empty() {
                "overlap"
            } else {
                "heavy"
            };
            failure = Some(CandidateFailure {
                index: i,
                cause: cause.into(),
            });
        }
        stats.push(CandidateStats {
            base: base.len(),
            overlap: overlap.len(),
            heavy: heavy.intersection(&base).len(),
            size: set.len(),
        });
        sets.push(set);
    }
    let mut union = VertexSet::new(h.n());
    for set in &sets {
        if !union.is_disjoint(set) {
            return Err(Error::Invariant("candidate sets overlap".into()));
        }
        union.union_with(set);
    }
    Ok(Candidates {
        sets,
        stats,
        failure,
    })
}

#[derive(Clone, Debug)]
pub struct Reachable {
    pub sets: Vec<VertexSet>,
    /// For `i ≥ 1`, the chosen predecessor in set `i − 1` of each vertex of set `i`.
    pub pred: Vec<HashMap<usize, usize>>,
    /// Indices whose reachable set has fewer than half the candidates.
    pub below_half: Vec<usize>,
    /// First index whose reachable set is empty.
    pub failure: Option<usize>,
}

/// `X′₁ = X₁`; `X′ᵢ` keeps the vertices of `Xᵢ` joined to some vertex of
/// `X′ᵢ₋₁` by an `R ∩ Q` edge, recording the smallest such neighbour.
pub fn reachable_sets(c: &EdgeClassifier<'_>, sets: &[VertexSet]) -> Result<Reachable> {
    let h = c.graph();
    let mut out: Vec<VertexSet> = Vec::with_capacity(sets.len());
    let mut pred = vec![HashMap::new()];
    let mut below_half = Vec::new();
    let mut failure = None;
    if let Some(first) = sets.first() {
        out.push(first.clone());
    }
    for i in 1..sets.len() {
        let mut reach = VertexSet::new(h.n());
        let mut links = HashMap::new();
        for v in sets[i].iter() {
            for w in h.neighbours(v).intersection(&out[i - 1]).iter() {
                if certified(c, v, w)?.is_some() {
                    reach.insert(v);
                    links.insert(v, w);
                    break;
                }
            }
        }
        if 2 * reach.len() < sets[i].len() {
            below_half.push(i);
        }
        let empty = reach.is_empty();
        out.push(reach);
        pred.push(links);
        if empty {
            failure = Some(i);
            break;
        }
    }
    if sets.first().is_some_and(|s| s.is_empty()) {
        failure = Some(0);
    }
    Ok(Reachable {
        sets: out,
        pred,
        below_half,
        failure,
    })
}

/// Builds the next row from the reachable sets by walking predecessors back
/// from the smallest (or a seeded random) vertex of the last set.
pub fn extend_row(
    c: &EdgeClassifier<'_>,
    state: &EmbeddingState,
    candidates: &[VertexSet],
    reach: &Reachable,
    pick_seed: Option<u64>,
) -> Result<PathRow> {
    let h = c.graph();
    let row = state
        .rows
        .last()
        .ok_or_else(|| Error::pre("extension needs at least one row"))?;
    let s = row.vertices.len();
    if reach.failure.is_some() || reach.sets.len() != s {
        return Err(Error::pre("reachable sets incomplete"));
    }
    let last: Vec<usize> = reach.sets[s - 1].iter().collect();
    let mut y = match pick_seed {
        Some(seed) => *last.choose(&mut stream_rng(seed, 0)).expect("nonempty"),
        None => last[0],
    };
    let mut vertices = vec![y];
    for i in (1..s).rev() {
        y = *reach.pred[i]
            .get(&y)
            .ok_or_else(|| Error::Invariant(format!("predecessor chain broken at index {i}")))?;
        vertices.push(y);
    }
    vertices.reverse();
    let mut certificates = Vec::with_capacity(s.saturating_sub(1));
    for i in 0..s {
        let v = vertices[i];
        if !candidates[i].contains(v) || !h.has_edge(row.vertices[i], v) {
            return Err(Error::Invariant(format!(
                "row vertex {v} is not a candidate for index {i}"
            )));
        }
        if i + 1 < s {
            let cert = certified(c, v, vertices[i + 1])?.ok_or_else(|| {
                Error::Invariant(format!(
                    "path edge {v}-{} lost its certificate",
                    vertices[i + 1]
                ))
            })?;
            certificates.push(cert);
        }
    }
    let sides = row.sides.iter().map(|s| s.other()).collect();
    Ok(PathRow {
        vertices,
        sides,
        certificates,
    })
}
