use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::EdgeClassifier;
use crate::error::Result;
use crate::regularity::strictly_below;

/// Vertex-disjoint edges, each written `(a, b)` with `a ∈ A`, `b ∈ B`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// True when no vertex appears twice.
    pub fn is_vertex_disjoint(&self) -> bool {
        let mut seen: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingReport {
    pub matching: Matching,
    pub size: usize,
    /// `γ|B|`.
    pub threshold: f64,
    pub below_threshold: bool,
    /// True when augmenting paths were run to exhaustion, so the matching is
    /// maximum among the bad edges.
    pub maximum: bool,
    pub bad_edges: u64,
    pub cross_edges: u64,
    /// Human-readable list of violated hypotheses (size ratios, degree floors).
    pub hypothesis_violations: Vec<String>,
}

/// Maximum matching among the `A`–`B` edges of `H` that are not in `R`:
/// greedy in sorted order, then improved by augmenting paths.
///
/// Hypotheses (`ηn ≤ |A| ≤ |B| ≤ 2|A|`, degree floors across the pair) are
/// checked and reported, never enforced.
pub fn bad_edge_matching(c: &EdgeClassifier<'_>, eta: f64) -> Result<MatchingReport> {
    let h = c.graph();
    let (a, b) = (c.a(), c.b());
    let params = c.params();
    let n = h.n();
    let mut violations = Vec::new();
    if strictly_below(a.len() as f64, eta * n as f64) {
        violations.push(format!(
            "|A| = {} below eta*n = {}",
            a.len(),
            eta * n as f64
        ));
    }
    if a.len() > b.len() {
        violations.push(format!("|A| = {} exceeds |B| = {}", a.len(), b.len()));
    }
    if b.len() > 2 * a.len() {
        violations.push(format!("|B| = {} exceeds 2|A| = {}", b.len(), 2 * a.len()));
    }
    let floor_b = params.alpha * params.p * b.len() as f64;
    let floor_a = params.alpha * params.p * a.len() as f64;
    let low_a = a
        .iter()
        .filter(|&x| strictly_below(h.degree_into(x, b) as f64, floor_b))
        .count();
    let low_b = b
        .iter()
        .filter(|&y| strictly_below(h.degree_into(y, a) as f64, floor_a))
        .count();
    if low_a > 0 {
        violations.push(format!(
            "{low_a} vertices of A have fewer than alpha*p*|B| neighbours in B"
        ));
    }
    if low_b > 0 {
        violations.push(format!(
            "{low_b} vertices of B have fewer than alpha*p*|A| neighbours in A"
        ));
    }

    let cross: Vec<(usize, usize)> = a
        .iter()
        .flat_map(|x| {
            h.neighbours(x)
                .intersection(b)
                .iter()
                .map(move |y| (x, y))
                .collect::<Vec<_>>()
        })
        .collect();
    let bad_flags: Vec<bool> = cross
        .par_iter()
        .map(|&(x, y)| c.in_r(y, x).map(|r| !r))
        .collect::<Result<_>>()?;

    // adjacency of the bad-edge graph, indexed by A-vertex
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bad_edges = 0;
    for (&(x, y), &bad) in cross.iter().zip(&bad_flags) {
        if bad {
            adj[x].push(y);
            bad_edges += 1;
        }
    }
    let mut mate_of_b = vec![usize::MAX; n];
    let mut mate_of_a = vec![usize::MAX; n];
    for x in a.iter() {
        if let Some(&y) = adj[x].iter().find(|&&y| mate_of_b[y] == usize::MAX) {
            mate_of_a[x] = y;
            mate_of_b[y] = x;
        }
    }
    let mut visited = vec![0u32; n];
    let mut stamp = 0;
    for x in a.iter() {
        if mate_of_a[x] == usize::MAX && !adj[x].is_empty() {
            stamp += 1;
            augment(x, &adj, &mut mate_of_a, &mut mate_of_b, &mut visited, stamp);
        }
    }
    let edges: Vec<(usize, usize)> = a
        .iter()
        .filter(|&x| mate_of_a[x] != usize::MAX)
        .map(|x| (x, mate_of_a[x]))
        .collect();
    let threshold = params.gamma * b.len() as f64;
    let size = edges.len();
    Ok(MatchingReport {
        matching: Matching { edges },
        size,
        threshold,
        below_threshold: strictly_below(size as f64, threshold),
        maximum: true,
        bad_edges,
        cross_edges: cross.len() as u64,
        hypothesis_violations: violations,
    })
}

/// Kuhn's augmenting-path step with an explicit stack.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    mate_of_a: &mut [usize],
    mate_of_b: &mut [usize],
    visited: &mut [u32],
    stamp: u32,
) -> bool {
    // frames: (A-vertex, next neighbour index)
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&mut (x, ref mut i)) = stack.last_mut() {
        if *i >= adj[x].len() {
            stack.pop();
            via.pop();
            continue;
        }
        let y = adj[x][*i];
        *i += 1;
        if visited[y] == stamp {
            continue;
        }
        visited[y] = stamp;
        via.push(y);
        let next = mate_of_b[y];
        if next == usize::MAX {
            // flip the alternating path root .. x, y
            for (k, &(ax, _)) in stack.iter().enumerate() {
                let by = via[k];
                mate_of_a[ax] = by;
                mate_of_b[by] = ax;
            }
            return true;
        }
        stack.push((next, 0));
    }
    false
}
