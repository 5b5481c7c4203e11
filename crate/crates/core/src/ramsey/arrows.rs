//! Exhaustive decision of `G → F` for small hosts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::iso::{search, subgraph_contains, Plan, PATTERN_LIMIT};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest host edge count accepted by [`arrows_exhaustive`].
pub const ARROWS_EDGE_LIMIT: usize = 30;
const ARROWS_VERTEX_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowsOptions {
    /// Maximum number of colourings to examine.
    pub budget: Option<u64>,
    /// Fix the first edge to red, halving the work (swapping colours maps
    /// escaping colourings to escaping colourings).
    pub symmetry: bool,
}

impl Default for ArrowsOptions {
    fn default() -> Self {
        ArrowsOptions {
            budget: None,
            symmetry: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowsOutcome {
    /// Every colouring has a monochromatic copy of `F`.
    Yes,
    /// This colouring (one bit per host edge in sorted order, 0 = red) has none.
    No { witness: Vec<u8> },
    /// The budget ran out before a decision.
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowsReport {
    pub host_vertices: usize,
    pub host_edges: usize,
    pub pattern_vertices: usize,
    pub pattern_edges: usize,
    pub outcome: ArrowsOutcome,
    pub colourings_total: u64,
    pub colourings_tested: u64,
    pub symmetry: bool,
}

impl ArrowsReport {
    /// True when the oracle reached a decision.
    pub fn decided(&self) -> bool {
        !matches!(self.outcome, ArrowsOutcome::BudgetExceeded)
    }
}

struct Oracle {
    n: usize,
    edges: Vec<(usize, usize)>,
    offset: usize,
    plan: Plan,
    f_edges: Vec<(usize, usize)>,
}

/// Per-colour adjacency and the copy of `F` last found in it, if any.
struct ClassState {
    adj: Vec<u64>,
    copy: Option<Vec<usize>>,
}

impl Oracle {
    fn bits_at(&self, index: u64) -> Vec<u8> {
        let gray = index ^ (index >> 1);
        (0..self.edges.len())
            .map(|e| {
                if e < self.offset {
                    0
                } else {
                    (gray >> (e - self.offset) & 1) as u8
                }
            })
            .collect()
    }

    fn find(&self, adj: &[u64]) -> Option<Vec<usize>> {
        search(&self.plan, self.n, 1, adj)
    }

    fn uses(&self, copy: &[usize], (u, v): (usize, usize)) -> bool {
        self.f_edges.iter().any(|&(a, b)| {
            let (x, y) = (copy[a], copy[b]);
            (x == u && y == v) || (x == v && y == u)
        })
    }

    /// Scans Gray-code indices `start..end`; returns the first index whose
    /// colouring has no monochromatic `F`, and the number of colourings examined.
    fn scan(&self, start: u64, end: u64) -> (Option<u64>, u64) {
        let bits = self.bits_at(start);
        let mut classes = [
            ClassState {
                adj: vec![0; self.n],
                copy: None,
            },
            ClassState {
                adj: vec![0; self.n],
                copy: None,
            },
        ];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let a = &mut classes[bits[e] as usize].adj;
            a[u] |= 1 << v;
            a[v] |= 1 << u;
        }
        for c in classes.iter_mut() {
            c.copy = self.find(&c.adj);
        }
        for i in start..end {
            if i > start {
                let e = self.offset + i.trailing_zeros() as usize;
                let (u, v) = self.edges[e];
                let from = if classes[0].adj[u] >> v & 1 == 1 {
                    0
                } else {
                    1
                };
                let to = 1 - from;
                classes[from].adj[u] &= !(1 << v);
                classes[from].adj[v] &= !(1 << u);
                classes[to].adj[u] |= 1 << v;
                classes[to].adj[v] |= 1 << u;
                if classes[from]
                    .copy
                    .as_deref()
                    .is_some_and(|c| self.uses(c, (u, v)))
                {
                    classes[from].copy = self.find(&classes[from].adj);
                }
                if classes[to].copy.is_none() {
                    classes[to].copy = self.find(&classes[to].adj);
                }
            }
            if classes[0].copy.is_none() && classes[1].copy.is_none() {
                return (Some(i), i - start + 1);
            }
        }
        (None, end - start)
    }
}

/// Decides whether every red/blue colouring of `G`'s edges has a
/// monochromatic copy of `F`, by enumerating colourings in Gray-code order.
pub fn arrows_exhaustive(g: &Graph, f: &Graph, opts: ArrowsOptions) -> Result<ArrowsReport> {
    if g.edge_count() > ARROWS_EDGE_LIMIT || g.n() > ARROWS_VERTEX_LIMIT {
        return Err(Error::TooLarge(format!(
            "exhaustive arrow check needs at most {ARROWS_EDGE_LIMIT} edges and \
             {ARROWS_VERTEX_LIMIT} vertices, host has {} edges on {} vertices",
            g.edge_count(),
            g.n()
        )));
    }
    if f.n() > PATTERN_LIMIT {
        return Err(Error::TooLarge(format!(
            "pattern has more than {PATTERN_LIMIT} vertices"
        )));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let offset = usize::from(opts.symmetry && !edges.is_empty());
    let total = 1u64 << (edges.len() - offset);
    let oracle = Oracle {
        n: g.n(),
        offset,
        plan: Plan::new(f),
        f_edges: f.edges().collect(),
        edges,
    };
    let limit = opts.budget.map_or(total, |b| b.min(total));
    let (found, tested) = if limit < total {
        oracle.scan(0, limit)
    } else {
        let chunks = total.min(256);
        let step = total.div_ceil(chunks);
        let results: Vec<(Option<u64>, u64)> = (0..chunks)
            .into_par_iter()
            .map(|c| oracle.scan(c * step, ((c + 1) * step).min(total)))
            .collect();
        // the answer is the first escaping colouring; count work up to it
        let mut tested = 0;
        let mut found = None;
        for (hit, t) in results {
            tested += t;
            if hit.is_some() {
                found = hit;
                break;
            }
        }
        (found, tested)
    };
    let outcome = match found {
        Some(i) => {
            let witness = oracle.bits_at(i);
            verify_escape(g, f, &witness)?;
            ArrowsOutcome::No { witness }
        }
        None if limit < total => ArrowsOutcome::BudgetExceeded,
        None => ArrowsOutcome::Yes,
    };
    Ok(ArrowsReport {
        host_vertices: g.n(),
        host_edges: g.edge_count(),
        pattern_vertices: f.n(),
        pattern_edges: f.edge_count(),
        outcome,
        colourings_total: total,
        colourings_tested: tested,
        symmetry: opts.symmetry,
    })
}

/// Confirms that neither colour class of `bits` contains `F`.
pub fn verify_escape(g: &Graph, f: &Graph, bits: &[u8]) -> Result<()> {
    for colour in [0u8, 1] {
        let mut i = 0;
        let class = g.spanning_subgraph(|_, _| {
            let keep = bits[i] == colour;
            i += 1;
            keep
        });
        if subgraph_contains(&class, f)?.is_some() {
            return Err(Error::Invariant(format!(
                "witness colouring has a monochromatic copy of the pattern in colour {colour}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_does_not_arrow_itself() {
        let c4 = Graph::cycle(4).unwrap();
        let r = arrows_exhaustive(&c4, &c4, ArrowsOptions::default()).unwrap();
        assert!(matches!(r.outcome, ArrowsOutcome::No { .. }));
    }

    #[test]
    fn budget_is_reported() {
        let r = arrows_exhaustive(
            &Graph::complete(6),
            &Graph::cycle(4).unwrap(),
            ArrowsOptions {
                budget: Some(10),
                symmetry: true,
            },
        )
        .unwrap();
        assert_eq!(r.outcome, ArrowsOutcome::BudgetExceeded);
        assert_eq!(r.colourings_tested, 10);
    }

    #[test]
    fn large_hosts_rejected() {
        assert!(arrows_exhaustive(
            &Graph::complete(9),
            &Graph::cycle(4).unwrap(),
            ArrowsOptions::default()
        )
        .is_err());
    }
}
