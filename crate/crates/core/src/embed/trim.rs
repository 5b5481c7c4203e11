use serde::{Deserialize, Serialize};

use super::constants::ConstantChain;
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::regularity::{strictly_above, strictly_below};

/// Sizes of the sets removed while trimming a dense pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimReport {
    pub a1: usize,
    pub b1: usize,
    /// Too few neighbours across.
    pub a2: usize,
    pub b2: usize,
    /// Too many neighbours across.
    pub a2_prime: usize,
    pub b2_prime: usize,
    /// Many neighbours among the removed vertices of the other side.
    pub a3: usize,
    pub b3: usize,
    pub a: usize,
    pub b: usize,
    /// True when the trimmed sides were exchanged so that `|A| ≤ |B|`.
    pub swapped: bool,
    /// Vertices of the trimmed pair with fewer than `αp|other side|`
    /// neighbours across.
    pub below_degree_floor: usize,
}

/// Removes low-degree, high-degree and badly attached vertices from a dense
/// pair `(A₁, B₁)`; returns `(A, B)` with `|A| ≤ |B|`.
pub fn trim_dense_pair(
    h: &Graph,
    a1: &VertexSet,
    b1: &VertexSet,
    chain: &ConstantChain,
    p: f64,
) -> Result<(VertexSet, VertexSet, TrimReport)> {
    if !a1.is_disjoint(b1) {
        return Err(Error::pre("dense pair sides overlap"));
    }
    let ap = chain.alpha_prime;
    let low = |v: usize, other: &VertexSet| {
        strictly_below(
            h.degree_into(v, other) as f64,
            ap / 8.0 * p * other.len() as f64,
        )
    };
    let high = |v: usize, other: &VertexSet| {
        strictly_above(
            h.degree_into(v, other) as f64,
            (1.0 + chain.delta) * p * other.len() as f64,
        )
    };
    let select = |side: &VertexSet, pred: &dyn Fn(usize) -> bool| {
        let mut out = VertexSet::new(side.universe());
        for v in side.iter().filter(|&v| pred(v)) {
            out.insert(v);
        }
        out
    };
    let a2 = select(a1, &|v| low(v, b1));
    let b2 = select(b1, &|v| low(v, a1));
    let a2p = select(a1, &|v| high(v, b1));
    let b2p = select(b1, &|v| high(v, a1));
    let a_removed = a2.union(&a2p);
    let b_removed = b2.union(&b2p);
    let attached = |v: usize, removed: &VertexSet, other: &VertexSet| {
        !strictly_below(
            h.degree_into(v, removed) as f64,
            ap / 16.0 * p * other.len() as f64,
        )
    };
    let a3 = select(&a1.difference(&a_removed), &|v| attached(v, &b_removed, b1));
    let b3 = select(&b1.difference(&b_removed), &|v| attached(v, &a_removed, a1));
    let mut a = a1.difference(&a_removed).difference(&a3);
    let mut b = b1.difference(&b_removed).difference(&b3);
    if a.is_empty() || b.is_empty() {
        return Err(Error::Embedding {
            stage: "trim".into(),
            message: format!(
                "trimmed pair has an empty side (|A| = {}, |B| = {})",
                a.len(),
                b.len()
            ),
        });
    }
    let swapped = a.len() > b.len();
    if swapped {
        std::mem::swap(&mut a, &mut b);
    }
    let below = a
        .iter()
        .filter(|&v| {
            strictly_below(
                h.degree_into(v, &b) as f64,
                chain.alpha * p * b.len() as f64,
            )
        })
        .count()
        + b.iter()
            .filter(|&v| {
                strictly_below(
                    h.degree_into(v, &a) as f64,
                    chain.alpha * p * a.len() as f64,
                )
            })
            .count();
    let report = TrimReport {
        a1: a1.len(),
        b1: b1.len(),
        a2: a2.len(),
        b2: b2.len(),
        a2_prime: a2p.len(),
        b2_prime: b2p.len(),
        a3: a3.len(),
        b3: b3.len(),
        a: a.len(),
        b: b.len(),
        swapped,
        below_degree_floor: below,
    };
    Ok((a, b, report))
}
