//! p-density, regularity and denseness verdicts, boundedness, and a heuristic
//! sparse regular partition.
//!
//! Verdicts come in two flavours. Exhaustive verdicts are exact and limited to
//! small sets. Sampled verdicts are one-sided: a returned witness is always
//! re-verified against the definition, but finding none is only evidence.

pub mod pair;
mod partition;
mod verdict;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use partition::{
    dense_pair_from_partition, regular_partition, DensePair, PairRecord, Partition,
    PartitionConfig, PartitionReport,
};
pub use verdict::{
    dense_verdict, enlargement_check, inheritance_sampler, is_bounded, is_dense_pair,
    is_regular_pair_exact, is_regular_pair_sampled, InheritanceParams, InheritanceReport,
    EXACT_SIDE_LIMIT,
};

/// Relative tolerance for comparing a density-derived quantity against a bound.
pub const REL_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn strictly_below(v: f64, bound: f64) -> bool {
    v < bound - REL_TOL * bound.abs()
}

#[inline]
pub(crate) fn strictly_above(v: f64, bound: f64) -> bool {
    v > bound + REL_TOL * bound.abs()
}

/// Smallest subset size `k ≥ 1` with `k ≥ frac·len`.
pub fn min_subset_size(frac: f64, len: usize) -> usize {
    ((frac * len as f64 - REL_TOL).ceil() as usize).clamp(1, len.max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityParams {
    pub p: f64,
    pub eps: f64,
    pub alpha: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub eta: f64,
}

impl DensityParams {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param(format!("eps = {} outside (0, 1)", self.eps)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param(format!(
                "alpha = {} outside (0, 1]",
                self.alpha
            )));
        }
        if self.k.is_nan() || self.k <= 1.0 {
            return Err(Error::param(format!("K = {} must exceed 1", self.k)));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param(format!("eta = {} outside (0, 1)", self.eta)));
        }
        Ok(())
    }
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "density scale p = {p} outside (0, 1]"
        )))
    }
}

/// How a verdict is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}

/// A pair of subsets refuting regularity, denseness or boundedness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: VertexSet,
    pub y: VertexSet,
}

/// Outcome of a regularity, denseness or boundedness check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub witness: Option<Witness>,
    pub trials_used: usize,
    pub exhaustive: bool,
}

pub type DenseVerdict = Verdict;

impl Verdict {
    /// True when no witness was found.
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// `e_H(X, Y) / (p |X| |Y|)`.
pub fn p_density(h: &Graph, x: &VertexSet, y: &VertexSet, p: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    if y.is_empty() {
        return Err(Error::EmptySet("Y"));
    }
    check_p(p)?;
    Ok(h.edge_count_between(x, y) as f64 / (p * x.len() as f64 * y.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn p_density_examples() {
        let kb = Graph::complete_bipartite(3, 3);
        let (x, y) = (set(6, &[0, 1, 2]), set(6, &[3, 4, 5]));
        assert_eq!(p_density(&kb, &x, &y, 1.0).unwrap(), 1.0);
        assert_eq!(p_density(&Graph::empty(6), &x, &y, 1.0).unwrap(), 0.0);
        let c4 = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            p_density(&c4, &set(4, &[0, 2]), &set(4, &[1, 3]), 0.5).unwrap(),
            2.0
        );
        assert!(matches!(
            p_density(&kb, &VertexSet::new(6), &y, 1.0),
            Err(Error::EmptySet(_))
        ));
        assert!(p_density(&kb, &x, &y, 0.0).is_err());
    }

    #[test]
    fn min_subset_size_rounds_up_with_tolerance() {
        assert_eq!(min_subset_size(0.25, 8), 2);
        assert_eq!(min_subset_size(0.3, 10), 3);
        assert_eq!(min_subset_size(0.31, 10), 4);
        assert_eq!(min_subset_size(0.01, 10), 1);
        assert_eq!(min_subset_size(1.0, 7), 7);
    }

    #[test]
    fn density_params_validation() {
        let ok = DensityParams {
            p: 0.5,
            eps: 0.1,
            alpha: 0.5,
            k: 2.0,
            eta: 0.25,
        };
        assert!(ok.validate().is_ok());
        assert!(DensityParams { k: 1.0, ..ok }.validate().is_err());
        assert!(DensityParams { eps: 1.0, ..ok }.validate().is_err());
        assert!(DensityParams { p: 0.0, ..ok }.validate().is_err());
    }
}
