use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::derive_seed;
use crate::regularity::pair::PairMatrix;
use crate::regularity::{check_p, dense_verdict, strictly_below, Mode, EXACT_SIDE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeClassParams {
    pub eps_prime: f64,
    pub alpha: f64,
    pub p: f64,
    /// Allowed fraction of inner edges outside `R` for membership in `Q`.
    pub nu: f64,
    /// Matching fraction used by the bad-edge matching check.
    pub gamma: f64,
    /// Sampling budget for each neighbourhood-pair dense verdict.
    pub dense_trials: usize,
    pub seed: u64,
}

impl EdgeClassParams {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        // eps' = alpha makes the denseness condition vacuous
        if !(self.eps_prime > 0.0 && self.eps_prime <= self.alpha) {
            return Err(Error::param(format!(
                "eps' = {} must lie in (0, alpha = {}]",
                self.eps_prime, self.alpha
            )));
        }
        if self.alpha > 1.0 {
            return Err(Error::param(format!("alpha = {} exceeds 1", self.alpha)));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::param(format!("nu = {} outside (0, 1)", self.nu)));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::param(format!(
                "gamma = {} outside (0, 1)",
                self.gamma
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RVerdict {
    holds: bool,
    seed: u64,
    trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct QVerdict {
    holds: bool,
    inner_edges: u64,
    inner_in_r: u64,
}

/// One line of a classification dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub u: usize,
    pub v: usize,
    #[serde(rename = "in_R")]
    pub in_r: Option<bool>,
    #[serde(rename = "in_Q")]
    pub in_q: Option<bool>,
    pub seed: u64,
    pub trials: usize,
}

/// Lazily evaluated `R`/`Q` membership for edges of `H` relative to a
/// disjoint pair `(A, B)`.
///
/// Edges are ordered: for `(w, z)` the pair examined is
/// `(N_H(w, A), N_H(z, B))`. An inner edge between `a ∈ A` and `b ∈ B` is
/// evaluated as `(b, a)`, so both neighbourhoods cross the pair.
pub struct EdgeClassifier<'g> {
    h: &'g Graph,
    a: VertexSet,
    b: VertexSet,
    params: EdgeClassParams,
    r_memo: DashMap<(u32, u32), RVerdict>,
    q_memo: DashMap<(u32, u32), QVerdict>,
}

impl<'g> EdgeClassifier<'g> {
    pub fn new(h: &'g Graph, a: VertexSet, b: VertexSet, params: EdgeClassParams) -> Result<Self> {
        params.validate()?;
        if a.universe() != h.n() || b.universe() != h.n() {
            return Err(Error::param("A and B must be subsets of V(H)"));
        }
        if !a.is_disjoint(&b) {
            return Err(Error::pre("A and B must be disjoint"));
        }
        Ok(EdgeClassifier {
            h,
            a,
            b,
            params,
            r_memo: DashMap::new(),
            q_memo: DashMap::new(),
        })
    }

    pub fn params(&self) -> &EdgeClassParams {
        &self.params
    }

    pub fn graph(&self) -> &'g Graph {
        self.h
    }

    pub fn a(&self) -> &VertexSet {
        &self.a
    }

    pub fn b(&self) -> &VertexSet {
        &self.b
    }

    fn check_edge(&self, w: usize, z: usize) -> Result<()> {
        let n = self.h.n();
        for v in [w, z] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if !self.h.has_edge(w, z) {
            return Err(Error::pre(format!("{w}-{z} is not an edge of H")));
        }
        Ok(())
    }

    /// Seed of the dense verdict for the ordered edge `(w, z)`.
    pub fn edge_seed(&self, w: usize, z: usize) -> u64 {
        derive_seed(self.params.seed, ((w as u64) << 32) | z as u64)
    }

    fn compute_r(&self, w: usize, z: usize) -> Result<RVerdict> {
        let seed = self.edge_seed(w, z);
        let p = self.params.p;
        let alpha = self.params.alpha;
        let nw = self.h.neighbours(w).intersection(&self.a);
        let nz = self.h.neighbours(z).intersection(&self.b);
        let floor_a = alpha * p * self.a.len() as f64;
        let floor_b = alpha * p * self.b.len() as f64;
        if nw.is_empty()
            || nz.is_empty()
            || strictly_below(nw.len() as f64, floor_a)
            || strictly_below(nz.len() as f64, floor_b)
        {
            return Ok(RVerdict {
                holds: false,
                seed,
                trials: 0,
            });
        }
        let mode = if nw.len() <= EXACT_SIDE_LIMIT && nz.len() <= EXACT_SIDE_LIMIT {
            Mode::Exhaustive
        } else {
            Mode::Sampled {
                trials: self.params.dense_trials,
                seed,
            }
        };
        let m = PairMatrix::new(self.h, &nw, &nz);
        let v = dense_verdict(self.h, &m, self.params.eps_prime, alpha, p, mode)?;
        Ok(RVerdict {
            holds: v.holds(),
            seed,
            trials: v.trials_used,
        })
    }

    fn r_verdict(&self, w: usize, z: usize) -> Result<RVerdict> {
        let key = (w as u32, z as u32);
        if let Some(v) = self.r_memo.get(&key) {
            return Ok(*v);
        }
        let v = self.compute_r(w, z)?;
        self.r_memo.insert(key, v);
        Ok(v)
    }

    /// Membership of the ordered edge `(w, z)` in `R`.
    pub fn in_r(&self, w: usize, z: usize) -> Result<bool> {
        self.check_edge(w, z)?;
        Ok(self.r_verdict(w, z)?.holds)
    }

    /// Inner edges of `(w, z)` as `(b, a)` with `a ∈ N(w, A)`, `b ∈ N(z, B)`.
    pub fn inner_edges(&self, w: usize, z: usize) -> Vec<(usize, usize)> {
        let nw = self.h.neighbours(w).intersection(&self.a);
        let nz = self.h.neighbours(z).intersection(&self.b);
        let mut out = Vec::new();
        for a in nw.iter() {
            let nb = self.h.neighbours(a).intersection(&nz);
            out.extend(nb.iter().map(|b| (b, a)));
        }
        out
    }

    fn compute_q(&self, w: usize, z: usize) -> Result<QVerdict> {
        let inner = self.inner_edges(w, z);
        let in_r: Vec<bool> = inner
            .par_iter()
            .map(|&(x, y)| self.r_verdict(x, y).map(|v| v.holds))
            .collect::<Result<_>>()?;
        let m = inner.len() as u64;
        let r = in_r.iter().filter(|&&b| b).count() as u64;
        // an empty inner edge set satisfies the fraction condition vacuously
        let holds = m == 0 || !strictly_below(r as f64, (1.0 - self.params.nu) * m as f64);
        Ok(QVerdict {
            holds,
            inner_edges: m,
            inner_in_r: r,
        })
    }

    /// Membership of the ordered edge `(w, z)` in `Q`. Every inner `R`
    /// verdict is computed and memoized.
    pub fn in_q(&self, w: usize, z: usize) -> Result<bool> {
        self.check_edge(w, z)?;
        let key = (w as u32, z as u32);
        if let Some(v) = self.q_memo.get(&key) {
            return Ok(v.holds);
        }
        let v = self.compute_q(w, z)?;
        self.q_memo.insert(key, v);
        Ok(v.holds)
    }

    /// `(inner edges, inner edges in R)` for a classified edge.
    pub fn q_counts(&self, w: usize, z: usize) -> Option<(u64, u64)> {
        self.q_memo
            .get(&(w as u32, z as u32))
            .map(|v| (v.inner_edges, v.inner_in_r))
    }

    /// Membership in `R ∩ Q`; `Q` is only evaluated for edges in `R`.
    pub fn in_r_and_q(&self, w: usize, z: usize) -> Result<bool> {
        Ok(self.in_r(w, z)? && self.in_q(w, z)?)
    }

    /// Recomputes the `Q` verdict of `(w, z)` without consulting or filling
    /// the memo tables.
    pub fn in_q_fresh(&self, w: usize, z: usize) -> Result<bool> {
        self.check_edge(w, z)?;
        let fresh = EdgeClassifier {
            h: self.h,
            a: self.a.clone(),
            b: self.b.clone(),
            params: self.params,
            r_memo: DashMap::new(),
            q_memo: DashMap::new(),
        };
        Ok(fresh.compute_q(w, z)?.holds)
    }

    /// Every memoized edge, sorted, in dump form.
    pub fn records(&self) -> Vec<ClassRecord> {
        let mut keys: Vec<(u32, u32)> = self.r_memo.iter().map(|e| *e.key()).collect();
        keys.extend(self.q_memo.iter().map(|e| *e.key()));
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .map(|(w, z)| {
                let r = self.r_memo.get(&(w, z)).map(|v| *v);
                ClassRecord {
                    u: w as usize,
                    v: z as usize,
                    in_r: r.map(|v| v.holds),
                    in_q: self.q_memo.get(&(w, z)).map(|v| v.holds),
                    seed: r.map_or_else(|| self.edge_seed(w as usize, z as usize), |v| v.seed),
                    trials: r.map_or(0, |v| v.trials),
                }
            })
            .collect()
    }
}

/// Classifies each listed ordered edge into `R` and `Q` and returns the dump.
pub fn classify_edges(
    h: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    params: &EdgeClassParams,
    edges: &[(usize, usize)],
) -> Result<Vec<ClassRecord>> {
    let c = EdgeClassifier::new(h, a.clone(), b.clone(), *params)?;
    edges
        .iter()
        .map(|&(w, z)| {
            let in_r = c.in_r(w, z)?;
            let in_q = c.in_q(w, z)?;
            let r = c.r_verdict(w, z)?;
            Ok(ClassRecord {
                u: w,
                v: z,
                in_r: Some(in_r),
                in_q: Some(in_q),
                seed: r.seed,
                trials: r.trials,
            })
        })
        .collect()
}
