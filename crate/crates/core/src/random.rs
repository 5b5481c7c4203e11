//! Seeded randomness: the binomial random graph and per-stream generators.
//!
//! Every random choice in the crate goes through [`stream_rng`], keyed by a
//! base seed and a stream index, so results never depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

/// SplitMix64 finalizer applied to `seed ^ mix(stream)`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(seed ^ mix(stream))
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream))
}

/// Parameters of `G(n, p)` together with the constants that say whether `p`
/// lies in the regime `p ≥ C·(ln n / n)^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomModel {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    #[serde(rename = "C")]
    pub c: f64,
    pub delta: f64,
}

impl RandomModel {
    pub fn new(n: usize, p: f64, seed: u64) -> Self {
        RandomModel {
            n,
            p,
            seed,
            c: 1.0,
            delta: 0.15,
        }
    }

    /// `p = C·(ln n / n)^{1/2}`, the smallest density for which the embedding guarantee holds.
    pub fn at_threshold(n: usize, c: f64, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::param("n must be at least 2"));
        }
        let nf = n as f64;
        let p = c * (nf.ln() / nf).sqrt();
        let m = RandomModel {
            c,
            ..RandomModel::new(n, p, seed)
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        // p = 0 is accepted so that the empty graph is expressible.
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::param(format!(
                "edge probability {} outside [0, 1]",
                self.p
            )));
        }
        Ok(())
    }

    pub fn in_paper_regime(&self) -> bool {
        if self.n < 2 {
            return false;
        }
        let nf = self.n as f64;
        self.p >= self.c * (nf.ln() / nf).sqrt()
    }
}

/// Samples `G(n, p)`.
///
/// Row `u` draws its upper-triangle neighbours `v > u` from its own generator
/// (stream `u`), skipping ahead geometrically between successes, so the output
/// is independent of how rows are scheduled across threads.
pub fn gnp(model: &RandomModel) -> Result<Graph> {
    model.validate()?;
    let n = model.n;
    let p = model.p;
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let log_q = (1.0 - p).ln();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut rng = stream_rng(model.seed, u as u64);
            let mut out = Vec::new();
            let mut v = u; // last position considered
            loop {
                let r: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
                let skip = (r.ln() / log_q).floor();
                if !skip.is_finite() || skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize + 1;
                if v >= n {
                    break;
                }
                out.push(v as u32);
            }
            out
        })
        .collect();
    let mut b = GraphBuilder::new(n);
    for (u, row) in rows.iter().enumerate() {
        for &v in row {
            b.add_edge_unchecked(u, v as usize);
        }
    }
    Ok(b.build())
}

/// Chooses `k` distinct elements of `pool` uniformly at random; the result is sorted.
pub fn sample_subset<R: Rng>(rng: &mut R, pool: &[u32], k: usize) -> Vec<u32> {
    let k = k.min(pool.len());
    let mut picked: Vec<u32> = rand::seq::index::sample(rng, pool.len(), k)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        assert_eq!(gnp(&RandomModel::new(5, 1.0, 3)).unwrap().edge_count(), 10);
        assert_eq!(gnp(&RandomModel::new(5, 0.0, 3)).unwrap().edge_count(), 0);
        assert!(gnp(&RandomModel::new(5, 1.5, 3)).is_err());
    }

    #[test]
    fn same_seed_same_graph() {
        let m = RandomModel::new(300, 0.1, 42);
        assert_eq!(gnp(&m).unwrap(), gnp(&m).unwrap());
        let other = RandomModel { seed: 43, ..m };
        assert_ne!(gnp(&m).unwrap(), gnp(&other).unwrap());
    }

    #[test]
    fn edge_count_concentrates() {
        // E = p·C(1000,2) = 49950; a 10% window is over 20 standard deviations wide.
        let mut failures = 0;
        for seed in 0..100 {
            let g = gnp(&RandomModel::new(1000, 0.1, seed)).unwrap();
            let e = g.edge_count() as f64;
            if !(0.9 * 49950.0..1.1 * 49950.0).contains(&e) {
                failures += 1;
            }
        }
        assert_eq!(failures, 0);
    }

    #[test]
    fn first_row_hits_every_position_with_probability_p() {
        // Frequency of the pair (0, v) over many seeds should be close to p for every v.
        let n = 40;
        let p = 0.3;
        let trials = 4000;
        let mut hits = vec![0u32; n];
        for seed in 0..trials {
            let g = gnp(&RandomModel::new(n, p, seed)).unwrap();
            for (v, h) in hits.iter_mut().enumerate().skip(1) {
                if g.has_edge(0, v) {
                    *h += 1;
                }
            }
        }
        // sd of the frequency is sqrt(0.21/4000) ≈ 0.0072; allow 5 sd
        for &h in &hits[1..] {
            let f = h as f64 / trials as f64;
            assert!((f - p).abs() < 0.036, "frequency {f}");
        }
    }

    #[test]
    fn derived_seeds_differ_per_stream() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(0, 1), derive_seed(1, 0));
    }
}
