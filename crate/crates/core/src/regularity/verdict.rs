use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::pair::{mask_of, PairMatrix};
use super::{
    check_p, min_subset_size, strictly_above, strictly_below, DensityParams, Mode, Verdict, Witness,
};
use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::{derive_seed, stream_rng};

/// Largest side accepted by the public exhaustive verdicts.
pub const EXACT_SIDE_LIMIT: usize = 12;

/// Largest side the exact kernel enumerates subsets of; the other side may be
/// arbitrarily large.
const KERNEL_ENUM_LIMIT: usize = 16;

/// Largest graph for which exhaustive boundedness is attempted.
const BOUNDED_EXHAUSTIVE_LIMIT: usize = 16;

type MaskPair = (Vec<u64>, Vec<u64>);

fn nonempty(x: &VertexSet, y: &VertexSet) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptySet("X"));
    }
    if y.is_empty() {
        return Err(Error::EmptySet("Y"));
    }
    Ok(())
}

fn check_exact_sizes(x: &VertexSet, y: &VertexSet) -> Result<()> {
    if x.len() > EXACT_SIDE_LIMIT || y.len() > EXACT_SIDE_LIMIT {
        return Err(Error::TooLarge(format!(
            "exhaustive verdict needs both sides of at most {EXACT_SIDE_LIMIT} vertices, got {}x{}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Enumeration view of a pair: subsets of the smaller side are enumerated,
/// and every vertex of the other side is summarized by its adjacency mask
/// into the enumerated side.
struct SmallView {
    enum_is_x: bool,
    ns: usize,
    bits: Vec<u32>,
}

impl SmallView {
    fn new(m: &PairMatrix) -> Option<SmallView> {
        let enum_is_x = m.nx() <= m.ny();
        let (ns, no) = if enum_is_x {
            (m.nx(), m.ny())
        } else {
            (m.ny(), m.nx())
        };
        if ns > KERNEL_ENUM_LIMIT {
            return None;
        }
        let bits = (0..no)
            .map(|o| {
                let w = if enum_is_x { m.col(o) } else { m.row(o) };
                w.first().copied().unwrap_or(0) as u32
            })
            .collect();
        Some(SmallView {
            enum_is_x,
            ns,
            bits,
        })
    }

    fn no(&self) -> usize {
        self.bits.len()
    }

    /// Scans every enumerated subset of size at least `ks` and, for each
    /// other-side size `m ≥ ko`, the `m` other-side vertices with the fewest
    /// (`low`) or most (`!low`) neighbours in it. `bad(e, a, m)` decides
    /// whether `e` edges between an `a`-set and an `m`-set refute the property.
    fn scan(
        &self,
        ks: usize,
        ko: usize,
        low: bool,
        high: bool,
        bad: impl Fn(u64, usize, usize) -> bool,
    ) -> Option<MaskPair> {
        let no = self.no();
        let mut hist = [0u32; KERNEL_ENUM_LIMIT + 1];
        for mask in 1u32..(1u32 << self.ns) {
            let a = mask.count_ones() as usize;
            if a < ks {
                continue;
            }
            hist[..=self.ns].fill(0);
            for &b in &self.bits {
                hist[(b & mask).count_ones() as usize] += 1;
            }
            for (want, ascending) in [(low, true), (high, false)] {
                if !want {
                    continue;
                }
                let mut sum = 0u64;
                let mut taken = 0usize;
                let order: Vec<usize> = if ascending {
                    (0..=self.ns).collect()
                } else {
                    (0..=self.ns).rev().collect()
                };
                'walk: for c in order {
                    for _ in 0..hist[c] {
                        taken += 1;
                        sum += c as u64;
                        if taken >= ko && bad(sum, a, taken) {
                            return Some(self.witness(mask, taken, ascending));
                        }
                        if taken == no {
                            break 'walk;
                        }
                    }
                }
            }
        }
        None
    }

    fn witness(&self, mask: u32, m: usize, ascending: bool) -> MaskPair {
        let mut others: Vec<(u32, usize)> = self
            .bits
            .iter()
            .enumerate()
            .map(|(o, &b)| ((b & mask).count_ones(), o))
            .collect();
        if ascending {
            others.sort_unstable();
        } else {
            others.sort_unstable_by_key(|&(c, o)| (std::cmp::Reverse(c), o));
        }
        let enum_mask = mask_of(self.ns, (0..self.ns).filter(|i| mask >> i & 1 == 1));
        let other_mask = mask_of(self.no(), others[..m].iter().map(|&(_, o)| o));
        if self.enum_is_x {
            (enum_mask, other_mask)
        } else {
            (other_mask, enum_mask)
        }
    }
}

/// Randomized witness search over uniformly drawn subset pairs.
///
/// Trial `t` uses its own generator derived from `(seed, t)`. Three of every
/// four trials draw subsets at the smallest admissible sizes; the fourth draws
/// larger sizes, cycling through a quarter, half, three quarters and all of
/// the way to the full sides. The first refuting pair in trial order is returned.
fn sampled_search(
    m: &PairMatrix,
    kx: usize,
    ky: usize,
    trials: usize,
    seed: u64,
    bad: impl Fn(u64, usize, usize) -> bool,
) -> (Option<MaskPair>, usize) {
    let (nx, ny) = (m.nx(), m.ny());
    for t in 0..trials {
        let mut rng = stream_rng(seed, t as u64);
        let (sx, sy) = if t % 4 == 3 {
            let f = ((t / 4) % 4 + 1) as f64 / 4.0;
            (
                kx + ((nx - kx) as f64 * f).round() as usize,
                ky + ((ny - ky) as f64 * f).round() as usize,
            )
        } else {
            (kx, ky)
        };
        let xm = mask_of(nx, sample(&mut rng, nx, sx));
        let ym = mask_of(ny, sample(&mut rng, ny, sy));
        if bad(m.count(&xm, &ym), sx, sy) {
            return (Some((xm, ym)), t + 1);
        }
    }
    (None, trials)
}

fn dense_bad(eps: f64, alpha: f64, p: f64) -> impl Fn(u64, usize, usize) -> bool {
    let thr = (alpha - eps) * p;
    move |e, a, b| thr > 0.0 && strictly_below(e as f64, thr * a as f64 * b as f64)
}

fn regular_bad(d0: f64, eps: f64, p: f64) -> impl Fn(u64, usize, usize) -> bool {
    move |e, a, b| {
        let d = e as f64 / (p * a as f64 * b as f64);
        strictly_above((d - d0).abs(), eps)
    }
}

/// Runs the dense verdict on a prebuilt pair matrix.
pub fn dense_verdict(
    h: &Graph,
    m: &PairMatrix,
    eps: f64,
    alpha: f64,
    p: f64,
    mode: Mode,
) -> Result<Verdict> {
    if m.nx() == 0 {
        return Err(Error::EmptySet("X"));
    }
    if m.ny() == 0 {
        return Err(Error::EmptySet("Y"));
    }
    let kx = min_subset_size(eps, m.nx());
    let ky = min_subset_size(eps, m.ny());
    let bad = dense_bad(eps, alpha, p);
    let (found, trials_used, exhaustive) = match mode {
        Mode::Exhaustive => {
            let view = SmallView::new(m).ok_or_else(|| {
                Error::TooLarge(format!(
                    "exact kernel needs one side of at most {KERNEL_ENUM_LIMIT} vertices"
                ))
            })?;
            let (ks, ko) = if view.enum_is_x { (kx, ky) } else { (ky, kx) };
            (view.scan(ks, ko, true, false, &bad), 0, true)
        }
        Mode::Sampled { trials, seed } => {
            let (f, used) = sampled_search(m, kx, ky, trials, seed, &bad);
            (f, used, false)
        }
    };
    let witness = match found {
        None => None,
        Some((xm, ym)) => {
            let w = Witness {
                x: m.x_set(h.n(), &xm),
                y: m.y_set(h.n(), &ym),
            };
            let e = h.edge_count_between(&w.x, &w.y);
            if w.x.len() < kx || w.y.len() < ky || !bad(e, w.x.len(), w.y.len()) {
                return Err(Error::Invariant(
                    "dense witness failed re-verification".into(),
                ));
            }
            Some(w)
        }
    };
    Ok(Verdict {
        witness,
        trials_used,
        exhaustive,
    })
}

/// Checks whether `(X, Y)` is `(ε, α, p)`-dense: every `X′ ⊆ X`, `Y′ ⊆ Y` with
/// `|X′| ≥ ε|X|`, `|Y′| ≥ ε|Y|` has `d_{H,p}(X′, Y′) ≥ α − ε`.
pub fn is_dense_pair(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    eps: f64,
    alpha: f64,
    p: f64,
    mode: Mode,
) -> Result<Verdict> {
    nonempty(x, y)?;
    check_p(p)?;
    if mode == Mode::Exhaustive {
        check_exact_sizes(x, y)?;
    }
    dense_verdict(h, &PairMatrix::new(h, x, y), eps, alpha, p, mode)
}

fn regular_verdict(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    eps: f64,
    p: f64,
    mode: Mode,
) -> Result<Verdict> {
    nonempty(x, y)?;
    check_p(p)?;
    let m = PairMatrix::new(h, x, y);
    let d0 = m.edges() as f64 / (p * x.len() as f64 * y.len() as f64);
    let kx = min_subset_size(eps, m.nx());
    let ky = min_subset_size(eps, m.ny());
    let bad = regular_bad(d0, eps, p);
    let (found, trials_used, exhaustive) = match mode {
        Mode::Exhaustive => {
            let view = SmallView::new(&m).expect("sizes checked by caller");
            let (ks, ko) = if view.enum_is_x { (kx, ky) } else { (ky, kx) };
            (view.scan(ks, ko, true, true, &bad), 0, true)
        }
        Mode::Sampled { trials, seed } => {
            let (f, used) = sampled_search(&m, kx, ky, trials, seed, &bad);
            (f, used, false)
        }
    };
    let witness = match found {
        None => None,
        Some((xm, ym)) => {
            let w = Witness {
                x: m.x_set(h.n(), &xm),
                y: m.y_set(h.n(), &ym),
            };
            let e = h.edge_count_between(&w.x, &w.y);
            if w.x.len() < kx || w.y.len() < ky || !bad(e, w.x.len(), w.y.len()) {
                return Err(Error::Invariant(
                    "regularity witness failed re-verification".into(),
                ));
            }
            Some(w)
        }
    };
    Ok(Verdict {
        witness,
        trials_used,
        exhaustive,
    })
}

/// Exact `(ε, p)`-regularity of a pair with both sides of at most
/// [`EXACT_SIDE_LIMIT`] vertices.
pub fn is_regular_pair_exact(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    eps: f64,
    p: f64,
) -> Result<Verdict> {
    nonempty(x, y)?;
    check_exact_sizes(x, y)?;
    regular_verdict(h, x, y, eps, p, Mode::Exhaustive)
}

/// One-sided sampled `(ε, p)`-regularity check for pairs of any size.
pub fn is_regular_pair_sampled(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    eps: f64,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    regular_verdict(h, x, y, eps, p, Mode::Sampled { trials, seed })
}

/// Checks `(η, K)`-boundedness: every pair of disjoint `X`, `Y` with
/// `|X|, |Y| ≥ η n` has `e_H(X, Y) ≤ K p |X| |Y|`.
pub fn is_bounded(h: &Graph, params: &DensityParams, mode: Mode) -> Result<Verdict> {
    params.validate()?;
    let n = h.n();
    let k = min_subset_size(params.eta, n);
    let kp = params.k * params.p;
    let bad = |e: u64, a: usize, b: usize| strictly_above(e as f64, kp * a as f64 * b as f64);
    if n < 2 * k {
        // no two disjoint sets are large enough
        return Ok(Verdict {
            witness: None,
            trials_used: 0,
            exhaustive: mode == Mode::Exhaustive,
        });
    }
    match mode {
        Mode::Exhaustive => {
            if n > BOUNDED_EXHAUSTIVE_LIMIT {
                return Err(Error::TooLarge(format!(
                    "exhaustive boundedness needs n <= {BOUNDED_EXHAUSTIVE_LIMIT}, got {n}"
                )));
            }
            let rows: Vec<u32> = (0..n)
                .map(|v| h.row(v).first().copied().unwrap_or(0) as u32)
                .collect();
            for mask in 1u32..(1u32 << n) {
                let a = mask.count_ones() as usize;
                if a < k || n - a < k {
                    continue;
                }
                let mut others: Vec<(u32, usize)> = (0..n)
                    .filter(|v| mask >> v & 1 == 0)
                    .map(|v| ((rows[v] & mask).count_ones(), v))
                    .collect();
                others.sort_unstable_by_key(|&(c, v)| (std::cmp::Reverse(c), v));
                let mut sum = 0u64;
                for (m, &(c, _)) in others.iter().enumerate() {
                    sum += c as u64;
                    if m + 1 >= k && bad(sum, a, m + 1) {
                        let x = VertexSet::from_ids(n, (0..n).filter(|v| mask >> v & 1 == 1))?;
                        let y = VertexSet::from_ids(n, others[..=m].iter().map(|&(_, v)| v))?;
                        return Ok(Verdict {
                            witness: Some(Witness { x, y }),
                            trials_used: 0,
                            exhaustive: true,
                        });
                    }
                }
            }
            Ok(Verdict {
                witness: None,
                trials_used: 0,
                exhaustive: true,
            })
        }
        Mode::Sampled { trials, seed } => {
            for t in 0..trials {
                let mut rng = stream_rng(seed, t as u64);
                let picked = sample(&mut rng, n, 2 * k).into_vec();
                let x = VertexSet::from_ids(n, picked[..k].iter().copied())?;
                let y = VertexSet::from_ids(n, picked[k..].iter().copied())?;
                if bad(h.edge_count_between(&x, &y), k, k) {
                    return Ok(Verdict {
                        witness: Some(Witness { x, y }),
                        trials_used: t + 1,
                        exhaustive: false,
                    });
                }
            }
            Ok(Verdict {
                witness: None,
                trials_used: trials,
                exhaustive: false,
            })
        }
    }
}

/// Tests, on one instance, that if `(U′, W′)` is `(ε, α, p)`-dense then the
/// slightly larger `(U, W)` is `(2ε, α, p)`-dense. Vacuously true when the
/// premise fails.
#[allow(clippy::too_many_arguments)]
pub fn enlargement_check(
    h: &Graph,
    u_small: &VertexSet,
    w_small: &VertexSet,
    u: &VertexSet,
    w: &VertexSet,
    eps: f64,
    alpha: f64,
    p: f64,
) -> Result<bool> {
    nonempty(u_small, w_small)?;
    if !u_small.is_subset(u) || !w_small.is_subset(w) {
        return Err(Error::pre("enlarged sets must contain the original sets"));
    }
    let ratio = 1.0 + eps.powi(3) / 10.0;
    for (big, small, name) in [(u, u_small, "U"), (w, w_small, "W")] {
        if strictly_above(big.len() as f64, ratio * small.len() as f64) {
            return Err(Error::pre(format!(
                "|{name}| = {} exceeds (1 + eps^3/10)·{} = {}",
                big.len(),
                small.len(),
                ratio * small.len() as f64
            )));
        }
    }
    let premise = dense_verdict(
        h,
        &PairMatrix::new(h, u_small, w_small),
        eps,
        alpha,
        p,
        Mode::Exhaustive,
    )?;
    if !premise.holds() {
        return Ok(true);
    }
    let conclusion = dense_verdict(
        h,
        &PairMatrix::new(h, u, w),
        2.0 * eps,
        alpha,
        p,
        Mode::Exhaustive,
    )?;
    Ok(conclusion.holds())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InheritanceParams {
    pub eps_prime: f64,
    pub alpha: f64,
    pub p: f64,
    pub w1: usize,
    pub w2: usize,
    pub trials: usize,
    /// Budget of each sub-pair verdict; ignored when both sides are small
    /// enough for an exhaustive verdict.
    pub inner_trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InheritanceReport {
    pub fraction: f64,
    pub failures: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Samples sub-pairs of fixed sizes `w1 × w2` and reports the fraction that
/// fail an `(ε′, α, p)`-dense verdict.
pub fn inheritance_sampler(
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    params: &InheritanceParams,
) -> Result<InheritanceReport> {
    nonempty(x, y)?;
    check_p(params.p)?;
    if params.w1 == 0 || params.w1 > x.len() || params.w2 == 0 || params.w2 > y.len() {
        return Err(Error::param(format!(
            "sub-pair sizes {}x{} outside 1..={} x 1..={}",
            params.w1,
            params.w2,
            x.len(),
            y.len()
        )));
    }
    if params.trials == 0 {
        return Err(Error::param("inheritance sampler needs at least one trial"));
    }
    let xs: Vec<u32> = x.to_vec();
    let ys: Vec<u32> = y.to_vec();
    let exact = params.w1 <= EXACT_SIDE_LIMIT && params.w2 <= EXACT_SIDE_LIMIT;
    let mut failures = 0;
    for t in 0..params.trials {
        let mut rng = stream_rng(params.seed, t as u64);
        let sx = VertexSet::from_ids(
            h.n(),
            sample(&mut rng, xs.len(), params.w1)
                .into_iter()
                .map(|i| xs[i]),
        )?;
        let sy = VertexSet::from_ids(
            h.n(),
            sample(&mut rng, ys.len(), params.w2)
                .into_iter()
                .map(|i| ys[i]),
        )?;
        let mode = if exact {
            Mode::Exhaustive
        } else {
            Mode::Sampled {
                trials: params.inner_trials,
                seed: derive_seed(params.seed, t as u64),
            }
        };
        let v = dense_verdict(
            h,
            &PairMatrix::new(h, &sx, &sy),
            params.eps_prime,
            params.alpha,
            params.p,
            mode,
        )?;
        if !v.holds() {
            failures += 1;
        }
    }
    Ok(InheritanceReport {
        fraction: failures as f64 / params.trials as f64,
        failures,
        trials: params.trials,
        seed: params.seed,
    })
}
