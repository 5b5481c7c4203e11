//! Brute-force oracles shared by the integration tests. They follow the
//! definitions literally and share no code with the library kernels.
#![allow(dead_code)]

use gridramsey::bitset::VertexSet;
use gridramsey::graph::{build_graph, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn set(n: usize, ids: &[usize]) -> VertexSet {
    VertexSet::from_ids(n, ids.iter().copied()).unwrap()
}

pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << items.len())
        .map(|m| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

pub fn edges_between(g: &Graph, xs: &[usize], ys: &[usize]) -> usize {
    let mut e = 0;
    for &x in xs {
        for &y in ys {
            if x != y && g.has_edge(x, y) {
                e += 1;
            }
        }
    }
    e
}

fn ge_frac(size: usize, frac: f64, total: usize) -> bool {
    size as f64 >= frac * total as f64 - 1e-9
}

/// All `(X′, Y′)` with `|X′| ≥ ε|X|`, `|Y′| ≥ ε|Y|`, nonempty.
pub fn qualifying_pairs(xs: &[usize], ys: &[usize], eps: f64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let sx: Vec<_> = subsets(xs)
        .into_iter()
        .filter(|s| !s.is_empty() && ge_frac(s.len(), eps, xs.len()))
        .collect();
    let sy: Vec<_> = subsets(ys)
        .into_iter()
        .filter(|s| !s.is_empty() && ge_frac(s.len(), eps, ys.len()))
        .collect();
    let mut out = Vec::new();
    for a in &sx {
        for b in &sy {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

pub fn brute_dense(g: &Graph, xs: &[usize], ys: &[usize], eps: f64, alpha: f64, p: f64) -> bool {
    qualifying_pairs(xs, ys, eps).iter().all(|(a, b)| {
        let d = edges_between(g, a, b) as f64 / (p * (a.len() * b.len()) as f64);
        d >= alpha - eps - 1e-9
    })
}

pub fn brute_regular(g: &Graph, xs: &[usize], ys: &[usize], eps: f64, p: f64) -> bool {
    let d0 = edges_between(g, xs, ys) as f64 / (p * (xs.len() * ys.len()) as f64);
    qualifying_pairs(xs, ys, eps).iter().all(|(a, b)| {
        let d = edges_between(g, a, b) as f64 / (p * (a.len() * b.len()) as f64);
        (d - d0).abs() <= eps + 1e-9
    })
}

/// Bipartite random graph between `0..a` and `a..a+b` with edge probability `q`.
pub fn random_bipartite(a: usize, b: usize, q: f64, seed: u64) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for x in 0..a {
        for y in a..a + b {
            if rng.gen_bool(q) {
                edges.push((x, y));
            }
        }
    }
    let g = build_graph(a + b, &edges).unwrap();
    (g, (0..a).collect(), (a..a + b).collect())
}

pub fn random_graph(n: usize, q: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(q) {
                edges.push((u, v));
            }
        }
    }
    build_graph(n, &edges).unwrap()
}

/// Quadruple loop over `X × Y × A × B`.
pub fn brute_c4(g: &Graph, x: &[usize], y: &[usize], a: &[usize], b: &[usize]) -> u64 {
    let mut c = 0;
    for &xv in x {
        for &yv in y {
            if !g.has_edge(xv, yv) {
                continue;
            }
            for &av in a {
                if !g.has_edge(yv, av) {
                    continue;
                }
                for &bv in b {
                    if g.has_edge(av, bv) && g.has_edge(bv, xv) {
                        c += 1;
                    }
                }
            }
        }
    }
    c
}
