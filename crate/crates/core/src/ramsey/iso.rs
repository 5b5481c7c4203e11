//! Backtracking subgraph search (not necessarily induced).

use crate::bitset::{iter_ones, words_for};
use crate::error::{Error, Result};
use crate::graph::{Graph, GridSpec};

/// Largest pattern accepted by [`subgraph_contains`].
pub const PATTERN_LIMIT: usize = 16;

/// Pattern vertices in search order: each next vertex has the most
/// neighbours among those already placed, then the highest degree.
pub(crate) struct Plan {
    order: Vec<usize>,
    /// For `order[k]`, the positions `< k` of its pattern neighbours.
    back: Vec<Vec<usize>>,
    degree: Vec<u32>,
}

impl Plan {
    pub(crate) fn new(f: &Graph) -> Plan {
        let k = f.n();
        let mut placed = vec![false; k];
        let mut order = Vec::with_capacity(k);
        for _ in 0..k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = order.iter().filter(|&&u| f.has_edge(u, v)).count();
                    (links, f.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex remains");
            placed[next] = true;
            order.push(next);
        }
        let back = (0..k)
            .map(|i| (0..i).filter(|&j| f.has_edge(order[i], order[j])).collect())
            .collect();
        let degree = order.iter().map(|&v| f.degree(v) as u32).collect();
        Plan {
            order,
            back,
            degree,
        }
    }
}

/// Searches for an embedding of the planned pattern into the graph with
/// `n` vertices whose adjacency rows (each `wpr` words) are in `rows`.
/// Returns the image of each pattern vertex.
pub(crate) fn search(plan: &Plan, n: usize, wpr: usize, rows: &[u64]) -> Option<Vec<usize>> {
    let k = plan.order.len();
    if k == 0 {
        return Some(Vec::new());
    }
    if k > n {
        return None;
    }
    let degrees: Vec<u32> = (0..n)
        .map(|v| {
            rows[v * wpr..(v + 1) * wpr]
                .iter()
                .map(|w| w.count_ones())
                .sum()
        })
        .collect();
    let mut image = vec![usize::MAX; k];
    let mut used = vec![0u64; words_for(n).max(1)];
    let mut cands: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cursor = vec![0usize; k];

    let fill = |pos: usize, image: &[usize], used: &[u64], out: &mut Vec<usize>| {
        out.clear();
        let mut mask = vec![u64::MAX; wpr];
        if plan.back[pos].is_empty() {
            let rem = n % 64;
            if rem != 0 {
                mask[wpr - 1] = (1u64 << rem) - 1;
            }
        } else {
            for &j in &plan.back[pos] {
                let r = &rows[image[j] * wpr..(image[j] + 1) * wpr];
                for (m, w) in mask.iter_mut().zip(r) {
                    *m &= w;
                }
            }
        }
        for (m, u) in mask.iter_mut().zip(used) {
            *m &= !u;
        }
        out.extend(iter_ones(&mask).filter(|&v| degrees[v] >= plan.degree[pos]));
    };

    let mut pos = 0;
    fill(0, &image, &used, &mut cands[0]);
    loop {
        if cursor[pos] < cands[pos].len() {
            let v = cands[pos][cursor[pos]];
            cursor[pos] += 1;
            image[pos] = v;
            used[v / 64] |= 1u64 << (v % 64);
            if pos + 1 == k {
                let mut out = vec![0; k];
                for (i, &f) in plan.order.iter().enumerate() {
                    out[f] = image[i];
                }
                return Some(out);
            }
            pos += 1;
            fill(pos, &image, &used, &mut cands[pos]);
            cursor[pos] = 0;
        } else {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            let v = image[pos];
            used[v / 64] &= !(1u64 << (v % 64));
        }
    }
}

/// Decides whether `F` is a (not necessarily induced) subgraph of `H`;
/// returns the image of each vertex of `F` when it is.
pub fn subgraph_contains(h: &Graph, f: &Graph) -> Result<Option<Vec<usize>>> {
    if f.n() > PATTERN_LIMIT {
        return Err(Error::TooLarge(format!(
            "pattern has {} vertices; the exact search allows at most {PATTERN_LIMIT}",
            f.n()
        )));
    }
    let plan = Plan::new(f);
    let rows: Vec<u64> = (0..h.n()).flat_map(|v| h.row(v).iter().copied()).collect();
    Ok(search(&plan, h.n(), h.words_per_row(), &rows))
}

/// Checks that `map` sends every edge of `f` to an edge of `h` injectively.
pub fn is_embedding(h: &Graph, f: &Graph, map: &[usize]) -> bool {
    if map.len() != f.n() || map.iter().any(|&v| v >= h.n()) {
        return false;
    }
    let mut sorted = map.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == map.len() && f.edges().all(|(a, b)| h.has_edge(map[a], map[b]))
}

/// Parses `grid:s,t`, `cycle:k`, `complete:k` or `path:k`.
pub fn parse_pattern(s: &str) -> Result<Graph> {
    let (kind, args) = s
        .split_once(':')
        .ok_or_else(|| Error::param(format!("pattern {s:?} is not of the form kind:args")))?;
    let nums: Vec<usize> = args
        .split(',')
        .map(|a| {
            a.trim()
                .parse()
                .map_err(|_| Error::param(format!("bad number {a:?} in pattern {s:?}")))
        })
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("grid", [s, t]) => Ok(crate::graph::grid_graph(GridSpec::new(*s, *t)?)),
        ("cycle", [k]) => Graph::cycle(*k),
        ("complete", [k]) => Ok(Graph::complete(*k)),
        ("path", [k]) if *k >= 1 => {
            crate::graph::build_graph(*k, &(1..*k).map(|i| (i - 1, i)).collect::<Vec<_>>())
        }
        _ => Err(Error::param(format!(
            "unknown pattern {s:?} (grid:s,t | cycle:k | complete:k | path:k)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, grid_graph};

    #[test]
    fn c4_in_k4_not_in_tree() {
        let c4 = Graph::cycle(4).unwrap();
        let map = subgraph_contains(&Graph::complete(4), &c4)
            .unwrap()
            .unwrap();
        assert!(is_embedding(&Graph::complete(4), &c4, &map));
        let tree = build_graph(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        assert!(subgraph_contains(&tree, &c4).unwrap().is_none());
    }

    #[test]
    fn grids_nest() {
        let small = grid_graph(GridSpec::new(2, 3).unwrap());
        let big = grid_graph(GridSpec::new(3, 3).unwrap());
        let map = subgraph_contains(&big, &small).unwrap().unwrap();
        assert!(is_embedding(&big, &small, &map));
        assert!(subgraph_contains(&small, &big).unwrap().is_none());
    }

    #[test]
    fn pattern_limit() {
        assert!(subgraph_contains(&Graph::complete(20), &Graph::complete(17)).is_err());
    }

    #[test]
    fn patterns_parse() {
        assert_eq!(parse_pattern("grid:2,3").unwrap().edge_count(), 7);
        assert_eq!(parse_pattern("cycle:5").unwrap().edge_count(), 5);
        assert_eq!(parse_pattern("complete:4").unwrap().edge_count(), 6);
        assert!(parse_pattern("wheel:5").is_err());
        assert!(parse_pattern("cycle").is_err());
    }
}
