//! Simple undirected graphs on `0..n` with a dense bit-matrix adjacency.
//!
//! Vertex ids are 0-based throughout the crate.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bitset::{and3_count, and_count, iter_ones, words_for, VertexSet};
use crate::error::{Error, Result};

/// Immutable simple graph. Row `v` of the adjacency matrix is the bit-vector `N(v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    wpr: usize,
    adj: Vec<u64>,
    degrees: Vec<u32>,
    edge_count: usize,
}

/// Mutable adjacency used while a graph is being assembled.
pub struct GraphBuilder {
    n: usize,
    wpr: usize,
    adj: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let wpr = words_for(n);
        GraphBuilder {
            n,
            wpr,
            adj: vec![0; n * wpr],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: u,
                n: self.n,
            });
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    #[inline]
    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        self.adj[u * self.wpr + v / 64] |= 1u64 << (v % 64);
        self.adj[v * self.wpr + u / 64] |= 1u64 << (u % 64);
    }

    pub fn build(self) -> Graph {
        let degrees: Vec<u32> = self
            .adj
            .chunks(self.wpr.max(1))
            .take(self.n)
            .map(|row| row.iter().map(|w| w.count_ones()).sum())
            .collect();
        let degree_sum: usize = degrees.iter().map(|&d| d as usize).sum();
        Graph {
            n: self.n,
            wpr: self.wpr,
            adj: self.adj,
            degrees,
            edge_count: degree_sum / 2,
        }
    }
}

/// Builds a graph from an edge list. Duplicate pairs (in either orientation) collapse.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    let mut b = GraphBuilder::new(n);
    for &(u, v) in edges {
        b.add_edge(u, v)?;
    }
    Ok(b.build())
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    /// Complete bipartite graph between `0..left` and `left..left+right`.
    pub fn complete_bipartite(left: usize, right: usize) -> Graph {
        let mut b = GraphBuilder::new(left + right);
        for u in 0..left {
            for v in left..left + right {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    pub fn cycle(k: usize) -> Result<Graph> {
        if k < 3 {
            return Err(Error::param("a cycle needs at least 3 vertices"));
        }
        build_graph(k, &(0..k).map(|i| (i, (i + 1) % k)).collect::<Vec<_>>())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.wpr
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.wpr..(v + 1) * self.wpr]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0) as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.wpr + v / 64] >> (v % 64) & 1 == 1
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_universe(&self, x: &VertexSet) -> Result<()> {
        if x.universe() != self.n {
            Err(Error::param(format!(
                "vertex set over universe {} used with a graph on {} vertices",
                x.universe(),
                self.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    /// `N(v) ∩ X`.
    pub fn neighbours_in(&self, v: usize, x: &VertexSet) -> Result<VertexSet> {
        self.check_vertex(v)?;
        self.check_universe(x)?;
        let words = self
            .row(v)
            .iter()
            .zip(x.words())
            .map(|(a, b)| a & b)
            .collect();
        Ok(VertexSet::from_words(self.n, words))
    }

    /// `|N(v) ∩ X|` without materializing the set.
    #[inline]
    pub fn degree_into(&self, v: usize, x: &VertexSet) -> usize {
        and_count(self.row(v), x.words()) as usize
    }

    /// Number of ordered pairs `(x, y) ∈ X × Y` with `xy ∈ E`.
    ///
    /// For disjoint `X`, `Y` this is `e(X, Y)`. When the sets overlap, an edge
    /// with both endpoints in `X ∩ Y` is counted once per orientation.
    pub fn edge_count_between(&self, x: &VertexSet, y: &VertexSet) -> u64 {
        x.iter()
            .map(|v| and_count(self.row(v), y.words()) as u64)
            .sum()
    }

    /// `e(X)`, the number of edges with both endpoints in `X`.
    pub fn edges_within(&self, x: &VertexSet) -> u64 {
        self.edge_count_between(x, x) / 2
    }

    pub fn codegree(&self, u: usize, w: usize) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(w)?;
        if u == w {
            return Err(Error::param(format!(
                "codegree needs distinct vertices, got {u} twice"
            )));
        }
        Ok(and_count(self.row(u), self.row(w)) as usize)
    }

    /// Number of labelled tuples `(x, y, a, b) ∈ X × Y × A × B` such that
    /// `xy`, `ya`, `ab` and `bx` are all edges.
    ///
    /// Set membership is honoured literally, so overlapping sets may produce
    /// tuples with repeated vertices (e.g. `x = a`).
    pub fn count_c4_constrained(
        &self,
        x: &VertexSet,
        y: &VertexSet,
        a: &VertexSet,
        b: &VertexSet,
    ) -> u64 {
        if x.is_empty() || y.is_empty() || a.is_empty() || b.is_empty() {
            return 0;
        }
        // For fixed (x, a) the y's and b's are chosen independently:
        // y ∈ Y ∩ N(x) ∩ N(a) and b ∈ B ∩ N(x) ∩ N(a).
        let mut total = 0u64;
        let mut ny = vec![0u64; self.wpr];
        let mut nb = vec![0u64; self.wpr];
        for xv in x.iter() {
            let row = self.row(xv);
            for (i, w) in row.iter().enumerate() {
                ny[i] = w & y.words()[i];
                nb[i] = w & b.words()[i];
            }
            for av in a.iter() {
                let ra = self.row(av);
                let cy = and_count(&ny, ra) as u64;
                if cy == 0 {
                    continue;
                }
                total += cy * and_count(&nb, ra) as u64;
            }
        }
        total
    }

    /// Number of common neighbours of `u` and `w` inside `x`.
    pub fn codegree_in(&self, u: usize, w: usize, x: &VertexSet) -> usize {
        and3_count(self.row(u), self.row(w), x.words()) as usize
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let row = self.row(u);
            let start = (u + 1) / 64;
            iter_ones(&row[start..])
                .map(move |v| v + start * 64)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Spanning subgraph keeping the edges for which `keep` returns true.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let mut b = GraphBuilder::new(self.n);
        for (u, v) in self.edges() {
            if keep(u, v) {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    /// Two-colours the graph if it is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        let mut stack = Vec::new();
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for v in iter_ones(self.row(u)) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

/// Shape of the `s × t` grid graph `G_{s,t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub s: usize,
    pub t: usize,
}

impl GridSpec {
    pub fn new(s: usize, t: usize) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::param(format!(
                "grid dimensions must be positive, got {s}x{t}"
            )));
        }
        Ok(GridSpec { s, t })
    }

    pub fn vertex_count(&self) -> usize {
        self.s * self.t
    }

    pub fn edge_count(&self) -> usize {
        self.s * (self.t - 1) + self.t * (self.s - 1)
    }

    /// Row-major index of `(row, col)`.
    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.t + col
    }

    /// Grid edges as row-major index pairs: horizontal edges first, then vertical.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for r in 0..self.s {
            for c in 0..self.t - 1 {
                out.push((self.index(r, c), self.index(r, c + 1)));
            }
        }
        for r in 0..self.s - 1 {
            for c in 0..self.t {
                out.push((self.index(r, c), self.index(r + 1, c)));
            }
        }
        out
    }
}

pub fn grid_graph(spec: GridSpec) -> Graph {
    let mut b = GraphBuilder::new(spec.vertex_count());
    for (u, v) in spec.edges() {
        b.add_edge_unchecked(u, v);
    }
    b.build()
}

/// Reads the edge-list format: a header line `n m` followed by `m` lines `u v`.
/// Blank lines are skipped.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        Ok(s) => Some(Ok((i + 1, s))),
        Err(e) => Some(Err(e)),
    });
    let (hline, header) = lines.next().transpose()?.ok_or(Error::EdgeListParse {
        line: 1,
        message: "missing header \"n m\"".into(),
    })?;
    let (n, m) = parse_pair(hline, &header)?;
    let mut b = GraphBuilder::new(n);
    let mut seen = 0usize;
    for item in lines {
        let (line, text) = item?;
        let (u, v) = parse_pair(line, &text)?;
        b.add_edge(u, v).map_err(|e| Error::EdgeListParse {
            line,
            message: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::EdgeListParse {
            line: hline,
            message: format!("header announces {m} edges but {seen} were read"),
        });
    }
    Ok(b.build())
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let err = |message: String| Error::EdgeListParse { line, message };
    let mut it = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| err(format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|_| err(format!("{what} is not a non-negative integer: {tok:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = it.next() {
        return Err(err(format!("unexpected trailing field {extra:?}")));
    }
    Ok((a, b))
}

/// Writes the edge-list format with edges sorted lexicographically.
pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied()).unwrap()
    }

    fn c4() -> Graph {
        build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn build_graph_examples() {
        let path = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.edge_count(), 2);
        assert_eq!(build_graph(2, &[]).unwrap().edge_count(), 0);
        assert_eq!(
            build_graph(4, &[(0, 1), (1, 0), (2, 3)])
                .unwrap()
                .edge_count(),
            2
        );
    }

    #[test]
    fn build_graph_rejects_bad_pairs() {
        assert!(matches!(
            build_graph(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(build_graph(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn grid_examples() {
        let c4 = grid_graph(GridSpec::new(2, 2).unwrap());
        assert_eq!((c4.n(), c4.edge_count()), (4, 4));
        let g23 = grid_graph(GridSpec::new(2, 3).unwrap());
        assert_eq!((g23.n(), g23.edge_count()), (6, 7));
        let p5 = grid_graph(GridSpec::new(1, 5).unwrap());
        assert_eq!(p5.edge_count(), 4);
        assert!(GridSpec::new(0, 3).is_err());
    }

    #[test]
    fn neighbours_in_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(
            k4.neighbours_in(0, &set(4, &[1, 2])).unwrap().to_vec(),
            vec![1, 2]
        );
        assert!(k4.neighbours_in(0, &VertexSet::new(4)).unwrap().is_empty());
        assert_eq!(
            c4().neighbours_in(0, &set(4, &[1, 2, 3])).unwrap().to_vec(),
            vec![1, 3]
        );
        assert!(k4.neighbours_in(4, &VertexSet::new(4)).is_err());
    }

    #[test]
    fn edge_count_between_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_count_between(&set(4, &[0, 1]), &set(4, &[2, 3])), 4);
        assert_eq!(
            k4.edge_count_between(&VertexSet::new(4), &set(4, &[2, 3])),
            0
        );
        assert_eq!(
            c4().edge_count_between(&set(4, &[0, 2]), &set(4, &[1, 3])),
            4
        );
        // overlapping sets count ordered pairs
        assert_eq!(k4.edge_count_between(&set(4, &[0, 1]), &set(4, &[0, 1])), 2);
    }

    #[test]
    fn codegree_examples() {
        assert_eq!(Graph::complete(5).codegree(0, 3).unwrap(), 3);
        let star = build_graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.codegree(1, 2).unwrap(), 1);
        assert!(star.codegree(2, 2).is_err());
    }

    #[test]
    fn c4_count_examples() {
        let (x, y, a, b) = (set(4, &[0]), set(4, &[1]), set(4, &[2]), set(4, &[3]));
        assert_eq!(c4().count_c4_constrained(&x, &y, &a, &b), 1);
        assert_eq!(Graph::complete(4).count_c4_constrained(&x, &y, &a, &b), 1);
        assert_eq!(c4().count_c4_constrained(&x, &y, &VertexSet::new(4), &b), 0);
    }

    #[test]
    fn edge_list_round_trip_is_byte_stable() {
        let g = build_graph(5, &[(3, 1), (0, 4), (1, 0)]).unwrap();
        let mut out = Vec::new();
        write_edge_list(&g, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out.clone()).unwrap(),
            "5 3\n0 1\n0 4\n1 3\n"
        );
        let back = read_edge_list(out.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let bad = "3 2\n0 1\n1 x\n";
        match read_edge_list(bad.as_bytes()) {
            Err(Error::EdgeListParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match read_edge_list("3 1\n2 2\n".as_bytes()) {
            Err(Error::EdgeListParse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_edge_list("3 2\n0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("3\n".as_bytes()).is_err());
    }
}
