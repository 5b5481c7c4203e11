//! Compact bipartite adjacency between two vertex sets.
//!
//! Both sides are re-indexed `0..|X|` and `0..|Y|` (ascending vertex id), so
//! subset operations work on short local bit-vectors instead of full rows.

use crate::bitset::{and_count, iter_ones, words_for, VertexSet};
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct PairMatrix {
    x_ids: Vec<u32>,
    y_ids: Vec<u32>,
    wx: usize,
    wy: usize,
    /// `|X|` rows of `wy` words; bit `j` of row `i` is set iff `x_i y_j ∈ E`.
    rows: Vec<u64>,
    /// `|Y|` columns of `wx` words, the transpose of `rows`.
    cols: Vec<u64>,
    edges: u64,
}

impl PairMatrix {
    pub fn new(g: &Graph, x: &VertexSet, y: &VertexSet) -> Self {
        let x_ids = x.to_vec();
        let y_ids = y.to_vec();
        let (nx, ny) = (x_ids.len(), y_ids.len());
        let (wx, wy) = (words_for(nx), words_for(ny));
        let yw = y.words();
        // rank of the first member of each word of Y
        let mut prefix = Vec::with_capacity(yw.len());
        let mut acc = 0u32;
        for w in yw {
            prefix.push(acc);
            acc += w.count_ones();
        }
        let mut rows = vec![0u64; nx * wy];
        let mut cols = vec![0u64; ny * wx];
        let mut edges = 0u64;
        for (i, &xv) in x_ids.iter().enumerate() {
            let row = g.row(xv as usize);
            for (k, (&a, &b)) in row.iter().zip(yw).enumerate() {
                let mut m = a & b;
                while m != 0 {
                    let bit = m.trailing_zeros();
                    m &= m - 1;
                    let j = (prefix[k] + (b & ((1u64 << bit) - 1)).count_ones()) as usize;
                    rows[i * wy + j / 64] |= 1u64 << (j % 64);
                    cols[j * wx + i / 64] |= 1u64 << (i % 64);
                    edges += 1;
                }
            }
        }
        PairMatrix {
            x_ids,
            y_ids,
            wx,
            wy,
            rows,
            cols,
            edges,
        }
    }

    /// Swaps the roles of the two sides.
    pub fn transposed(&self) -> PairMatrix {
        PairMatrix {
            x_ids: self.y_ids.clone(),
            y_ids: self.x_ids.clone(),
            wx: self.wy,
            wy: self.wx,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            edges: self.edges,
        }
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.x_ids.len()
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.y_ids.len()
    }

    pub fn x_ids(&self) -> &[u32] {
        &self.x_ids
    }

    pub fn y_ids(&self) -> &[u32] {
        &self.y_ids
    }

    #[inline]
    pub fn wx(&self) -> usize {
        self.wx
    }

    #[inline]
    pub fn wy(&self) -> usize {
        self.wy
    }

    /// Total number of edges between the two sides.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.wy..(i + 1) * self.wy]
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[u64] {
        &self.cols[j * self.wx..(j + 1) * self.wx]
    }

    /// Edges between the local subsets given as bit masks.
    pub fn count(&self, xmask: &[u64], ymask: &[u64]) -> u64 {
        iter_ones(xmask)
            .map(|i| and_count(self.row(i), ymask) as u64)
            .sum()
    }

    /// For every `y_j`, the number of its neighbours inside the X-subset `xmask`.
    pub fn col_counts_into(&self, xmask: &[u64], out: &mut Vec<u32>) {
        out.clear();
        out.extend((0..self.ny()).map(|j| and_count(self.col(j), xmask)));
    }

    /// For every `x_i`, the number of its neighbours inside the Y-subset `ymask`.
    pub fn row_counts_into(&self, ymask: &[u64], out: &mut Vec<u32>) {
        out.clear();
        out.extend((0..self.nx()).map(|i| and_count(self.row(i), ymask)));
    }

    pub fn x_set(&self, universe: usize, mask: &[u64]) -> VertexSet {
        to_set(universe, &self.x_ids, mask)
    }

    pub fn y_set(&self, universe: usize, mask: &[u64]) -> VertexSet {
        to_set(universe, &self.y_ids, mask)
    }
}

fn to_set(universe: usize, ids: &[u32], mask: &[u64]) -> VertexSet {
    let mut s = VertexSet::new(universe);
    for i in iter_ones(mask) {
        s.insert(ids[i] as usize);
    }
    s
}

/// Bit mask with the given local indices set.
pub fn mask_of(len: usize, idx: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut m = vec![0u64; words_for(len)];
    for i in idx {
        m[i / 64] |= 1u64 << (i % 64);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::random::{gnp, RandomModel};

    #[test]
    fn matrix_matches_graph() {
        let g = gnp(&RandomModel::new(150, 0.2, 11)).unwrap();
        let x = VertexSet::from_ids(150, (0..150).filter(|v| v % 3 == 0)).unwrap();
        let y = VertexSet::from_ids(150, (0..150).filter(|v| v % 3 == 1)).unwrap();
        let m = PairMatrix::new(&g, &x, &y);
        assert_eq!(m.edges(), g.edge_count_between(&x, &y));
        for (i, &xv) in m.x_ids().iter().enumerate() {
            for (j, &yv) in m.y_ids().iter().enumerate() {
                let bit = m.row(i)[j / 64] >> (j % 64) & 1 == 1;
                let tbit = m.col(j)[i / 64] >> (i % 64) & 1 == 1;
                assert_eq!(bit, g.has_edge(xv as usize, yv as usize));
                assert_eq!(bit, tbit);
            }
        }
        let t = m.transposed();
        assert_eq!(t.nx(), m.ny());
        assert_eq!(t.edges(), m.edges());
    }

    #[test]
    fn subset_counts() {
        let g = build_graph(6, &[(0, 3), (0, 4), (1, 4), (2, 5)]).unwrap();
        let x = VertexSet::from_ids(6, [0, 1, 2]).unwrap();
        let y = VertexSet::from_ids(6, [3, 4, 5]).unwrap();
        let m = PairMatrix::new(&g, &x, &y);
        assert_eq!(m.count(&mask_of(3, [0, 1]), &mask_of(3, [1])), 2);
        let mut c = Vec::new();
        m.col_counts_into(&mask_of(3, [0, 1, 2]), &mut c);
        assert_eq!(c, vec![1, 2, 1]);
        assert_eq!(m.y_set(6, &mask_of(3, [2])).to_vec(), vec![5]);
    }
}
