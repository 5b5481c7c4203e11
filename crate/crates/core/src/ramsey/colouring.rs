use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::and_count;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::stream_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn bit(self) -> u8 {
        match self {
            Colour::Red => 0,
            Colour::Blue => 1,
        }
    }

    pub fn from_bit(b: u8) -> Colour {
        if b == 0 {
            Colour::Red
        } else {
            Colour::Blue
        }
    }
}

/// How to 2-colour the edges of a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// Independent fair coin per edge.
    Random { seed: u64 },
    /// Each edge takes the colour closing fewer monochromatic 4-cycles with
    /// the edges coloured before it; ties go to red.
    GreedyAntigrid,
    /// Each edge takes the colour that evens out the red/blue counts at its
    /// endpoints; exact ties are broken by a seeded coin.
    BalancedByVertex { seed: u64 },
    /// Every edge red.
    AllRed,
}

impl Strategy {
    pub fn parse(s: &str, seed: u64) -> Result<Strategy> {
        match s {
            "random" => Ok(Strategy::Random { seed }),
            "greedy-antigrid" => Ok(Strategy::GreedyAntigrid),
            "balanced-by-vertex" => Ok(Strategy::BalancedByVertex { seed }),
            "all-red" => Ok(Strategy::AllRed),
            _ => Err(Error::param(format!(
                "unknown colouring strategy {s:?} (random, greedy-antigrid, balanced-by-vertex, all-red)"
            ))),
        }
    }
}

/// One colour bit per host edge, in sorted edge order: 0 = red, 1 = blue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub strategy: Strategy,
    pub bits: Vec<u8>,
}

impl Colouring {
    pub fn colour(&self, edge_index: usize) -> Colour {
        Colour::from_bit(self.bits[edge_index])
    }

    pub fn count(&self, c: Colour) -> usize {
        self.bits.iter().filter(|&&b| b == c.bit()).count()
    }
}

pub fn colour_edges(g: &Graph, strategy: &Strategy) -> Colouring {
    let m = g.edge_count();
    let bits = match strategy {
        Strategy::AllRed => vec![0; m],
        Strategy::Random { seed } => {
            let mut rng = stream_rng(*seed, 0);
            (0..m).map(|_| rng.gen::<bool>() as u8).collect()
        }
        Strategy::BalancedByVertex { seed } => {
            let mut rng = stream_rng(*seed, 0);
            // red minus blue at each vertex
            let mut excess = vec![0i64; g.n()];
            g.edges()
                .map(|(u, v)| {
                    let s = excess[u] + excess[v];
                    let bit = match s.cmp(&0) {
                        std::cmp::Ordering::Greater => 1,
                        std::cmp::Ordering::Less => 0,
                        std::cmp::Ordering::Equal => rng.gen::<bool>() as u8,
                    };
                    let d = if bit == 0 { 1 } else { -1 };
                    excess[u] += d;
                    excess[v] += d;
                    bit
                })
                .collect()
        }
        Strategy::GreedyAntigrid => {
            let n = g.n();
            let wpr = g.words_per_row();
            let mut adj = [vec![0u64; n * wpr], vec![0u64; n * wpr]];
            let row = |a: &Vec<u64>, v: usize| a[v * wpr..(v + 1) * wpr].to_vec();
            g.edges()
                .map(|(u, v)| {
                    let closed = |a: &Vec<u64>| -> u64 {
                        // 4-cycles u-v-x-y-u with vx, xy, yu already in this colour
                        let nu = row(a, u);
                        crate::bitset::iter_ones(&row(a, v))
                            .map(|x| and_count(&a[x * wpr..(x + 1) * wpr], &nu) as u64)
                            .sum()
                    };
                    let bit = if closed(&adj[1]) < closed(&adj[0]) {
                        1
                    } else {
                        0
                    };
                    let a = &mut adj[bit as usize];
                    a[u * wpr + v / 64] |= 1u64 << (v % 64);
                    a[v * wpr + u / 64] |= 1u64 << (u % 64);
                    bit
                })
                .collect()
        }
    };
    Colouring {
        strategy: strategy.clone(),
        bits,
    }
}

/// Number of 4-cycles all of whose edges have the same colour.
pub fn monochromatic_c4_count(g: &Graph, colouring: &Colouring) -> u64 {
    let mut total = 0;
    for c in [Colour::Red, Colour::Blue] {
        let h = colour_class(g, colouring, c);
        // a 4-cycle is a pair of opposite vertices with two common neighbours
        let mut labelled = 0u64;
        for u in 0..h.n() {
            for w in u + 1..h.n() {
                let k = and_count(h.row(u), h.row(w)) as u64;
                labelled += k * k.saturating_sub(1) / 2;
            }
        }
        // each cycle has two diagonals
        total += labelled / 2;
    }
    total
}

pub fn colour_class(g: &Graph, colouring: &Colouring, c: Colour) -> Graph {
    let mut i = 0;
    g.spanning_subgraph(|_, _| {
        let keep = colouring.bits[i] == c.bit();
        i += 1;
        keep
    })
}

/// The colour class with more edges (ties to red) as a spanning subgraph.
pub fn majority_subgraph(g: &Graph, colouring: &Colouring) -> Result<(Graph, Colour)> {
    if g.edge_count() == 0 {
        return Err(Error::EmptySet("host has no edges"));
    }
    if colouring.bits.len() != g.edge_count() {
        return Err(Error::param(format!(
            "colouring has {} bits for a host with {} edges",
            colouring.bits.len(),
            g.edge_count()
        )));
    }
    let blue = colouring.count(Colour::Blue);
    let colour = if blue > g.edge_count() - blue {
        Colour::Blue
    } else {
        Colour::Red
    };
    Ok((colour_class(g, colouring, colour), colour))
}
