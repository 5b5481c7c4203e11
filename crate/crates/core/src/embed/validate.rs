use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GridSpec};

/// A map from grid cells (row-major) to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEmbedding {
    pub spec: GridSpec,
    pub map: Vec<usize>,
    pub host: String,
    pub colour: Option<String>,
}

impl GridEmbedding {
    pub fn new(spec: GridSpec, map: Vec<usize>) -> Self {
        GridEmbedding {
            spec,
            map,
            host: String::new(),
            colour: None,
        }
    }

    pub fn at(&self, row: usize, col: usize) -> usize {
        self.map[self.spec.index(row, col)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingViolation {
    WrongSize {
        expected: usize,
        got: usize,
    },
    OutOfRange {
        cell: (usize, usize),
        vertex: usize,
    },
    Repeated {
        vertex: usize,
        cells: Vec<(usize, usize)>,
    },
    MissingEdge {
        from: (usize, usize),
        to: (usize, usize),
        u: usize,
        v: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checked_edges: usize,
    pub violations: Vec<EmbeddingViolation>,
}

/// Exact check that the map is injective and sends every grid edge to a
/// host edge.
pub fn validate_embedding(h: &Graph, emb: &GridEmbedding) -> ValidationReport {
    let spec = emb.spec;
    let cell = |i: usize| (i / spec.t, i % spec.t);
    let mut violations = Vec::new();
    if emb.map.len() != spec.vertex_count() {
        violations.push(EmbeddingViolation::WrongSize {
            expected: spec.vertex_count(),
            got: emb.map.len(),
        });
        return ValidationReport {
            valid: false,
            checked_edges: 0,
            violations,
        };
    }
    for (i, &v) in emb.map.iter().enumerate() {
        if v >= h.n() {
            violations.push(EmbeddingViolation::OutOfRange {
                cell: cell(i),
                vertex: v,
            });
        }
    }
    let mut order: Vec<usize> = (0..emb.map.len()).collect();
    order.sort_by_key(|&i| (emb.map[i], i));
    for group in order.chunk_by(|&i, &j| emb.map[i] == emb.map[j]) {
        if group.len() > 1 {
            violations.push(EmbeddingViolation::Repeated {
                vertex: emb.map[group[0]],
                cells: group.iter().map(|&i| cell(i)).collect(),
            });
        }
    }
    let edges = spec.edges();
    for &(i, j) in &edges {
        let (u, v) = (emb.map[i], emb.map[j]);
        if u < h.n() && v < h.n() && !h.has_edge(u, v) {
            violations.push(EmbeddingViolation::MissingEdge {
                from: cell(i),
                to: cell(j),
                u,
                v,
            });
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        checked_edges: edges.len(),
        violations,
    }
}
