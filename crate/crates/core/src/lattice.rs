//! Weighted lattice graphs: rings, square and triangular tori, and the
//! 12-site kagome cluster.
//!
//! Vertices are `0..num_vertices`. Edges are stored canonically as
//! `(u, v, w)` with `u < v`, sorted by `(u, v)`, without duplicates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Line,
    Square,
    Triangular,
    Kagome,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected weighted graph with canonical edge ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRecord", into = "LatticeRecord")]
pub struct LatticeGraph {
    kind: LatticeKind,
    num_vertices: usize,
    periodic: bool,
    edges: Vec<Edge>,
}

/// Plain structured form used for config and result files.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LatticeRecord {
    kind: LatticeKind,
    num_vertices: usize,
    periodic: bool,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<LatticeRecord> for LatticeGraph {
    type Error = Error;

    fn try_from(rec: LatticeRecord) -> Result<Self> {
        let mut g = LatticeGraph::from_edges(rec.num_vertices, rec.edges, rec.kind)?;
        g.periodic = rec.periodic;
        Ok(g)
    }
}

impl From<LatticeGraph> for LatticeRecord {
    fn from(g: LatticeGraph) -> Self {
        LatticeRecord {
            kind: g.kind,
            num_vertices: g.num_vertices,
            periodic: g.periodic,
            edges: g.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
        }
    }
}

impl LatticeGraph {
    fn from_edges<I>(num_vertices: usize, edges: I, kind: LatticeKind) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if num_vertices == 0 {
            return Err(Error::InvalidSize(
                "lattice needs at least one vertex".into(),
            ));
        }
        let mut canon: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (a, b, w) in edges {
            for index in [a, b] {
                if index >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        index,
                        num_vertices,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            // first occurrence of a pair wins
            canon.entry((a.min(b), a.max(b))).or_insert(w);
        }
        Ok(LatticeGraph {
            kind,
            num_vertices,
            periodic: false,
            edges: canon
                .into_iter()
                .map(|((u, v), weight)| Edge { u, v, weight })
                .collect(),
        })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// Edge list as `(u, v, w)` triples.
    pub fn edge_triples(&self) -> Vec<(usize, usize, f64)> {
        self.edges.iter().map(|e| (e.u, e.v, e.weight)).collect()
    }
}

fn with_flag(mut g: LatticeGraph, periodic: bool) -> LatticeGraph {
    g.periodic = periodic;
    g
}

/// Ring or open chain of `n` vertices.
pub fn line_lattice(n: usize, periodic: bool, weight: f64) -> Result<LatticeGraph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("line needs n >= 2, got {n}")));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, weight)).collect();
    if periodic && n >= 3 {
        edges.push((0, n - 1, weight));
    }
    LatticeGraph::from_edges(n, edges, LatticeKind::Line).map(|g| with_flag(g, periodic))
}

fn grid_edges(
    rows: usize,
    cols: usize,
    periodic: bool,
    diagonal: bool,
    weight: f64,
) -> Vec<(usize, usize, f64)> {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let right = c + 1 < cols || periodic;
            let down = r + 1 < rows || periodic;
            if right {
                edges.push((idx(r, c), idx(r, (c + 1) % cols), weight));
            }
            if down {
                edges.push((idx(r, c), idx((r + 1) % rows, c), weight));
            }
            if diagonal && right && down {
                edges.push((idx(r, c), idx((r + 1) % rows, (c + 1) % cols), weight));
            }
        }
    }
    edges
}

fn check_grid(rows: usize, cols: usize) -> Result<()> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidSize(format!(
            "grid needs rows, cols >= 2, got {rows}x{cols}"
        )));
    }
    Ok(())
}

/// Square grid; vertex `(r, c)` has index `r * cols + c`. Wrap edges that
/// would duplicate an existing pair (2-wide dimensions) are collapsed.
pub fn square_lattice(
    rows: usize,
    cols: usize,
    periodic: bool,
    weight: f64,
) -> Result<LatticeGraph> {
    check_grid(rows, cols)?;
    let edges = grid_edges(rows, cols, periodic, false, weight);
    LatticeGraph::from_edges(rows * cols, edges, LatticeKind::Square)
        .map(|g| with_flag(g, periodic))
}

/// Square grid plus the `(r, c)`–`(r+1, c+1)` diagonal of every plaquette.
pub fn triangular_lattice(
    rows: usize,
    cols: usize,
    periodic: bool,
    weight: f64,
) -> Result<LatticeGraph> {
    check_grid(rows, cols)?;
    let edges = grid_edges(rows, cols, periodic, true, weight);
    LatticeGraph::from_edges(rows * cols, edges, LatticeKind::Triangular)
        .map(|g| with_flag(g, periodic))
}

/// The 12-site kagome cluster: a central hexagon `0..6` with six
/// corner-sharing triangles. Tip vertex `6 + k` closes the triangle on
/// hexagon edge `(k, k + 1 mod 6)`. 18 edges; hexagon sites have degree 4,
/// tips degree 2. Unit-weight Heisenberg ground energy is exactly -18.
pub const KAGOME_EDGES: [(usize, usize); 18] = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (0, 5),
    (0, 6),
    (1, 6),
    (1, 7),
    (2, 7),
    (2, 8),
    (3, 8),
    (3, 9),
    (4, 9),
    (4, 10),
    (5, 10),
    (5, 11),
    (0, 11),
];

pub fn kagome_lattice(weight: f64) -> LatticeGraph {
    let edges = KAGOME_EDGES.iter().map(|&(u, v)| (u, v, weight));
    let g = LatticeGraph::from_edges(12, edges, LatticeKind::Kagome)
        .expect("kagome edge table is valid");
    with_flag(g, true)
}

/// Arbitrary graph; edges are canonicalized to `u < v` and deduplicated.
pub fn custom_lattice(n: usize, edges: &[(usize, usize, f64)]) -> Result<LatticeGraph> {
    LatticeGraph::from_edges(n, edges.iter().copied(), LatticeKind::Custom)
}
