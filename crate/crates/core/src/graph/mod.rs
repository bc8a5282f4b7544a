//! Immutable simple undirected graphs with boundary and degree queries.
//!
//! Adjacency is kept as sorted neighbor lists for every graph. Graphs with
//! at most [`DEFAULT_BITSET_CAP`] vertices (or a caller-chosen cap) also
//! carry one neighbor bitset per vertex, which makes `|∂S|` a popcount of
//! `adj(u) & !S` per member `u`.

mod edge_list;
mod ratio;
mod vertex_set;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub use edge_list::{parse_edge_list, write_edge_list};
pub use ratio::Ratio;
pub use vertex_set::VertexSet;

use crate::error::{domain, Result};
use vertex_set::word_count;

/// Graphs up to this many vertices get per-vertex neighbor bitsets.
pub const DEFAULT_BITSET_CAP: usize = 64;

#[derive(Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    neighbors: Vec<Vec<u32>>,
    rows: Option<Vec<u64>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.neighbors == other.neighbors
    }
}

impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self::build(n, vec![Vec::new(); n], 0, DEFAULT_BITSET_CAP)
    }

    /// Builds a graph from an edge list. Self-loops, out-of-range endpoints
    /// and repeated pairs are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges_with_cap(n, edges, DEFAULT_BITSET_CAP)
    }

    pub fn from_edges_with_cap<I>(n: usize, edges: I, bitset_cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(domain("graph needs at least one vertex"));
        }
        let mut neighbors = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(domain(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(domain(format!("self-loop at vertex {u}")));
            }
            neighbors[u].push(v as u32);
            neighbors[v].push(u as u32);
            m += 1;
        }
        for (v, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(domain(format!("duplicate edge ({v}, {})", w[0])));
            }
        }
        Ok(Self::build(n, neighbors, m, bitset_cap))
    }

    fn build(n: usize, neighbors: Vec<Vec<u32>>, m: usize, bitset_cap: usize) -> Self {
        let rows = (n <= bitset_cap).then(|| {
            let wc = word_count(n);
            let mut rows = vec![0u64; n * wc];
            for (u, list) in neighbors.iter().enumerate() {
                for &v in list {
                    let v = v as usize;
                    rows[u * wc + v / 64] |= 1u64 << (v % 64);
                }
            }
            rows
        });
        Self { n, m, neighbors, rows }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph edges are valid")
    }

    /// Cycle `0-1-...-(n-1)-0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// Star with center 0 and leaves `1..n`.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).expect("star edges are valid")
    }

    /// Copy of `self` with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self> {
        if u >= self.n || v >= self.n {
            return Err(domain(format!("edge ({u}, {v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(domain(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(domain(format!("duplicate edge ({u}, {v})")));
        }
        let mut g = self.clone();
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut g.neighbors[a];
            let pos = list.binary_search(&(b as u32)).unwrap_err();
            list.insert(pos, b as u32);
            if let Some(rows) = g.rows.as_mut() {
                let wc = word_count(g.n);
                rows[a * wc + b / 64] |= 1u64 << (b % 64);
            }
        }
        g.m += 1;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[v]
    }

    /// Neighbor bitset of `v`, present when the graph is under its bitset cap.
    pub fn row(&self, v: usize) -> Option<&[u64]> {
        let wc = word_count(self.n);
        self.rows.as_ref().map(|r| &r[v * wc..(v + 1) * wc])
    }

    /// One neighbor mask per vertex, for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.n > 64 {
            return None;
        }
        Some(
            self.neighbors
                .iter()
                .map(|list| list.iter().fold(0u64, |acc, &v| acc | 1u64 << v))
                .collect(),
        )
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match self.row(u) {
            Some(row) => row[v / 64] >> (v % 64) & 1 == 1,
            None => self.neighbors[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors.iter().enumerate().flat_map(|(u, list)| {
            list.iter().map(|&v| v as usize).filter(move |&v| v > u).map(move |v| (u, v))
        })
    }

    /// δ(G); 0 for an edgeless graph.
    pub fn min_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Δ(G); 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(domain(format!(
                "vertex set over {} vertices used with a graph on {}",
                s.universe(),
                self.n
            )));
        }
        Ok(())
    }

    /// |∂S|: edges with exactly one endpoint in `s`.
    pub fn boundary_size(&self, s: &VertexSet) -> Result<usize> {
        self.check_set(s)?;
        if s.is_empty() {
            return Err(domain("boundary of the empty set"));
        }
        Ok(self.boundary_unchecked(s))
    }

    pub(crate) fn boundary_unchecked(&self, s: &VertexSet) -> usize {
        let sw = s.words();
        match &self.rows {
            Some(rows) => {
                let wc = sw.len();
                s.iter()
                    .map(|u| {
                        rows[u * wc..(u + 1) * wc]
                            .iter()
                            .zip(sw)
                            .map(|(a, b)| (a & !b).count_ones() as usize)
                            .sum::<usize>()
                    })
                    .sum()
            }
            None => s
                .iter()
                .map(|u| self.neighbors[u].iter().filter(|&&v| !s.contains(v as usize)).count())
                .sum(),
        }
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> Result<usize> {
        self.check_set(s)?;
        let twice: usize = match &self.rows {
            Some(rows) => {
                let sw = s.words();
                let wc = sw.len();
                s.iter()
                    .map(|u| {
                        rows[u * wc..(u + 1) * wc]
                            .iter()
                            .zip(sw)
                            .map(|(a, b)| (a & b).count_ones() as usize)
                            .sum::<usize>()
                    })
                    .sum()
            }
            None => s
                .iter()
                .map(|u| self.neighbors[u].iter().filter(|&&v| s.contains(v as usize)).count())
                .sum(),
        };
        Ok(twice / 2)
    }

    /// True if no edge has both endpoints in `s`.
    pub fn is_independent(&self, s: &VertexSet) -> Result<bool> {
        Ok(self.induced_edge_count(s)? == 0)
    }

    /// Connected components, each as a sorted vertex list, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.neighbors[u] {
                    let v = v as usize;
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

/// How a minimizing set relates to the minimum degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    /// An independent set whose vertices all have degree δ(G).
    IndependentMinDegree,
    Other,
}

/// A set `S` with `1 <= |S| <= n/2`, its boundary and the exact ratio `|∂S|/|S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub witness: VertexSet,
    pub boundary: u64,
    pub ratio: Ratio,
    pub witness_kind: WitnessKind,
}

impl CutReport {
    /// Builds a report for `s`, recomputing the boundary and classifying it.
    pub fn for_set(g: &Graph, s: VertexSet) -> Result<Self> {
        if s.len() > g.n() / 2 {
            return Err(domain(format!(
                "witness of size {} exceeds n/2 for n = {}",
                s.len(),
                g.n()
            )));
        }
        let boundary = g.boundary_size(&s)? as u64;
        let witness_kind = classify(g, &s)?;
        Ok(Self { ratio: Ratio::new(boundary, s.len() as u64), boundary, witness: s, witness_kind })
    }
}

pub fn classify(g: &Graph, s: &VertexSet) -> Result<WitnessKind> {
    let delta = g.min_degree();
    if g.is_independent(s)? && s.iter().all(|v| g.degree(v) == delta) {
        Ok(WitnessKind::IndependentMinDegree)
    } else {
        Ok(WitnessKind::Other)
    }
}
