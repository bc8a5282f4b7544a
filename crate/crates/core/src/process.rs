//! G(n,p), G(n,M) and the random graph process.
//!
//! A process on `n` vertices is a uniformly random ordering of all
//! `N = n(n-1)/2` vertex pairs; `G(t)` has the first `t` pairs as edges.
//! The ordering is produced by a forward Fisher–Yates shuffle of the pair
//! indices. Small traces store it; large ones replay it from the seed with a
//! sparse shuffle that only remembers displaced slots. Both paths consume the
//! generator identically, so they yield the same sequence for a given seed.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::Graph;
use crate::rng::{rng_from_seed, StreamRng};

/// Traces with at most this many vertices keep their pair order in memory.
pub const MATERIALIZE_CAP: usize = 4096;

pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Pair with colex index `k`: `k = v(v-1)/2 + u` with `u < v`.
pub fn pair_from_index(k: u64) -> (u32, u32) {
    // float estimate, then correct for rounding
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    let u = k - v * (v - 1) / 2;
    (u as u32, v as u32)
}

/// Lazily shuffled stream of all pairs on `n` vertices.
pub struct PairStream {
    total: u64,
    next: u64,
    rng: StreamRng,
    displaced: HashMap<u64, u64>,
}

impl PairStream {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { total: pair_count(n), next: 0, rng: rng_from_seed(seed), displaced: HashMap::new() }
    }
}

impl Iterator for PairStream {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let i = self.next;
        let j = self.rng.gen_range(i..self.total);
        let at_i = self.displaced.remove(&i).unwrap_or(i);
        let at_j = if j == i { at_i } else { self.displaced.get(&j).copied().unwrap_or(j) };
        if j != i {
            self.displaced.insert(j, at_i);
        }
        self.next += 1;
        Some(pair_from_index(at_j))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

fn shuffled_pairs(n: usize, seed: u64) -> Vec<(u32, u32)> {
    let total = pair_count(n);
    let mut idx: Vec<u64> = (0..total).collect();
    let mut rng = rng_from_seed(seed);
    for i in 0..total {
        let j = rng.gen_range(i..total);
        idx.swap(i as usize, j as usize);
    }
    idx.into_iter().map(pair_from_index).collect()
}

#[derive(Debug, Clone)]
enum Order {
    Stored(Vec<(u32, u32)>),
    Replayed,
}

/// One realization of the random graph process.
#[derive(Debug, Clone)]
pub struct ProcessTrace {
    n: usize,
    seed: u64,
    order: Order,
}

pub fn sample_trace(n: usize, seed: u64) -> Result<ProcessTrace> {
    sample_trace_with_cap(n, seed, MATERIALIZE_CAP)
}

pub fn sample_trace_with_cap(n: usize, seed: u64, materialize_cap: usize) -> Result<ProcessTrace> {
    if n < 2 {
        return Err(domain(format!("a graph process needs n >= 2, got {n}")));
    }
    let order =
        if n <= materialize_cap { Order::Stored(shuffled_pairs(n, seed)) } else { Order::Replayed };
    Ok(ProcessTrace { n, seed, order })
}

impl ProcessTrace {
    /// A trace with a given pair order, which must list every pair exactly once.
    pub fn from_order(n: usize, order: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("a graph process needs n >= 2, got {n}")));
        }
        if order.len() as u64 != pair_count(n) {
            return Err(domain(format!("order has {} pairs, expected {}", order.len(), pair_count(n))));
        }
        let mut seen = vec![false; order.len()];
        let mut stored = Vec::with_capacity(order.len());
        for (u, v) in order {
            let (a, b) = (u.min(v), u.max(v));
            if a == b || b >= n {
                return Err(domain(format!("invalid pair ({u}, {v})")));
            }
            let k = b * (b - 1) / 2 + a;
            if std::mem::replace(&mut seen[k], true) {
                return Err(domain(format!("pair ({u}, {v}) repeated")));
            }
            stored.push((a as u32, b as u32));
        }
        Ok(Self { n, seed: 0, order: Order::Stored(stored) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// N, the number of steps in the full process.
    pub fn len(&self) -> u64 {
        pair_count(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stored_order(&self) -> Option<&[(u32, u32)]> {
        match &self.order {
            Order::Stored(v) => Some(v),
            Order::Replayed => None,
        }
    }

    /// Pairs in arrival order; edge `t` (1-based) is the `t`-th item.
    pub fn pairs(&self) -> Box<dyn Iterator<Item = (u32, u32)> + '_> {
        match &self.order {
            Order::Stored(v) => Box::new(v.iter().copied()),
            Order::Replayed => Box::new(PairStream::new(self.n, self.seed)),
        }
    }

    fn check_time(&self, t: u64) -> Result<()> {
        if t > self.len() {
            return Err(domain(format!("time {t} outside 0..={}", self.len())));
        }
        Ok(())
    }

    /// G(t): the first `t` pairs as edges.
    pub fn graph_at(&self, t: u64) -> Result<Graph> {
        self.check_time(t)?;
        let edges = self.pairs().take(t as usize).map(|(u, v)| (u as usize, v as usize));
        Graph::from_edges(self.n, edges)
    }

    /// Degree sequence of G(t) without building the graph.
    pub fn degrees_at(&self, t: u64) -> Result<Vec<u32>> {
        self.check_time(t)?;
        let mut deg = vec![0u32; self.n];
        for (u, v) in self.pairs().take(t as usize) {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        Ok(deg)
    }

    /// δ(G(t)) for several times in one pass. Times may be in any order.
    pub fn min_degrees_at(&self, times: &[u64]) -> Result<Vec<usize>> {
        for &t in times {
            self.check_time(t)?;
        }
        let mut sorted: Vec<(u64, usize)> = times.iter().copied().zip(0..).collect();
        sorted.sort_unstable();
        let mut out = vec![0; times.len()];
        let mut tracker = DegreeTracker::new(self.n);
        let mut pairs = self.pairs();
        let mut t = 0u64;
        for (target, slot) in sorted {
            while t < target {
                let (u, v) = pairs.next().expect("time checked against N");
                tracker.add_edge(u as usize, v as usize);
                t += 1;
            }
            out[slot] = tracker.min_degree();
        }
        Ok(out)
    }
}

/// Degree array plus histogram giving δ in O(1) amortized per added edge.
#[derive(Debug, Clone)]
pub struct DegreeTracker {
    degrees: Vec<usize>,
    histogram: Vec<usize>,
    min: usize,
}

impl DegreeTracker {
    pub fn new(n: usize) -> Self {
        let mut histogram = vec![0; n.max(1)];
        histogram[0] = n;
        Self { degrees: vec![0; n], histogram, min: 0 }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        for x in [u, v] {
            let d = self.degrees[x];
            self.histogram[d] -= 1;
            self.degrees[x] = d + 1;
            self.histogram[d + 1] += 1;
        }
        while self.min + 1 < self.histogram.len() && self.histogram[self.min] == 0 {
            self.min += 1;
        }
    }

    pub fn min_degree(&self) -> usize {
        self.min
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }
}

/// `tau_delta[d-1]` is the first time `t` with δ(G(t)) >= d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingTimes {
    pub tau_delta: Vec<u64>,
}

impl HittingTimes {
    /// τ(δ = d) for `1 <= d <= d_max`.
    pub fn tau(&self, d: usize) -> Option<u64> {
        d.checked_sub(1).and_then(|i| self.tau_delta.get(i).copied())
    }
}

pub fn hitting_times(trace: &ProcessTrace, d_max: usize) -> Result<HittingTimes> {
    if d_max >= trace.n() {
        return Err(domain(format!(
            "minimum degree cannot exceed n - 1 = {}, asked for {d_max}",
            trace.n() - 1
        )));
    }
    let mut tau_delta = Vec::with_capacity(d_max);
    if d_max == 0 {
        return Ok(HittingTimes { tau_delta });
    }
    let mut tracker = DegreeTracker::new(trace.n());
    for (t, (u, v)) in trace.pairs().enumerate() {
        tracker.add_edge(u as usize, v as usize);
        while tau_delta.len() < tracker.min_degree().min(d_max) {
            tau_delta.push(t as u64 + 1);
        }
        if tau_delta.len() == d_max {
            break;
        }
    }
    Ok(HittingTimes { tau_delta })
}

/// G(n, p): each pair present independently with probability `p`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// G(n, M): the first `m` pairs of a uniform pair permutation.
pub fn sample_gnm(n: usize, m: u64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    if m > pair_count(n) {
        return Err(domain(format!("{m} edges requested, at most {} possible", pair_count(n))));
    }
    let edges = PairStream::new(n, seed).take(m as usize).map(|(u, v)| (u as usize, v as usize));
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_round_trip() {
        let mut k = 0u64;
        for v in 1u32..200 {
            for u in 0..v {
                assert_eq!(pair_from_index(k), (u, v));
                k += 1;
            }
        }
        let big = pair_count(50_000) - 1;
        assert_eq!(pair_from_index(big), (49_998, 49_999));
    }

    #[test]
    fn stored_and_replayed_orders_match() {
        for seed in 0..5 {
            let a = sample_trace_with_cap(23, seed, 100).unwrap();
            let b = sample_trace_with_cap(23, seed, 0).unwrap();
            assert!(a.stored_order().is_some() && b.stored_order().is_none());
            assert!(a.pairs().eq(b.pairs()));
        }
    }

    #[test]
    fn trace_is_a_permutation() {
        let trace = sample_trace(9, 3).unwrap();
        let mut seen: Vec<_> = trace.pairs().collect();
        seen.sort_unstable();
        let expected: Vec<_> = (0..pair_count(9)).map(pair_from_index).collect::<Vec<_>>();
        let mut expected = expected;
        expected.sort_unstable();
        assert_eq!(seen, expected);
    }

    #[test]
    fn two_vertex_trace() {
        let trace = sample_trace(2, 11).unwrap();
        assert_eq!(trace.stored_order().unwrap(), &[(0, 1)]);
        assert_eq!(hitting_times(&trace, 1).unwrap().tau(1), Some(1));
        assert!(sample_trace(1, 0).is_err());
    }

    #[test]
    fn hand_replayed_hitting_times() {
        let trace =
            ProcessTrace::from_order(4, vec![(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)])
                .unwrap();
        let h = hitting_times(&trace, 3).unwrap();
        assert_eq!(h.tau_delta, vec![2, 4, 6]);
        assert!(hitting_times(&trace, 4).is_err());
        assert!(hitting_times(&trace, 0).unwrap().tau_delta.is_empty());
    }

    #[test]
    fn from_order_validates() {
        assert!(ProcessTrace::from_order(3, vec![(0, 1), (1, 2)]).is_err());
        assert!(ProcessTrace::from_order(3, vec![(0, 1), (1, 0), (1, 2)]).is_err());
        assert!(ProcessTrace::from_order(3, vec![(0, 1), (1, 1), (1, 2)]).is_err());
    }

    #[test]
    fn graph_at_endpoints_and_growth() {
        let trace = sample_trace(7, 5).unwrap();
        assert_eq!(trace.graph_at(0).unwrap(), Graph::empty(7));
        assert_eq!(trace.graph_at(21).unwrap(), Graph::complete(7));
        assert!(trace.graph_at(22).is_err());
        for t in 0..21 {
            let a = trace.graph_at(t).unwrap();
            let b = trace.graph_at(t + 1).unwrap();
            assert_eq!(b.edge_count(), a.edge_count() + 1);
            assert!(a.edges().all(|(u, v)| b.has_edge(u, v)));
        }
    }

    #[test]
    fn min_degree_one_pass_matches_graphs() {
        let trace = sample_trace(12, 8).unwrap();
        let times = [40, 0, 66, 13, 25];
        let got = trace.min_degrees_at(&times).unwrap();
        for (&t, &d) in times.iter().zip(&got) {
            assert_eq!(trace.graph_at(t).unwrap().min_degree(), d);
        }
    }

    #[test]
    fn degree_tracker_min() {
        let mut tr = DegreeTracker::new(3);
        tr.add_edge(0, 1);
        assert_eq!(tr.min_degree(), 0);
        tr.add_edge(1, 2);
        assert_eq!(tr.min_degree(), 1);
        tr.add_edge(0, 2);
        assert_eq!(tr.min_degree(), 2);
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(sample_gnp(6, 0.0, 1).unwrap(), Graph::empty(6));
        assert_eq!(sample_gnp(6, 1.0, 1).unwrap(), Graph::complete(6));
        assert!(sample_gnp(6, 1.5, 1).is_err());
        assert!(sample_gnp(6, -0.1, 1).is_err());
    }

    #[test]
    fn gnm_extremes() {
        assert_eq!(sample_gnm(6, 0, 1).unwrap(), Graph::empty(6));
        assert_eq!(sample_gnm(6, 15, 1).unwrap(), Graph::complete(6));
        assert!(sample_gnm(6, 16, 1).is_err());
        assert_eq!(sample_gnm(30, 100, 4).unwrap().edge_count(), 100);
    }
}
