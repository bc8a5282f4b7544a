//! The isoperimetric constant `i(G) = min |∂S|/|S|` over `1 <= |S| <= n/2`.
//!
//! [`iso_exact`] enumerates subsets by increasing size with a branch-and-bound
//! cut-off. [`find_bad_set`] looks for a set with `|∂S| < d|S|` on graphs that
//! are too large to enumerate; it can only ever prove existence.

use std::borrow::Cow;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::connected::{Control, ConnectedSets};
use crate::error::{domain, IsoError, Result};
use crate::graph::{classify, CutReport, Graph, Ratio, VertexSet, WitnessKind};
use crate::rng::{derive_seed, rng_from_seed, StreamRng};

/// Hard ceiling on `exact_cap`: enumeration touches up to `2^(n-1)` subsets.
pub const MAX_EXACT_CAP: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest `n` handled by full enumeration.
    pub exact_cap: usize,
    /// Largest connected set tried by [`find_bad_set`]; `None` means `⌈n^{1/4}⌉`.
    pub small_set_cap: Option<usize>,
    pub bisection_samples: usize,
    /// Branch-and-bound cut-off in the exact enumeration.
    pub prune: bool,
    pub local_search_restarts: usize,
    /// Cap on connected sets visited by the small-set phase of [`find_bad_set`].
    pub small_set_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            exact_cap: 26,
            small_set_cap: None,
            bisection_samples: 10_000,
            prune: true,
            local_search_restarts: 8,
            small_set_budget: 2_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.exact_cap > MAX_EXACT_CAP {
            return Err(IsoError::Config(format!(
                "exact_cap {} exceeds the enumeration limit {MAX_EXACT_CAP}",
                self.exact_cap
            )));
        }
        Ok(())
    }

    pub fn small_set_cap_for(&self, n: usize) -> usize {
        self.small_set_cap.unwrap_or_else(|| (n as f64).powf(0.25).ceil() as usize)
    }
}

fn check_exact_domain(g: &Graph, cfg: &SolverConfig) -> Result<Vec<u64>> {
    cfg.validate()?;
    if g.n() < 2 {
        return Err(domain("the isoperimetric constant needs n >= 2"));
    }
    if g.n() > cfg.exact_cap {
        return Err(domain(format!(
            "n = {} is above exact_cap = {}; use find_bad_set",
            g.n(),
            cfg.exact_cap
        )));
    }
    Ok(g.adjacency_masks().expect("n <= 30 fits in one word"))
}

/// Exact `i(G)` with the witness minimal in (size, lexicographic) order.
pub fn iso_exact(g: &Graph, cfg: &SolverConfig) -> Result<CutReport> {
    let adj = check_exact_domain(g, cfg)?;
    let mut search = Search::new(&adj, cfg.prune, false);
    search.run();
    let witness = VertexSet::from_mask(g.n(), search.witnesses[0]);
    let report = CutReport::for_set(g, witness)?;
    debug_assert_eq!(report.ratio, search.best);
    check_upper_bound(g, &report.ratio)?;
    if report.ratio.is_zero() == g.is_connected() {
        return Err(IsoError::Invariant(format!(
            "i(G) = {} but connected = {}",
            report.ratio,
            g.is_connected()
        )));
    }
    Ok(report)
}

/// Every set attaining `i(G)`, ordered by (size, lexicographic).
///
/// Unlike [`iso_exact`], both halves of a bisection are listed.
pub fn iso_exact_all_witnesses(g: &Graph, cfg: &SolverConfig) -> Result<Vec<CutReport>> {
    let adj = check_exact_domain(g, cfg)?;
    let mut search = Search::new(&adj, cfg.prune, true);
    search.run();
    check_upper_bound(g, &search.best)?;
    let mut out = Vec::with_capacity(search.witnesses.len());
    for m in search.witnesses {
        out.push(CutReport::for_set(g, VertexSet::from_mask(g.n(), m))?);
    }
    out.sort_by(|a, b| a.witness.cmp(&b.witness));
    Ok(out)
}

/// i(G) <= δ(G), witnessed by a minimum-degree singleton.
fn check_upper_bound(g: &Graph, ratio: &Ratio) -> Result<()> {
    if ratio.cmp_int(g.min_degree() as u64).is_gt() {
        return Err(IsoError::Invariant(format!(
            "i(G) = {ratio} exceeds the minimum degree {}",
            g.min_degree()
        )));
    }
    Ok(())
}

struct Search<'a> {
    adj: &'a [u64],
    deg: Vec<u64>,
    n: usize,
    prune: bool,
    all: bool,
    best: Ratio,
    witnesses: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [u64], prune: bool, all: bool) -> Self {
        let n = adj.len();
        let deg: Vec<u64> = adj.iter().map(|m| m.count_ones() as u64).collect();
        let (v, &delta) = deg.iter().enumerate().min_by_key(|&(_, d)| *d).expect("n >= 2");
        let best = Ratio::new(delta, 1);
        // all-witness mode re-finds singletons itself
        let witnesses = if all { Vec::new() } else { vec![1u64 << v] };
        Self { adj, deg, n, prune, all, best, witnesses }
    }

    fn run(&mut self) {
        let half = self.n / 2;
        let start = if self.all { 1 } else { 2 };
        for k in start..=half {
            // an unordered bisection is visited once, from the half holding vertex 0
            let pinned = !self.all && 2 * k == self.n;
            if pinned {
                let b = self.deg[0];
                self.descend(1, 1, 1, b, k);
            } else {
                self.descend(0, 0, 0, 0, k);
            }
        }
    }

    /// Strictly worse than the incumbent (or merely not better, when only
    /// one witness is wanted).
    #[inline]
    fn cannot_improve(&self, lower: u64, size: u64) -> bool {
        let lhs = lower as u128 * self.best.den as u128;
        let rhs = self.best.num as u128 * size as u128;
        if self.all {
            lhs > rhs
        } else {
            lhs >= rhs
        }
    }

    fn record(&mut self, set: u64, boundary: u64, size: u64) {
        let r = Ratio::new(boundary, size);
        if r < self.best {
            self.best = r;
            self.witnesses.clear();
            self.witnesses.push(set);
        } else if self.all && r == self.best {
            self.witnesses.push(set);
        }
    }

    /// `set` holds `size` vertices, all below `start`; `boundary` is its `|∂S|`.
    fn descend(&mut self, start: usize, set: u64, size: usize, boundary: u64, k: usize) {
        let remaining_after = k - size - 1;
        let last = self.n - (k - size);
        for j in start..=last {
            let bit = 1u64 << j;
            let new_set = set | bit;
            let new_boundary =
                boundary + self.deg[j] - 2 * (self.adj[j] & set).count_ones() as u64;
            if remaining_after == 0 {
                if !self.cannot_improve(new_boundary, k as u64) {
                    self.record(new_set, new_boundary, k as u64);
                }
                continue;
            }
            if self.prune {
                let below = bit - 1;
                let out = below & !new_set;
                let undecided = !(below | bit) & self.full_mask();
                let lower = self.lower_bound(new_set, out, undecided, remaining_after as u64);
                if self.cannot_improve(lower, k as u64) {
                    continue;
                }
            }
            self.descend(j + 1, new_set, size + 1, new_boundary, k);
        }
    }

    #[inline]
    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Lower bound on `|∂T|` for any completion `T ⊇ set` that adds exactly
    /// `remaining` vertices from `undecided`: edges into `out` are already
    /// cut, and a member with `x` undecided neighbors keeps at least
    /// `x - remaining` of them outside.
    #[inline]
    fn lower_bound(&self, set: u64, out: u64, undecided: u64, remaining: u64) -> u64 {
        let mut lower = 0;
        let mut rest = set;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let a = self.adj[u];
            lower += (a & out).count_ones() as u64;
            lower += ((a & undecided).count_ones() as u64).saturating_sub(remaining);
        }
        lower
    }
}

/// Result of bisection sampling: the largest sampled `|∂S|/|S|` and its set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionSample {
    pub max_ratio: Ratio,
    pub witness: VertexSet,
    pub samples: usize,
}

/// Dense rows for popcount boundaries on mid-sized graphs that were built
/// without bitsets.
fn dense_rows(g: &Graph) -> Cow<'_, [u64]> {
    let wc = g.n().div_ceil(64);
    if g.row(0).is_some() {
        let mut rows = Vec::with_capacity(g.n() * wc);
        for v in 0..g.n() {
            rows.extend_from_slice(g.row(v).unwrap());
        }
        return Cow::Owned(rows);
    }
    let mut rows = vec![0u64; g.n() * wc];
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            let v = v as usize;
            rows[u * wc + v / 64] |= 1u64 << (v % 64);
        }
    }
    Cow::Owned(rows)
}

/// Uniform `k`-subsets drawn by partial Fisher–Yates over a persistent
/// permutation.
struct SubsetSampler {
    perm: Vec<usize>,
    rng: StreamRng,
}

impl SubsetSampler {
    fn new(n: usize, seed: u64) -> Self {
        Self { perm: (0..n).collect(), rng: rng_from_seed(seed) }
    }

    fn draw(&mut self, k: usize) -> VertexSet {
        let n = self.perm.len();
        for i in 0..k {
            let j = self.rng.gen_range(i..n);
            self.perm.swap(i, j);
        }
        VertexSet::from_indices(n, self.perm[..k].iter().copied()).expect("indices below n")
    }
}

fn popcount_boundary(rows: &[u64], s: &VertexSet) -> u64 {
    let sw = s.words();
    let wc = sw.len();
    s.iter()
        .map(|u| {
            rows[u * wc..(u + 1) * wc]
                .iter()
                .zip(sw)
                .map(|(a, b)| (a & !b).count_ones() as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Largest `|∂S|/|S|` over `samples` uniform sets of size `⌊n/2⌋`.
/// A lower bound on the maximum bisection ratio.
pub fn sample_bisection_max_ratio(g: &Graph, samples: usize, seed: u64) -> Result<BisectionSample> {
    sample_bisections(g, samples, seed, |_, _| {})
}

/// As [`sample_bisection_max_ratio`], also handing every sampled set and
/// its boundary to `each`.
pub fn sample_bisections<F>(g: &Graph, samples: usize, seed: u64, mut each: F) -> Result<BisectionSample>
where
    F: FnMut(&VertexSet, u64),
{
    if samples == 0 {
        return Err(domain("need at least one bisection sample"));
    }
    if g.n() < 2 {
        return Err(domain("bisections need n >= 2"));
    }
    let k = g.n() / 2;
    let rows = dense_rows(g);
    let mut sampler = SubsetSampler::new(g.n(), seed);
    let mut best: Option<(Ratio, VertexSet)> = None;
    for _ in 0..samples {
        let s = sampler.draw(k);
        let boundary = popcount_boundary(&rows, &s);
        each(&s, boundary);
        let r = Ratio::new(boundary, k as u64);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, s));
        }
    }
    let (max_ratio, witness) = best.expect("samples >= 1");
    Ok(BisectionSample { max_ratio, witness, samples })
}

/// Searches for `S` with `1 <= |S| <= n/2` and `|∂S| < d|S|`.
///
/// Graphs with `n <= exact_cap` are decided exactly and the returned set is
/// the [`iso_exact`] witness. Larger graphs go through three falsifiers:
/// connected sets up to `small_set_cap`, uniform bisection samples, and
/// local search seeded from the best sample. `None` on a large graph is not
/// a proof that no such set exists.
pub fn find_bad_set(g: &Graph, d: usize, cfg: &SolverConfig, seed: u64) -> Result<Option<VertexSet>> {
    cfg.validate()?;
    if d == 0 {
        return Err(domain("bad-set degree parameter must be at least 1"));
    }
    if g.n() < 2 {
        return Ok(None);
    }
    if g.n() <= cfg.exact_cap {
        let report = iso_exact(g, cfg)?;
        return Ok((report.ratio.cmp_int(d as u64).is_lt()).then_some(report.witness));
    }

    let d = d as i64;
    let half = g.n() / 2;

    // isolated-ish vertices are the common case; singletons are cheap
    if let Some(v) = (0..g.n()).find(|&v| (g.degree(v) as i64) < d) {
        return Ok(Some(VertexSet::from_indices(g.n(), [v])?));
    }

    let cap = cfg.small_set_cap_for(g.n()).min(half);
    let mut found: Option<Vec<usize>> = None;
    ConnectedSets::new(g, cap, cfg.small_set_budget).run(|view| {
        if (view.boundary() as i64) < d * view.members.len() as i64 {
            found = Some(view.members.to_vec());
            Control::Stop
        } else {
            Control::Continue
        }
    });
    if let Some(members) = found {
        return Ok(Some(VertexSet::from_indices(g.n(), members)?));
    }

    let samples = cfg.bisection_samples.max(1);
    let mut worst: Option<(i64, VertexSet)> = None;
    sample_bisections(g, samples, derive_seed(seed, 0), |s, boundary| {
        let score = boundary as i64 - d * s.len() as i64;
        if worst.as_ref().is_none_or(|(w, _)| score < *w) {
            worst = Some((score, s.clone()));
        }
    })?;
    let (score, start) = worst.expect("at least one sample");
    if score < 0 {
        return Ok(Some(start));
    }

    let mut sampler = SubsetSampler::new(g.n(), derive_seed(seed, 1));
    for restart in 0..cfg.local_search_restarts {
        let init = if restart == 0 { start.clone() } else { sampler.draw(half) };
        let (set, score) = local_search(g, init, d, 20 * g.n());
        if score < 0 {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Steepest descent on `|∂S| - d|S|` by single-vertex toggles, keeping
/// `1 <= |S| <= n/2`. Only strictly improving moves are taken.
fn local_search(g: &Graph, init: VertexSet, d: i64, max_moves: usize) -> (VertexSet, i64) {
    let n = g.n();
    let half = n / 2;
    let mut set = init;
    // members of `set` adjacent to each vertex
    let mut inside = vec![0i64; n];
    for u in set.iter() {
        for &v in g.neighbors(u) {
            inside[v as usize] += 1;
        }
    }
    let mut boundary = g.boundary_unchecked(&set) as i64;
    let mut score = boundary - d * set.len() as i64;
    for _ in 0..max_moves {
        if score < 0 {
            break;
        }
        let mut best: Option<(i64, usize)> = None;
        for v in 0..n {
            let deg = g.degree(v) as i64;
            let delta = if set.contains(v) {
                if set.len() == 1 {
                    continue;
                }
                (2 * inside[v] - deg) + d
            } else {
                if set.len() == half {
                    continue;
                }
                (deg - 2 * inside[v]) - d
            };
            if delta < 0 && best.is_none_or(|(b, _)| delta < b) {
                best = Some((delta, v));
            }
        }
        let Some((delta, v)) = best else { break };
        let sign = if set.contains(v) {
            set.remove(v);
            -1
        } else {
            set.insert(v);
            1
        };
        for &u in g.neighbors(v) {
            inside[u as usize] += sign;
        }
        boundary += delta + sign * d;
        score += delta;
    }
    debug_assert_eq!(boundary, g.boundary_unchecked(&set) as i64);
    (set, score)
}

/// Classification of every minimizer, as used by experiments.
pub fn witness_kinds(reports: &[CutReport]) -> (usize, usize) {
    let independent = reports
        .iter()
        .filter(|r| r.witness_kind == WitnessKind::IndependentMinDegree)
        .count();
    (reports.len(), independent)
}

/// Re-derives a report's fields from the graph.
pub fn revalidate(g: &Graph, report: &CutReport) -> Result<()> {
    let boundary = g.boundary_size(&report.witness)? as u64;
    let kind = classify(g, &report.witness)?;
    if boundary != report.boundary
        || report.ratio != Ratio::new(boundary, report.witness.len() as u64)
        || kind != report.witness_kind
    {
        return Err(IsoError::Invariant(format!(
            "cut report for {:?} does not match the graph",
            report.witness
        )));
    }
    Ok(())
}
