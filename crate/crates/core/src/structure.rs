//! Structural checks on low-degree vertices, small dense subgraphs and
//! bad sets (`|∂S| < d|S|`).

use serde::{Deserialize, Serialize};

use crate::connected::{ConnectedSets, Control, Outcome};
use crate::error::{domain, IsoError, Result};
use crate::graph::{Graph, VertexSet};

/// Most connected sets [`check_density`] will visit.
pub const DENSITY_VISIT_LIMIT: u64 = 10_000_000;

/// Largest set accepted by [`is_elementary_bad`].
pub const ELEMENTARY_MAX: usize = 20;

/// Degree threshold `4(d + 6)` below which a vertex is SMALL.
pub fn small_degree_threshold(d: usize) -> usize {
    4 * (d + 6)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallSetReport {
    pub members: VertexSet,
    pub independent: bool,
    /// No vertex of the graph is adjacent to two members.
    pub no_common_neighbors: bool,
    pub d_used: usize,
}

pub fn small_set(g: &Graph, d: usize) -> SmallSetReport {
    let threshold = small_degree_threshold(d);
    let mut members = VertexSet::empty(g.n());
    for v in (0..g.n()).filter(|&v| g.degree(v) < threshold) {
        members.insert(v);
    }
    let independent = members
        .iter()
        .all(|v| g.neighbors(v).iter().all(|&u| !members.contains(u as usize)));
    // count SMALL neighbors of each vertex
    let mut hits = vec![0u8; g.n()];
    let mut no_common_neighbors = true;
    'outer: for v in members.iter() {
        for &u in g.neighbors(v) {
            let h = &mut hits[u as usize];
            *h += 1;
            if *h >= 2 {
                no_common_neighbors = false;
                break 'outer;
            }
        }
    }
    SmallSetReport { members, independent, no_common_neighbors, d_used: d }
}

/// SMALL is independent and no two SMALL vertices share a neighbor.
pub fn check_claim1(g: &Graph, d: usize) -> bool {
    let r = small_set(g, d);
    r.independent && r.no_common_neighbors
}

/// Looks for a set of `k <= k_max` vertices spanning more than `2k` edges.
///
/// Only connected sets are grown: a smallest violator is connected and has
/// no vertex of internal degree below 3. A branch is cut once no completion
/// can reach that, or once even the densest completion stays at or below `2k`.
pub fn check_density(g: &Graph, k_max: usize) -> Result<Option<VertexSet>> {
    check_density_with_limit(g, k_max, DENSITY_VISIT_LIMIT)
}

pub fn check_density_with_limit(g: &Graph, k_max: usize, limit: u64) -> Result<Option<VertexSet>> {
    if k_max > g.n() {
        return Err(domain(format!("k_max = {k_max} exceeds n = {}", g.n())));
    }
    let n = g.n();
    let mut found = None;
    let mut links = vec![0usize; n];
    let mut touched = Vec::new();
    let mut link_counts = Vec::new();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let outcome = ConnectedSets::new(g, k_max, limit).run(|view| {
        let s = view.members.len();
        let e = view.internal_edges;
        if e > 2 * s {
            found = Some(view.members.to_vec());
            return Control::Stop;
        }
        // edges each outside vertex sends into the set
        link_counts.clear();
        for &u in view.members {
            for &w in g.neighbors(u) {
                let w = w as usize;
                if !view.in_set[w] {
                    if links[w] == 0 {
                        touched.push(w);
                    }
                    links[w] += 1;
                }
            }
        }
        // most edges an outside vertex can have away from the set
        let far = by_degree.iter().find(|&&v| !view.in_set[v] && links[v] == 0);
        let mut outward = far.map_or(0, |&v| g.degree(v));
        for w in touched.drain(..) {
            outward = outward.max(g.degree(w) - links[w]);
            link_counts.push(links[w]);
            links[w] = 0;
        }
        link_counts.sort_unstable_by(|a, b| b.cmp(a));
        // a smallest violator has internal minimum degree >= 3, so the
        // members' missing internal degree must come from the added vertices
        let deficit: usize = view
            .members
            .iter()
            .map(|&u| {
                let inside = g.neighbors(u).iter().filter(|&&w| view.in_set[w as usize]).count();
                3usize.saturating_sub(inside)
            })
            .sum();
        // `extra` added vertices send at most the `extra` largest link counts
        // into the set, and each has at most min(extra - 1, outward) edges
        // among the added vertices
        let mut supply = 0;
        let promising = (1..=k_max - s).any(|extra| {
            supply += link_counts.get(extra - 1).copied().unwrap_or(0);
            let among = extra * (extra - 1).min(outward) / 2;
            deficit <= supply && e + supply + among > 2 * (s + extra)
        });
        if promising {
            Control::Continue
        } else {
            Control::Prune
        }
    });
    if outcome == Outcome::BudgetExhausted {
        return Err(IsoError::Resource(format!(
            "density check visited more than {limit} connected sets at k_max = {k_max}; \
             use a smaller cap"
        )));
    }
    found.map(|m| VertexSet::from_indices(n, m)).transpose()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadSetReport {
    pub set: VertexSet,
    pub d_used: usize,
    /// `d|S| - |∂S|`; positive exactly when the set is bad.
    pub deficiency: i64,
    pub elementary: bool,
}

impl BadSetReport {
    pub fn is_bad(&self) -> bool {
        self.deficiency > 0
    }
}

/// Deficiency of `s` at degree `d`. `elementary` is filled in only when the
/// set is bad and small enough to enumerate; otherwise it is false.
pub fn is_bad(g: &Graph, s: &VertexSet, d: usize) -> Result<BadSetReport> {
    let boundary = g.boundary_size(s)? as i64;
    let deficiency = d as i64 * s.len() as i64 - boundary;
    let elementary = deficiency > 0 && s.len() <= ELEMENTARY_MAX && is_elementary_bad(g, s, d)?;
    Ok(BadSetReport { set: s.clone(), d_used: d, deficiency, elementary })
}

/// Bad, and no proper nonempty subset is bad.
pub fn is_elementary_bad(g: &Graph, s: &VertexSet, d: usize) -> Result<bool> {
    if s.len() > ELEMENTARY_MAX {
        return Err(IsoError::Resource(format!(
            "elementary check enumerates 2^|S| subsets; |S| = {} exceeds {ELEMENTARY_MAX}",
            s.len()
        )));
    }
    let d = d as i64;
    if g.boundary_size(s)? as i64 >= d * s.len() as i64 {
        return Ok(false);
    }
    let members = s.to_vec();
    let k = members.len();
    let full = (1u32 << k) - 1;
    for mask in 1..full {
        let sub = VertexSet::from_indices(
            g.n(),
            (0..k).filter(|i| mask >> i & 1 == 1).map(|i| members[i]),
        )?;
        if (g.boundary_unchecked(&sub) as i64) < d * sub.len() as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}
