//! Structural claims on G(n, m) at `m_d` and `M_d`: SMALL vertices far
//! apart, sparse small subgraphs, and no large set with `|∂S| <= d|S|`.

use std::time::Instant;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{finish, run_indexed, Aggregates, ExperimentConfig, ExperimentResult, TrialRecord};
use crate::error::{IsoError, Result};
use crate::graph::{Graph, VertexSet};
use crate::process::sample_gnm;
use crate::rng::{derive_seed, rng_from_seed};
use crate::structure::{check_claim1, check_density};
use crate::thresholds::ThresholdParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimsSample {
    pub d: usize,
    /// `"m_d"` or `"M_d"`.
    pub point: String,
    pub m: u64,
    pub claim1: bool,
    pub density_ok: bool,
    pub density_witness: Option<Vec<usize>>,
    pub large_sets_checked: usize,
    pub large_violations: usize,
    pub large_witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimsTrial {
    pub trial: usize,
    pub seed: u64,
    pub samples: Vec<ClaimsSample>,
}

/// `⌈n^{1/4}⌉`, doubling, capped by and ending at `⌊n/2⌋`.
pub(crate) fn large_set_sizes(n: usize) -> Vec<usize> {
    let half = n / 2;
    let mut k = ((n as f64).powf(0.25).ceil() as usize).max(1);
    let mut out = Vec::new();
    while k < half {
        out.push(k);
        k *= 2;
    }
    if half >= 1 {
        out.push(half);
    }
    out
}

fn density_cap(n: usize) -> usize {
    ((n as f64).powf(0.25).ceil() as usize).clamp(1, n)
}

fn check_graph(
    cfg: &ExperimentConfig,
    g: &Graph,
    d: usize,
    point: &str,
    m: u64,
    seed: u64,
) -> Result<ClaimsSample> {
    let n = g.n();
    let claim1 = check_claim1(g, d);
    let density_witness = check_density(g, density_cap(n))?;
    if let Some(s) = &density_witness {
        let e = g.induced_edge_count(s)?;
        if e <= 2 * s.len() {
            return Err(IsoError::Invariant(format!("density witness {s:?} spans only {e} edges")));
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut checked = 0;
    let mut violations = 0;
    let mut large_witness: Option<VertexSet> = None;
    for k in large_set_sizes(n) {
        for _ in 0..cfg.large_set_samples {
            let s = VertexSet::from_indices(n, sample(&mut rng, n, k))?;
            checked += 1;
            if g.boundary_size(&s)? <= d * k {
                violations += 1;
                large_witness.get_or_insert(s);
            }
        }
    }
    Ok(ClaimsSample {
        d,
        point: point.to_string(),
        m,
        claim1,
        density_ok: density_witness.is_none(),
        density_witness: density_witness.map(|s| s.to_vec()),
        large_sets_checked: checked,
        large_violations: violations,
        large_witness: large_witness.map(|s| s.to_vec()),
    })
}

pub fn run_claims(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate_common()?;
    let degrees = cfg.target_degrees();
    if degrees.is_empty() {
        return Err(IsoError::Config("claims needs at least one target degree".into()));
    }
    let mut points = Vec::new();
    for &d in &degrees {
        let p = ThresholdParams::new(cfg.n, d, cfg.omega_rule)?;
        points.push((d, "m_d", p.lower_threshold()?));
        points.push((d, "M_d", p.upper_threshold()?));
    }
    let started = Instant::now();
    let records = run_indexed(cfg.workers, cfg.trials, |index| {
        let seed = derive_seed(cfg.master_seed, index as u64);
        let mut samples = Vec::with_capacity(points.len());
        for (j, &(d, point, m)) in points.iter().enumerate() {
            // both points of one d are prefixes of the same process
            let g = sample_gnm(cfg.n, m, derive_seed(seed, d as u64))?;
            samples.push(check_graph(cfg, &g, d, point, m, derive_seed(seed, 1000 + j as u64))?);
        }
        Ok(ClaimsTrial { trial: index, seed, samples })
    })?;

    let mut agg = Aggregates::default();
    for (j, &(d, point, _)) in points.iter().enumerate() {
        let at = |t: &ClaimsTrial| t.samples[j].clone();
        agg.count(format!("claim1_d{d}_{point}"), records.iter().map(|t| at(t).claim1));
        agg.count(format!("density_d{d}_{point}"), records.iter().map(|t| at(t).density_ok));
        agg.count(format!("large_sets_d{d}_{point}"), records.iter().map(|t| at(t).large_violations == 0));
    }
    let trials = records.into_iter().map(TrialRecord::Claims).collect();
    Ok(finish(cfg, started, trials, agg))
}
