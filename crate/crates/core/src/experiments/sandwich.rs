//! Spectral bounds `λ2/2 <= i(G) <= sqrt(λ2 (2Δ - λ2))` on small G(n, p).

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{finish, run_indexed, Aggregates, ExperimentConfig, ExperimentResult, TrialRecord};
use crate::error::{IsoError, Result};
use crate::graph::Ratio;
use crate::iso::iso_exact;
use crate::process::sample_gnp;
use crate::rng::derive_seed;
use crate::spectral::spectral_bounds;

/// Slack allowed on both sides of the sandwich.
pub const SANDWICH_TOL: f64 = 1e-7;

/// Resampling attempts per trial when only connected graphs are wanted.
const CONNECTED_ATTEMPTS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichTrial {
    pub trial: usize,
    pub p: f64,
    pub seed: u64,
    /// Samples drawn until the kept one (1 unless `connected_only`).
    pub attempts: u64,
    pub connected: bool,
    pub delta: usize,
    pub max_degree: usize,
    pub iso: Ratio,
    pub lambda2: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
    /// `i / δ`; absent when `δ = 0`.
    pub i_over_delta: Option<f64>,
}

pub fn run_sandwich(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate_common()?;
    if cfg.n > cfg.exact_cap {
        return Err(IsoError::Config(format!(
            "sandwich needs n <= exact_cap, got n = {} and exact_cap = {}",
            cfg.n, cfg.exact_cap
        )));
    }
    if cfg.n < 2 {
        return Err(IsoError::Config("sandwich needs n >= 2".into()));
    }
    if cfg.p_grid.is_empty() || cfg.p_grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(IsoError::Config(format!("p grid must be nonempty within [0, 1], got {:?}", cfg.p_grid)));
    }
    if cfg.connected_only && cfg.p_grid.contains(&0.0) {
        return Err(IsoError::Config("connected samples are impossible at p = 0".into()));
    }
    let solver = cfg.solver();
    let started = Instant::now();
    let total = cfg.p_grid.len() * cfg.trials;
    let records = run_indexed(cfg.workers, total, |index| {
        let p = cfg.p_grid[index / cfg.trials];
        let seed = derive_seed(cfg.master_seed, index as u64);
        let mut attempts = 0;
        let g = loop {
            let g = sample_gnp(cfg.n, p, derive_seed(seed, attempts))?;
            attempts += 1;
            if !cfg.connected_only || g.is_connected() {
                break g;
            }
            if attempts == CONNECTED_ATTEMPTS {
                return Err(IsoError::Config(format!(
                    "no connected G({}, {p}) in {CONNECTED_ATTEMPTS} draws",
                    cfg.n
                )));
            }
        };
        let cut = iso_exact(&g, &solver)?;
        let bounds = spectral_bounds(&g)?;
        let i = cut.ratio.to_f64();
        let delta = g.min_degree();
        Ok(SandwichTrial {
            trial: index,
            p,
            seed,
            attempts,
            connected: g.is_connected(),
            delta,
            max_degree: g.max_degree(),
            iso: cut.ratio,
            lambda2: bounds.lambda2,
            lower: bounds.lower,
            upper: bounds.upper,
            holds: bounds.sandwiches(i, SANDWICH_TOL),
            i_over_delta: (delta > 0).then(|| i / delta as f64),
        })
    })?;

    let mut agg = Aggregates::default();
    agg.count("sandwich_connected", records.iter().filter(|t| t.connected).map(|t| t.holds));
    agg.count("sandwich_disconnected", records.iter().filter(|t| !t.connected).map(|t| t.holds));
    for &p in &cfg.p_grid {
        let at_p = || records.iter().filter(move |t| t.p == p);
        agg.count(format!("sandwich_p{p}"), at_p().map(|t| t.holds));
        agg.summarize(format!("i_over_delta_p{p}"), at_p().filter_map(|t| t.i_over_delta));
        agg.summarize(format!("i_p{p}"), at_p().map(|t| t.iso.to_f64()));
    }
    let trials = records.into_iter().map(TrialRecord::Sandwich).collect();
    Ok(finish(cfg, started, trials, agg))
}
