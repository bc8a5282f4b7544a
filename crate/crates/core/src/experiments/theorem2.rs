//! Bisections of G(n, p) with `p = C ln n / n` against `(1/2 + ε)δ`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{finish, run_indexed, Aggregates, ExperimentConfig, ExperimentResult, TrialRecord};
use crate::error::{IsoError, Result};
use crate::graph::Ratio;
use crate::iso::sample_bisections;
use crate::process::sample_gnp;
use crate::rng::derive_seed;
use crate::thresholds::{c_epsilon, degree_slack_for};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Trial {
    pub trial: usize,
    pub seed: u64,
    pub p: f64,
    pub delta: usize,
    pub samples: usize,
    pub max_sampled_ratio: Ratio,
    /// Sampled bisections with `|∂S|/|S| >= (1/2 + ε)δ`.
    pub violations: usize,
    /// First violating set, if any.
    pub violation_witness: Option<Vec<usize>>,
    /// `δ >= (1 - ε2) n p`.
    pub min_degree_near_np: bool,
}

/// `boundary / size < (1/2 + eps) · delta`, without dividing.
pub fn bisection_below(boundary: u64, size: usize, delta: usize, eps: f64) -> bool {
    (boundary as f64) < (0.5 + eps) * delta as f64 * size as f64
}

fn validate(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.validate_common()?;
    if !(cfg.eps > 0.0 && cfg.eps < 0.5) {
        return Err(IsoError::Config(format!("eps must lie in (0, 1/2), got {}", cfg.eps)));
    }
    let c_min = c_epsilon(cfg.eps)?;
    if !(cfg.c > c_min) {
        return Err(IsoError::Config(format!(
            "C = {} must exceed (1+2ε)/(2ε - ln(1+2ε)) = {c_min:.4} for ε = {}",
            cfg.c, cfg.eps
        )));
    }
    if cfg.n < 100 {
        return Err(IsoError::Config(format!("theorem2 needs n >= 100, got {}", cfg.n)));
    }
    if cfg.bisection_samples == 0 {
        return Err(IsoError::Config("bisection_samples must be at least 1".into()));
    }
    let p = cfg.c * (cfg.n as f64).ln() / cfg.n as f64;
    if p > 1.0 {
        return Err(IsoError::Config(format!("p = C ln n / n = {p} exceeds 1")));
    }
    Ok(p)
}

pub fn run_theorem2(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let p = validate(cfg)?;
    let started = Instant::now();
    let eps2 = degree_slack_for(cfg.eps);
    let records = run_indexed(cfg.workers, cfg.trials, |index| {
        let seed = derive_seed(cfg.master_seed, index as u64);
        let g = sample_gnp(cfg.n, p, derive_seed(seed, 0))?;
        let delta = g.min_degree();
        let mut violations = 0;
        let mut violation_witness = None;
        let sample = sample_bisections(&g, cfg.bisection_samples, derive_seed(seed, 1), |s, boundary| {
            if !bisection_below(boundary, s.len(), delta, cfg.eps) {
                violations += 1;
                if violation_witness.is_none() {
                    violation_witness = Some(s.clone());
                }
            }
        })?;
        if let Some(s) = &violation_witness {
            // re-derive before it is persisted
            let b = g.boundary_size(s)? as u64;
            if bisection_below(b, s.len(), delta, cfg.eps) {
                return Err(IsoError::Invariant(format!("violating bisection {s:?} does not violate")));
            }
        }
        Ok(Theorem2Trial {
            trial: index,
            seed,
            p,
            delta,
            samples: sample.samples,
            max_sampled_ratio: sample.max_ratio,
            violations,
            violation_witness: violation_witness.map(|s| s.to_vec()),
            min_degree_near_np: delta as f64 >= (1.0 - eps2) * cfg.n as f64 * p,
        })
    })?;

    let mut agg = Aggregates::default();
    agg.count("all_sampled_bisections_below", records.iter().map(|t| t.violations == 0));
    let total: u64 = records.iter().map(|t| t.samples as u64).sum();
    let bad: u64 = records.iter().map(|t| t.violations as u64).sum();
    agg.frequencies.push(super::Frequency::new("sampled_bisections_below", total - bad, total));
    agg.count("min_degree_near_np", records.iter().map(|t| t.min_degree_near_np));
    agg.summarize(
        "max_sampled_ratio_over_delta",
        records.iter().map(|t| t.max_sampled_ratio.to_f64() / t.delta.max(1) as f64),
    );
    agg.summarize("delta", records.iter().map(|t| t.delta as f64));
    let trials = records.into_iter().map(TrialRecord::Theorem2).collect();
    Ok(finish(cfg, started, trials, agg))
}
