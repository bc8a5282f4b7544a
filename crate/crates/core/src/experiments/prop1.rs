//! Minimum degree of the process at the two thresholds `m_d < M_d`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{finish, run_indexed, Aggregates, ExperimentConfig, ExperimentResult, TrialRecord};
use crate::error::{IsoError, Result};
use crate::process::sample_trace;
use crate::rng::derive_seed;
use crate::thresholds::ThresholdParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Check {
    pub d: usize,
    pub omega: f64,
    pub m_lower: u64,
    pub m_upper: u64,
    pub delta_at_lower: usize,
    pub delta_at_upper: usize,
    /// `δ(G(m_d)) <= d - 1`.
    pub lower_ok: bool,
    /// `δ(G(M_d)) >= d`.
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Trial {
    pub trial: usize,
    pub seed: u64,
    pub checks: Vec<Prop1Check>,
}

fn thresholds(cfg: &ExperimentConfig) -> Result<Vec<(ThresholdParams, u64, u64)>> {
    cfg.validate_common()?;
    let degrees = cfg.target_degrees();
    if degrees.is_empty() {
        return Err(IsoError::Config("prop1 needs at least one target degree".into()));
    }
    degrees
        .into_iter()
        .map(|d| {
            let p = ThresholdParams::new(cfg.n, d, cfg.omega_rule)?;
            let (lo, hi) = (p.lower_threshold()?, p.upper_threshold()?);
            if lo >= hi {
                return Err(IsoError::Invariant(format!("m_d = {lo} >= M_d = {hi} for d = {d}")));
            }
            Ok((p, lo, hi))
        })
        .collect()
}

pub fn run_prop1(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let params = thresholds(cfg)?;
    let started = Instant::now();
    let times: Vec<u64> = params.iter().flat_map(|&(_, lo, hi)| [lo, hi]).collect();
    let records = run_indexed(cfg.workers, cfg.trials, |index| {
        let seed = derive_seed(cfg.master_seed, index as u64);
        let trace = sample_trace(cfg.n, seed)?;
        let deltas = trace.min_degrees_at(&times)?;
        let checks = params
            .iter()
            .zip(deltas.chunks(2))
            .map(|(&(p, lo, hi), dl)| Prop1Check {
                d: p.d,
                omega: p.omega,
                m_lower: lo,
                m_upper: hi,
                delta_at_lower: dl[0],
                delta_at_upper: dl[1],
                lower_ok: dl[0] < p.d,
                upper_ok: dl[1] >= p.d,
            })
            .collect();
        Ok(Prop1Trial { trial: index, seed, checks })
    })?;

    let mut agg = Aggregates::default();
    for (j, (p, _, _)) in params.iter().enumerate() {
        let d = p.d;
        agg.count(format!("delta_below_d_at_m_d{d}"), records.iter().map(|t| t.checks[j].lower_ok));
        agg.count(format!("delta_at_least_d_at_M_d{d}"), records.iter().map(|t| t.checks[j].upper_ok));
        agg.count(
            format!("both_d{d}"),
            records.iter().map(|t| t.checks[j].lower_ok && t.checks[j].upper_ok),
        );
    }
    let trials = records.into_iter().map(TrialRecord::Prop1).collect();
    Ok(finish(cfg, started, trials, agg))
}
