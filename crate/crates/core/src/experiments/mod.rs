//! Seeded Monte Carlo experiments.
//!
//! Trial `i` of a run draws all of its randomness from
//! `derive_seed(master_seed, i)`, and results are collected by trial index,
//! so the output does not depend on the worker count.

mod claims;
mod config;
mod emit;
mod prop1;
mod sandwich;
mod theorem1;
mod theorem2;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use claims::{run_claims, ClaimsTrial, ClaimsSample};
pub use config::{ExperimentConfig, ExperimentKind};
pub use emit::{emit, parse_json, strip_wall_clock, OutputFormat, CSV_HEADER};
pub use prop1::{run_prop1, Prop1Check, Prop1Trial};
pub use sandwich::{run_sandwich, SandwichTrial, SANDWICH_TOL};
pub use theorem1::{run_theorem1, HitRecord, Theorem1Trial};
pub use theorem2::{bisection_below, run_theorem2, Theorem2Trial};

use crate::error::{IsoError, Result};

pub const SCHEMA: &str = "iso-lab/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrialRecord {
    Theorem1(Theorem1Trial),
    Theorem2(Theorem2Trial),
    Prop1(Prop1Trial),
    Claims(ClaimsTrial),
    Sandwich(SandwichTrial),
}

/// `successes / trials`, kept as two integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frequency {
    pub metric: String,
    pub successes: u64,
    pub trials: u64,
}

impl Frequency {
    pub fn new(metric: impl Into<String>, successes: u64, trials: u64) -> Self {
        Self { metric: metric.into(), successes, trials }
    }

    pub fn value(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub metric: String,
    pub count: u64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

impl Summary {
    /// Values are summed in the given order.
    pub fn of(metric: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        let mut count = 0u64;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            count += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        let some = count > 0;
        Self {
            metric: metric.into(),
            count,
            min: some.then_some(min),
            max: some.then_some(max),
            mean: some.then(|| sum / count as f64),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub frequencies: Vec<Frequency>,
    pub summaries: Vec<Summary>,
}

impl Aggregates {
    pub fn frequency(&self, metric: &str) -> Option<&Frequency> {
        self.frequencies.iter().find(|f| f.metric == metric)
    }

    pub fn summary(&self, metric: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.metric == metric)
    }

    pub(crate) fn count(&mut self, metric: impl Into<String>, outcomes: impl IntoIterator<Item = bool>) {
        let (mut s, mut t) = (0, 0);
        for ok in outcomes {
            t += 1;
            s += ok as u64;
        }
        self.frequencies.push(Frequency::new(metric, s, t));
    }

    pub(crate) fn summarize(&mut self, metric: impl Into<String>, values: impl IntoIterator<Item = f64>) {
        self.summaries.push(Summary::of(metric, values));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema: String,
    pub code_version: String,
    pub config: ExperimentConfig,
    pub aggregates: Aggregates,
    pub trials: Vec<TrialRecord>,
    /// Excluded from reproducibility comparisons.
    pub wall_clock_ms: u64,
}

pub fn code_version() -> String {
    format!("isolab {}", env!("CARGO_PKG_VERSION"))
}

/// Dispatches on `cfg.kind`.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    match cfg.kind {
        ExperimentKind::Theorem1 => run_theorem1(cfg),
        ExperimentKind::Theorem2 => run_theorem2(cfg),
        ExperimentKind::Prop1 => run_prop1(cfg),
        ExperimentKind::Claims => run_claims(cfg),
        ExperimentKind::Sandwich => run_sandwich(cfg),
    }
}

/// Runs `task(0..count)` on `workers` threads; output is in index order.
pub(crate) fn run_indexed<T, F>(workers: usize, count: usize, task: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| IsoError::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(&task).collect::<Vec<_>>())
        .into_iter()
        .collect()
}

pub(crate) fn finish(
    cfg: &ExperimentConfig,
    started: Instant,
    trials: Vec<TrialRecord>,
    aggregates: Aggregates,
) -> ExperimentResult {
    ExperimentResult {
        schema: SCHEMA.to_string(),
        code_version: code_version(),
        config: cfg.clone(),
        aggregates,
        trials,
        wall_clock_ms: started.elapsed().as_millis() as u64,
    }
}
