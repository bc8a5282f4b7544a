//! `i(G(t)) = δ(G(t))` along the process up to `τ(δ = d_max)`.
//!
//! Both `i` and `δ` are nondecreasing in `t`, `i <= δ` always, and `δ` is
//! constant on `[τ(δ=d), τ(δ=d+1))`. Before `τ(δ=1)` there is an isolated
//! vertex, so `i = δ = 0`. Hence `i = δ` holds for every `t <= τ(δ=d_max)`
//! exactly when `i(G(τ(δ=d))) >= d` for each `d <= d_max`, and the run only
//! evaluates the graph at the hitting times.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{finish, run_indexed, Aggregates, ExperimentConfig, ExperimentResult, TrialRecord};
use crate::error::{IsoError, Result};
use crate::graph::{Graph, Ratio, VertexSet};
use crate::iso::{find_bad_set, iso_exact_all_witnesses, revalidate, witness_kinds, SolverConfig};
use crate::process::{hitting_times, sample_trace};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitRecord {
    pub d: usize,
    /// τ(δ = d).
    pub tau: u64,
    pub delta: usize,
    /// Exact `i`; absent in falsifier mode.
    pub iso: Option<Ratio>,
    pub i_equals_delta: bool,
    pub minimizers: Option<usize>,
    pub independent_min_degree: Option<usize>,
    /// Lexicographically first minimizer (exact mode) or the bad set found.
    pub witness: Option<Vec<usize>>,
    /// `δ|S| - |∂S|` for the witness, recomputed from the graph.
    pub witness_deficiency: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Trial {
    pub trial: usize,
    pub seed: u64,
    pub hits: Vec<HitRecord>,
    /// `i = δ` for every `t <= τ(δ = d_max)`; exact mode only.
    pub all_t_ok: Option<bool>,
}

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate_common()?;
    if cfg.n < 2 {
        return Err(IsoError::Config("theorem1 needs n >= 2".into()));
    }
    if cfg.d_max >= cfg.n {
        return Err(IsoError::Config(format!("d_max = {} must be below n = {}", cfg.d_max, cfg.n)));
    }
    if cfg.n > cfg.exact_cap && !cfg.falsifier {
        return Err(IsoError::Config(format!(
            "n = {} is above exact_cap = {}; raise exact_cap or enable falsifier mode",
            cfg.n, cfg.exact_cap
        )));
    }
    Ok(())
}

fn deficiency(g: &Graph, s: &VertexSet, d: usize) -> Result<i64> {
    Ok(d as i64 * s.len() as i64 - g.boundary_size(s)? as i64)
}

fn exact_hit(g: &Graph, d: usize, tau: u64, solver: &SolverConfig) -> Result<HitRecord> {
    let delta = g.min_degree();
    let all = iso_exact_all_witnesses(g, solver)?;
    let first = all.first().ok_or_else(|| IsoError::Invariant("no minimizer returned".into()))?;
    for r in &all {
        revalidate(g, r)?;
    }
    let (count, independent) = witness_kinds(&all);
    let equals = first.ratio.cmp_int(delta as u64).is_eq();
    Ok(HitRecord {
        d,
        tau,
        delta,
        iso: Some(first.ratio),
        i_equals_delta: equals,
        minimizers: Some(count),
        independent_min_degree: Some(independent),
        witness: Some(first.witness.to_vec()),
        witness_deficiency: Some(deficiency(g, &first.witness, delta)?),
    })
}

fn falsifier_hit(g: &Graph, d: usize, tau: u64, solver: &SolverConfig, seed: u64) -> Result<HitRecord> {
    let delta = g.min_degree();
    let bad = find_bad_set(g, delta.max(1), solver, seed)?;
    let witness_deficiency = match &bad {
        Some(s) => {
            let def = deficiency(g, s, delta)?;
            if def <= 0 {
                return Err(IsoError::Invariant(format!("reported bad set {s:?} is not bad")));
            }
            Some(def)
        }
        None => None,
    };
    Ok(HitRecord {
        d,
        tau,
        delta,
        iso: None,
        i_equals_delta: bad.is_none(),
        minimizers: None,
        independent_min_degree: None,
        witness: bad.map(|s| s.to_vec()),
        witness_deficiency,
    })
}

fn trial(cfg: &ExperimentConfig, solver: &SolverConfig, index: usize) -> Result<Theorem1Trial> {
    let seed = derive_seed(cfg.master_seed, index as u64);
    let trace = sample_trace(cfg.n, seed)?;
    let times = hitting_times(&trace, cfg.d_max)?;
    let exact = cfg.n <= cfg.exact_cap;
    let mut hits = Vec::with_capacity(cfg.d_max);
    for d in 1..=cfg.d_max {
        let tau = times.tau(d).expect("hitting time below n - 1 exists");
        let g = trace.graph_at(tau)?;
        if g.min_degree() != d {
            return Err(IsoError::Invariant(format!(
                "δ(G(τ)) = {} at τ(δ = {d}) = {tau}",
                g.min_degree()
            )));
        }
        let hit = if exact {
            exact_hit(&g, d, tau, solver)?
        } else {
            falsifier_hit(&g, d, tau, solver, derive_seed(seed, d as u64))?
        };
        hits.push(hit);
    }
    let all_t_ok = exact.then(|| hits.iter().all(|h| h.i_equals_delta));
    Ok(Theorem1Trial { trial: index, seed, hits, all_t_ok })
}

pub fn run_theorem1(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    validate(cfg)?;
    let started = Instant::now();
    let solver = cfg.solver();
    let records = run_indexed(cfg.workers, cfg.trials, |i| trial(cfg, &solver, i))?;

    let mut agg = Aggregates::default();
    for d in 1..=cfg.d_max {
        let at = |t: &Theorem1Trial| t.hits[d - 1].clone();
        agg.count(format!("i_eq_delta_at_tau_d{d}"), records.iter().map(|t| at(t).i_equals_delta));
        if cfg.n <= cfg.exact_cap {
            agg.count(
                format!("minimizers_independent_min_degree_at_tau_d{d}"),
                records.iter().map(|t| {
                    let h = at(t);
                    h.minimizers == h.independent_min_degree
                }),
            );
            agg.summarize(
                format!("i_over_delta_at_tau_d{d}"),
                records.iter().map(|t| at(t).iso.unwrap().to_f64() / d as f64),
            );
        }
    }
    if cfg.n <= cfg.exact_cap {
        agg.count("i_eq_delta_for_all_t", records.iter().map(|t| t.all_t_ok == Some(true)));
        agg.count(
            "equal_witness_deficiency_zero",
            records.iter().flat_map(|t| &t.hits).filter(|h| h.i_equals_delta).map(|h| {
                h.witness_deficiency == Some(0)
            }),
        );
    }
    let trials = records.into_iter().map(TrialRecord::Theorem1).collect();
    Ok(finish(cfg, started, trials, agg))
}
