use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{IsoError, Result};
use crate::iso::{SolverConfig, MAX_EXACT_CAP};
use crate::thresholds::OmegaRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Theorem1,
    Theorem2,
    Prop1,
    Claims,
    Sandwich,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Theorem1,
        ExperimentKind::Theorem2,
        ExperimentKind::Prop1,
        ExperimentKind::Claims,
        ExperimentKind::Sandwich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Theorem1 => "theorem1",
            ExperimentKind::Theorem2 => "theorem2",
            ExperimentKind::Prop1 => "prop1",
            ExperimentKind::Claims => "claims",
            ExperimentKind::Sandwich => "sandwich",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = IsoError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            IsoError::Config(format!(
                "unknown experiment {s:?}; expected one of theorem1, theorem2, prop1, claims, sandwich"
            ))
        })
    }
}

/// Everything that determines an experiment's output. `workers` only
/// affects speed and is left out of the serialized echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// Largest target minimum degree (theorem1), or the range `1..=d_max`
    /// when `degrees` is empty (prop1, claims).
    pub d_max: usize,
    /// Explicit target degrees for prop1 and claims.
    pub degrees: Vec<usize>,
    pub eps: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub bisection_samples: usize,
    pub exact_cap: usize,
    pub omega_rule: OmegaRule,
    /// theorem1 on graphs above `exact_cap`: search for bad sets instead of
    /// computing `i` exactly.
    pub falsifier: bool,
    pub p_grid: Vec<f64>,
    /// sandwich: resample until connected.
    pub connected_only: bool,
    /// claims: random sets drawn per size on the large-set grid.
    pub large_set_samples: usize,
    #[serde(skip)]
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn defaults_for(kind: ExperimentKind) -> Self {
        let base = Self {
            kind,
            n: 12,
            trials: 200,
            master_seed: 1,
            d_max: 3,
            degrees: Vec::new(),
            eps: 0.25,
            c: 16.0,
            bisection_samples: 10_000,
            exact_cap: SolverConfig::default().exact_cap,
            omega_rule: OmegaRule::LogLogR,
            falsifier: false,
            p_grid: Vec::new(),
            connected_only: false,
            large_set_samples: 200,
            workers: 1,
        };
        match kind {
            ExperimentKind::Theorem1 => base,
            ExperimentKind::Theorem2 => Self { n: 2000, trials: 50, ..base },
            ExperimentKind::Prop1 => Self { n: 50_000, trials: 50, d_max: 2, ..base },
            ExperimentKind::Claims => Self { n: 3000, trials: 50, d_max: 2, degrees: vec![2], ..base },
            ExperimentKind::Sandwich => Self {
                n: 16,
                trials: 100,
                p_grid: (2..=9).map(|i| i as f64 / 10.0).collect(),
                ..base
            },
        }
    }

    /// Target degrees for prop1 and claims.
    pub fn target_degrees(&self) -> Vec<usize> {
        if self.degrees.is_empty() {
            (1..=self.d_max).collect()
        } else {
            self.degrees.clone()
        }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            exact_cap: self.exact_cap,
            bisection_samples: self.bisection_samples,
            ..SolverConfig::default()
        }
    }

    /// Checks that apply to every kind; each runner adds its own.
    pub fn validate_common(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(IsoError::Config("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(IsoError::Config("n must be at least 1".into()));
        }
        if self.exact_cap > MAX_EXACT_CAP {
            return Err(IsoError::Config(format!(
                "exact_cap {} exceeds {MAX_EXACT_CAP}",
                self.exact_cap
            )));
        }
        if self.workers == 0 {
            return Err(IsoError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Applies one `key=value` setting, using the CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .trim()
                .parse()
                .map_err(|_| IsoError::Config(format!("bad value {value:?} for {key}")))
        }
        fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
            value
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse(key, s))
                .collect()
        }
        match key {
            "kind" => self.kind = value.trim().parse()?,
            "n" => self.n = parse(key, value)?,
            "trials" => self.trials = parse(key, value)?,
            "seed" => self.master_seed = parse(key, value)?,
            "d-max" => self.d_max = parse(key, value)?,
            "d" => self.degrees = list(key, value)?,
            "eps" => self.eps = parse(key, value)?,
            "C" => self.c = parse(key, value)?,
            "bisection-samples" => self.bisection_samples = parse(key, value)?,
            "exact-cap" => self.exact_cap = parse(key, value)?,
            "omega-rule" => self.omega_rule = value.trim().parse()?,
            "falsifier" => self.falsifier = parse(key, value)?,
            "p-grid" => self.p_grid = list(key, value)?,
            "connected-only" => self.connected_only = parse(key, value)?,
            "large-set-samples" => self.large_set_samples = parse(key, value)?,
            "workers" => self.workers = parse(key, value)?,
            _ => return Err(IsoError::Config(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file: one setting per line, `#` comments.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                IsoError::Config(format!("line {}: expected key=value, got {line:?}", i + 1))
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }
}
