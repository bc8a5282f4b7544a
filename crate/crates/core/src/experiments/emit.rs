//! JSON and CSV output.

use std::fmt;
use std::str::FromStr;

use super::ExperimentResult;
use crate::error::{IsoError, Result};

/// Header of the CSV aggregate table. Frequency rows fill `successes` and
/// `trials`; summary rows fill `count`, `min`, `max` and `mean`.
pub const CSV_HEADER: &str = "experiment,row,metric,successes,trials,count,min,max,mean";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = IsoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(IsoError::Config(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// Serializes a result. JSON keeps the full record; CSV only the aggregates.
pub fn emit(result: &ExperimentResult, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(result)
                .map_err(|e| IsoError::Invariant(format!("cannot serialize result: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => csv_aggregates(result),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_aggregates(result: &ExperimentResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| IsoError::Invariant(format!("cannot write csv: {e}"));
    w.write_record(CSV_HEADER.split(',')).map_err(fail)?;
    let kind = result.config.kind.name();
    for f in &result.aggregates.frequencies {
        let (s, t) = (f.successes.to_string(), f.trials.to_string());
        w.write_record([kind, "frequency", &f.metric, &s, &t, "", "", "", ""]).map_err(fail)?;
    }
    for s in &result.aggregates.summaries {
        let count = s.count.to_string();
        let (min, max, mean) = (opt(s.min), opt(s.max), opt(s.mean));
        w.write_record([kind, "summary", &s.metric, "", "", &count, &min, &max, &mean]).map_err(fail)?;
    }
    w.into_inner().map_err(|e| IsoError::Invariant(format!("cannot write csv: {e}")))
}

pub fn parse_json(bytes: &[u8]) -> Result<ExperimentResult> {
    serde_json::from_slice(bytes).map_err(|e| IsoError::Parse {
        line: e.line(),
        msg: format!("experiment result: {e}"),
    })
}

/// The JSON text with the wall-clock field removed, for comparing runs.
pub fn strip_wall_clock(json: &[u8]) -> Result<String> {
    let mut v: serde_json::Value = serde_json::from_slice(json)
        .map_err(|e| IsoError::Parse { line: e.line(), msg: e.to_string() })?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_clock_ms");
    }
    serde_json::to_string_pretty(&v).map_err(|e| IsoError::Invariant(e.to_string()))
}
