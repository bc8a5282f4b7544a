//! Threshold edge counts around the minimum-degree hitting times, and the
//! constant needed for bisections to fall below `(1/2 + ε)δ`.
//!
//! All logarithms are natural.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, IsoError, Result};
use crate::process::pair_count;

/// How the slack term ω(n) is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[derive(Default)]
pub enum OmegaRule {
    /// ω = ln ln r, the largest value allowed for general `d`.
    #[default]
    LogLogR,
    /// ω = ln ln ln n, the fixed-`d` rule.
    LogLogLogN,
    Explicit(f64),
}


impl FromStr for OmegaRule {
    type Err = IsoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loglogr" => Ok(OmegaRule::LogLogR),
            "logloglogn" => Ok(OmegaRule::LogLogLogN),
            _ => {
                let value = s
                    .strip_prefix("explicit:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        IsoError::Config(format!(
                            "omega rule {s:?}: expected loglogr, logloglogn or explicit:<value>"
                        ))
                    })?;
                Ok(OmegaRule::Explicit(value))
            }
        }
    }
}

impl fmt::Display for OmegaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaRule::LogLogR => f.write_str("loglogr"),
            OmegaRule::LogLogLogN => f.write_str("logloglogn"),
            OmegaRule::Explicit(v) => write!(f, "explicit:{v}"),
        }
    }
}

/// `r = ln(n) / d`.
pub fn r_of(n: usize, d: usize) -> f64 {
    (n as f64).ln() / d as f64
}

/// ω = ln ln r, defined only for `r > e`.
pub fn default_omega(n: usize, d: usize) -> Result<f64> {
    if n < 2 || d == 0 {
        return Err(domain(format!("need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    let r = r_of(n, d);
    if r <= std::f64::consts::E {
        return Err(domain(format!(
            "r = ln(n)/d = {r:.4} <= e for n = {n}, d = {d}; ln ln r is not a valid slack here, \
             supply omega explicitly"
        )));
    }
    Ok(r.ln().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub n: usize,
    pub d: usize,
    pub omega: f64,
    pub r: f64,
}

impl ThresholdParams {
    pub fn new(n: usize, d: usize, rule: OmegaRule) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("thresholds need n >= 2, got {n}")));
        }
        if d == 0 {
            return Err(domain("target minimum degree d must be at least 1"));
        }
        let r = r_of(n, d);
        let omega = match rule {
            OmegaRule::LogLogR => default_omega(n, d)?,
            OmegaRule::LogLogLogN => {
                let lll = (n as f64).ln().ln().ln();
                if !(lll > 0.0) {
                    return Err(domain(format!("ln ln ln n = {lll:.4} is not positive for n = {n}")));
                }
                lll
            }
            OmegaRule::Explicit(w) => {
                if !(w > 0.0) || !w.is_finite() {
                    return Err(domain(format!("omega must be a positive number, got {w}")));
                }
                if r > std::f64::consts::E && w > r.ln().ln() {
                    return Err(domain(format!(
                        "omega = {w} exceeds ln ln r = {:.6} for n = {n}, d = {d}",
                        r.ln().ln()
                    )));
                }
                w
            }
        };
        Ok(Self { n, d, omega, r })
    }

    fn bracket(&self, sign: f64) -> f64 {
        let n = self.n as f64;
        n.ln() + (self.d as f64 - 1.0) * self.r.ln() + sign * (2.0 * self.d as f64 + self.omega)
    }

    /// Real-valued `m_d`.
    pub fn lower_real(&self) -> f64 {
        pair_count(self.n) as f64 * self.bracket(-1.0) / self.n as f64
    }

    /// Real-valued `M_d`.
    pub fn upper_real(&self) -> f64 {
        pair_count(self.n) as f64 * self.bracket(1.0) / self.n as f64
    }

    fn to_edges(&self, sign: f64, name: &str) -> Result<u64> {
        let bracket = self.bracket(sign);
        if !(bracket > 0.0) {
            return Err(domain(format!(
                "{name}: ln n + (d-1) ln r {} (2d + omega) = {bracket:.4} <= 0 for n = {}, d = {}, \
                 omega = {:.4}; the threshold formula is outside its regime",
                if sign < 0.0 { "-" } else { "+" },
                self.n,
                self.d,
                self.omega
            )));
        }
        let total = pair_count(self.n);
        let value = total as f64 * bracket / self.n as f64;
        Ok((value.round().max(0.0) as u64).min(total))
    }

    /// `m_d` rounded to the nearest edge count and clamped to `[0, N]`.
    pub fn lower_threshold(&self) -> Result<u64> {
        self.to_edges(-1.0, "m_d")
    }

    /// `M_d` rounded to the nearest edge count and clamped to `[0, N]`.
    pub fn upper_threshold(&self) -> Result<u64> {
        self.to_edges(1.0, "M_d")
    }
}

/// Fixed-`d` thresholds with `ln ln n` in place of `ln r` and slack `±ω`,
/// real-valued.
pub fn fixed_d_thresholds(n: usize, d: usize, omega: f64) -> (f64, f64) {
    let nf = n as f64;
    let base = nf.ln() + (d as f64 - 1.0) * nf.ln().ln();
    let scale = pair_count(n) as f64 / nf;
    (scale * (base - omega), scale * (base + omega))
}

/// Lower bound on `C` for `p = C ln n / n` so that bisection ratios fall
/// below `(1/2 + ε)δ`: `(1 + 2ε) / (2ε - ln(1 + 2ε))`. Any strictly larger
/// `C` is admissible.
pub fn c_epsilon(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(domain(format!("epsilon must lie in (0, 1/2], got {eps}")));
    }
    let x = 2.0 * eps;
    Ok((1.0 + x) / (x - x.ln_1p()))
}

/// Which edge count stands in for `p = C ln n / n` in G(n, M).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeCountConvention {
    /// `M = C n ln n`.
    Literal,
    /// `M = p · n(n-1)/2 ≈ C n ln n / 2`.
    FromProbability,
}

pub fn theorem2_edge_count(n: usize, c: f64, convention: EdgeCountConvention) -> u64 {
    let nf = n as f64;
    let m = match convention {
        EdgeCountConvention::Literal => c * nf * nf.ln(),
        EdgeCountConvention::FromProbability => c * nf.ln() / nf * pair_count(n) as f64,
    };
    (m.round().max(0.0) as u64).min(pair_count(n))
}

/// The split `ε1 = ε2 = x` with `ε = (ε1 + ε2/2) / (1 - ε2)`, i.e.
/// `x = ε / (3/2 + ε)`.
pub fn degree_slack_for(eps: f64) -> f64 {
    eps / (1.5 + eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values_n1000_d2() {
        let p = ThresholdParams::new(1000, 2, OmegaRule::LogLogR).unwrap();
        assert!((p.r - 3.453_877_639_491_069).abs() < 1e-12);
        // evaluated independently: 499.5 * (ln 1000 + ln r - 4 - ln ln r)
        let r: f64 = 1000f64.ln() / 2.0;
        let w = r.ln().ln();
        let lower = 499.5 * (1000f64.ln() + r.ln() - 4.0 - w);
        let upper = 499.5 * (1000f64.ln() + r.ln() + 4.0 + w);
        assert_eq!(p.lower_threshold().unwrap(), lower.round() as u64);
        assert_eq!(p.upper_threshold().unwrap(), upper.round() as u64);
        assert!((p.lower_threshold().unwrap() as i64 - 1964).abs() <= 1);
        assert!((p.upper_threshold().unwrap() as i64 - 6175).abs() <= 1);
    }

    #[test]
    fn d1_has_no_log_r_term() {
        let p = ThresholdParams::new(1000, 1, OmegaRule::Explicit(0.5)).unwrap();
        let expected = 499.5 * (1000f64.ln() - 2.0 - 0.5);
        assert!((p.lower_real() - expected).abs() < 1e-9);
    }

    #[test]
    fn gap_between_thresholds() {
        for n in [100usize, 1000, 10_000, 100_000] {
            for d in 1..=3 {
                let Ok(p) = ThresholdParams::new(n, d, OmegaRule::LogLogR) else { continue };
                let (Ok(lo), Ok(hi)) = (p.lower_threshold(), p.upper_threshold()) else { continue };
                assert!(lo < hi);
                let gap = (n as f64 - 1.0) * (2.0 * d as f64 + p.omega);
                assert!(((hi - lo) as f64 - gap).abs() <= 1.0);
                assert!(hi <= pair_count(n));
            }
        }
    }

    #[test]
    fn nonpositive_bracket_is_an_error() {
        // n = 20, d = 2: ln 20 + ln 1.5 ≈ 3.4 < 4 + omega
        let p = ThresholdParams::new(20, 2, OmegaRule::Explicit(1.0)).unwrap();
        let err = p.lower_threshold().unwrap_err().to_string();
        assert!(err.contains("m_d") && err.contains("regime"), "{err}");
        assert!(p.upper_threshold().is_ok());
    }

    #[test]
    fn omega_rules() {
        // r = e^e gives ln ln r = 1
        let n = std::f64::consts::E.exp().exp();
        let r = n.ln();
        assert!((r.ln().ln() - 1.0).abs() < 1e-12);
        assert!((default_omega(1_000_000, 1).unwrap() - (1e6f64).ln().ln().ln()).abs() < 1e-12);
        // r <= e
        assert!(default_omega(1000, 3).is_err());
        assert!(ThresholdParams::new(1000, 3, OmegaRule::LogLogR).is_err());
        assert!(ThresholdParams::new(1000, 3, OmegaRule::Explicit(0.3)).is_ok());
        assert!(ThresholdParams::new(1000, 2, OmegaRule::Explicit(5.0)).is_err());
        assert!(ThresholdParams::new(1000, 2, OmegaRule::Explicit(-1.0)).is_err());
        for n in [100, 10_000, 1_000_000] {
            if let Ok(w) = default_omega(n, 1) {
                assert!(w > 0.0);
            }
        }
    }

    #[test]
    fn omega_rule_parsing() {
        assert_eq!("loglogr".parse::<OmegaRule>().unwrap(), OmegaRule::LogLogR);
        assert_eq!("logloglogn".parse::<OmegaRule>().unwrap(), OmegaRule::LogLogLogN);
        assert_eq!("explicit:0.25".parse::<OmegaRule>().unwrap(), OmegaRule::Explicit(0.25));
        assert!("explicit:x".parse::<OmegaRule>().is_err());
        assert_eq!(OmegaRule::Explicit(0.25).to_string(), "explicit:0.25");
    }

    #[test]
    fn c_epsilon_values() {
        let half = c_epsilon(0.5).unwrap();
        assert!((half - 2.0 / (1.0 - 2f64.ln())).abs() < 1e-12);
        assert!((half - 6.5177).abs() < 1e-4);
        let quarter = c_epsilon(0.25).unwrap();
        assert!((quarter - 1.5 / (0.5 - 1.5f64.ln())).abs() < 1e-12);
        assert!((quarter - 15.87).abs() < 0.01);
        assert!(c_epsilon(0.0).is_err());
        assert!(c_epsilon(0.6).is_err());
        for i in 1..500 {
            let e = i as f64 / 1000.0;
            assert!(2.0 * e - (2.0 * e).ln_1p() > 0.0);
            assert!(c_epsilon(e).unwrap().is_finite());
        }
    }

    #[test]
    fn edge_count_conventions() {
        let lit = theorem2_edge_count(1000, 2.0, EdgeCountConvention::Literal);
        let prob = theorem2_edge_count(1000, 2.0, EdgeCountConvention::FromProbability);
        assert_eq!(lit, (2000.0 * 1000f64.ln()).round() as u64);
        assert!((lit as f64 / prob as f64 - 2.0 * 1000.0 / 999.0).abs() < 1e-3);
    }

    #[test]
    fn degree_slack_solves_combination() {
        for eps in [0.05, 0.25, 0.49] {
            let x = degree_slack_for(eps);
            assert!(((x + x / 2.0) / (1.0 - x) - eps).abs() < 1e-12);
        }
    }
}
