//! Verdict records emitted by every check.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremiseSample {
    pub point: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PremiseSummary {
    pub n: usize,
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conclusion {
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_exact: Option<String>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub theorem: String,
    pub instance: String,
    pub premise: PremiseSummary,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premise_samples: Vec<PremiseSample>,
    pub runtime_ms: f64,
}

impl Report {
    pub fn new(theorem: impl Into<String>, instance: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            theorem: theorem.into(),
            instance: instance.into(),
            premise: PremiseSummary {
                n: 0,
                worst_margin: None,
            },
            conclusion: Conclusion {
                lhs: 0.0,
                rhs: 0.0,
                lhs_exact: None,
                rhs_exact: None,
                tol: 0.0,
                pass: false,
            },
            premise_samples: Vec::new(),
            runtime_ms: 0.0,
        }
    }

    pub fn with_premise(mut self, samples: Vec<PremiseSample>) -> Self {
        self.premise = PremiseSummary {
            n: samples.len(),
            worst_margin: samples.iter().map(|s| s.margin).reduce(f64::min),
        };
        self.premise_samples = samples;
        self
    }

    /// Conclusion decided in exact arithmetic.
    pub fn conclude_exact(mut self, lhs: &Rational, rhs: &Rational, pass: bool) -> Self {
        self.conclusion = Conclusion {
            lhs: rational::to_f64(lhs),
            rhs: rational::to_f64(rhs),
            lhs_exact: Some(rational::format(lhs)),
            rhs_exact: Some(rational::format(rhs)),
            tol: 0.0,
            pass,
        };
        self
    }

    pub fn conclude(mut self, lhs: f64, rhs: f64, tol: f64, pass: bool) -> Self {
        self.conclusion = Conclusion {
            lhs,
            rhs,
            lhs_exact: None,
            rhs_exact: None,
            tol,
            pass,
        };
        self
    }

    pub fn with_exact_text(mut self, lhs: String, rhs: String) -> Self {
        self.conclusion.lhs_exact = Some(lhs);
        self.conclusion.rhs_exact = Some(rhs);
        self
    }

    pub fn passed(&self) -> bool {
        self.conclusion.pass
    }

    /// Drops per-sample detail, keeping the summary.
    pub fn summary(mut self) -> Self {
        self.premise_samples.clear();
        self
    }

    pub fn timed(start: Instant, mut report: Report) -> Report {
        report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn json_shape() {
        let r = Report::new("demo", "one")
            .with_premise(vec![PremiseSample {
                point: 0.5,
                lhs: 1.0,
                rhs: 2.0,
                margin: 1.0,
            }])
            .conclude_exact(&frac(1, 2), &frac(1, 2), true)
            .summary();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["premise"]["n"], 1);
        assert_eq!(v["conclusion"]["lhs_exact"], "1/2");
        assert_eq!(v["conclusion"]["pass"], true);
        assert!(v.get("premise_samples").is_none());
    }
}
