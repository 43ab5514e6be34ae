//! Named verification results and report emission.
//!
//! Every identity check produces a [`CheckReport`]; a suite run produces a
//! [`SuiteReport`] that serializes to the stable JSON schema
//! `{"suite", "params", "checks": [{"name", "anchor", "residual", "tol",
//! "pass"}], "pass"}`. Ordering is registration order, so emitted reports
//! are byte-stable across runs.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Residual of a single check: either a floating-point deviation or the
/// statement that the identity reduced to the exact zero element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Value(f64),
    /// Serialized as the string `"exact-zero"`.
    Exact(ExactZero),
}

/// Marker for exact (coefficient-level) zero results.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExactZero {
    #[serde(rename = "exact-zero")]
    ExactZero,
}

impl Residual {
    pub fn exact_zero() -> Self {
        Residual::Exact(ExactZero::ExactZero)
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Residual::Value(v) => Some(*v),
            Residual::Exact(_) => None,
        }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residual::Value(v) => write!(f, "{v:.3e}"),
            Residual::Exact(_) => write!(f, "exact-zero"),
        }
    }
}

/// What a check asserts about its residual.
///
/// Almost all checks require the residual to stay below the tolerance.
/// Negative controls (deliberately broken inputs) require it to stay above;
/// they guard the suites against sign and convention drift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    #[default]
    Below,
    Above,
}

/// A single named verification result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Label of the identity in the crate's identity catalog (see README).
    pub anchor: String,
    pub residual: Residual,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "is_default_expect")]
    pub expect: Expect,
    /// Wall time of the check in milliseconds. Not serialized: reports must
    /// be byte-stable across runs.
    #[serde(skip)]
    pub wall_ms: f64,
}

fn is_default_expect(e: &Expect) -> bool {
    *e == Expect::Below
}

impl PartialEq for CheckReport {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.anchor == other.anchor
            && self.residual == other.residual
            && self.tol == other.tol
            && self.pass == other.pass
            && self.expect == other.expect
    }
}

impl CheckReport {
    /// Residual check: passes iff `residual <= tol`.
    pub fn residual(name: &str, anchor: &str, residual: f64, tol: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            residual: Residual::Value(residual),
            tol,
            pass: residual <= tol,
            expect: Expect::Below,
            wall_ms: 0.0,
        }
    }

    /// Exact check: `zero` states that the expression reduced to the zero
    /// element of the exact algebra.
    pub fn exact(name: &str, anchor: &str, zero: bool) -> Self {
        CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            residual: if zero {
                Residual::exact_zero()
            } else {
                Residual::Value(1.0)
            },
            tol: 0.0,
            pass: zero,
            expect: Expect::Below,
            wall_ms: 0.0,
        }
    }

    /// Negative control: passes iff the measured residual stays *above*
    /// `threshold` (the broken input must be detected).
    pub fn control(name: &str, anchor: &str, residual: f64, threshold: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            residual: Residual::Value(residual),
            tol: threshold,
            pass: residual > threshold,
            expect: Expect::Above,
            wall_ms: 0.0,
        }
    }

    pub fn with_wall_ms(mut self, ms: f64) -> Self {
        self.wall_ms = ms;
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        let rel = match self.expect {
            Expect::Below => "<=",
            Expect::Above => "> ",
        };
        write!(
            f,
            "{verdict}  {:<38} [{:<9}] residual {:>12} {rel} {:.1e}",
            self.name, self.anchor, self.residual.to_string(), self.tol
        )
    }
}

/// Aggregated result of one suite run at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// Echo of the parameters the suite ran with, sorted by key.
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, params: BTreeMap<String, String>, checks: Vec<CheckReport>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.to_string(),
            params,
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {}", self.suite));
        if !self.params.is_empty() {
            let kv: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("  ({})", kv.join(", ")));
        }
        out.push('\n');
        for c in &self.checks {
            out.push_str(&format!("  {c}\n"));
        }
        out.push_str(&format!(
            "  => {}\n",
            if self.pass { "ALL PASS" } else { "FAILED" }
        ));
        out
    }
}

/// Render a list of suite reports in the requested format.
pub fn emit(reports: &[SuiteReport], format: Format) -> String {
    match format {
        Format::Json => {
            serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
        }
        Format::Text => reports.iter().map(|r| r.to_text()).collect::<String>(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected json|text)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_conjunction() {
        let ok = CheckReport::residual("a", "x", 1e-12, 1e-10);
        let bad = CheckReport::residual("b", "x", 1e-3, 1e-10);
        let r = SuiteReport::new("s", BTreeMap::new(), vec![ok.clone()]);
        assert!(r.pass);
        let r = SuiteReport::new("s", BTreeMap::new(), vec![ok, bad]);
        assert!(!r.pass);
    }

    #[test]
    fn empty_report_passes() {
        let r = SuiteReport::new("s", BTreeMap::new(), vec![]);
        assert!(r.pass);
        let json = r.to_json();
        assert!(json.contains("\"checks\": []"));
        assert!(json.contains("\"pass\": true"));
    }

    #[test]
    fn json_round_trip() {
        let checks = vec![
            CheckReport::residual("res", "1.8", 3.5e-12, 1e-10),
            CheckReport::exact("ex", "C2", true),
            CheckReport::control("ctl", "C1", 0.2, 1e-3),
        ];
        let mut params = BTreeMap::new();
        params.insert("q".to_string(), "1.3".to_string());
        let r = SuiteReport::new("theorem1", params, checks);
        let back = SuiteReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn exact_zero_serializes_as_string() {
        let c = CheckReport::exact("ex", "C2", true);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"exact-zero\""));
    }

    #[test]
    fn control_pass_means_detected() {
        let c = CheckReport::control("ctl", "C1", 0.5, 1e-3);
        assert!(c.pass);
        let c = CheckReport::control("ctl", "C1", 1e-9, 1e-3);
        assert!(!c.pass);
    }
}
