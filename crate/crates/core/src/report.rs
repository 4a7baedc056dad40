//! Stage-by-stage results of a command, printable as a table or as JSON.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::io::json;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    /// Upper bound the value was compared against, when there is one.
    pub threshold: Option<f64>,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `value ≤ threshold`. NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value: Some(value),
            threshold: Some(threshold),
            passed: value <= threshold,
            detail: None,
        }
    }

    pub fn condition(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            value: None,
            threshold: None,
            passed,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stage {
    pub name: String,
    pub checks: Vec<Check>,
    pub info: Vec<(String, String)>,
}

impl Stage {
    pub fn new(name: impl Into<String>) -> Self {
        Stage {
            name: name.into(),
            ..Stage::default()
        }
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn info(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.info.push((key.into(), value.to_string()));
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub stages: Vec<Stage>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            stages: Vec::new(),
        }
    }

    pub fn push(&mut self, stage: Stage) {
        self.stages.push(stage);
    }

    pub fn passed(&self) -> bool {
        self.stages.iter().all(Stage::passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = (&Stage, &Check)> {
        self.stages
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s, c)))
            .filter(|(_, c)| !c.passed)
    }

    pub fn find(&self, stage: &str, check: &str) -> Option<&Check> {
        self.stages
            .iter()
            .filter(|s| s.name == stage)
            .flat_map(|s| &s.checks)
            .find(|c| c.name == check)
    }

    pub fn to_value(&self) -> Value {
        let number = |x: Option<f64>| match x {
            Some(v) if v.is_finite() => json::real(v),
            _ => Value::Null,
        };
        let stages = self
            .stages
            .iter()
            .map(|s| {
                let checks = s
                    .checks
                    .iter()
                    .map(|c| {
                        json::object([
                            ("name", Value::from(c.name.as_str())),
                            ("value", number(c.value)),
                            ("threshold", number(c.threshold)),
                            ("passed", Value::from(c.passed)),
                            (
                                "detail",
                                c.detail.as_deref().map_or(Value::Null, Value::from),
                            ),
                        ])
                    })
                    .collect();
                let info: Map<_, _> = s
                    .info
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                    .collect();
                json::object([
                    ("name", Value::from(s.name.as_str())),
                    ("passed", Value::from(s.passed())),
                    ("checks", Value::Array(checks)),
                    ("info", Value::Object(info)),
                ])
            })
            .collect();
        json::object([
            ("command", Value::from(self.command.as_str())),
            ("passed", Value::from(self.passed())),
            ("stages", Value::Array(stages)),
        ])
    }

    pub fn to_json(&self) -> String {
        json::to_string(&self.to_value())
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{}: {verdict}", self.command);
        for stage in &self.stages {
            let _ = writeln!(out, "[{}]", stage.name);
            for (k, v) in &stage.info {
                let _ = writeln!(out, "  {k:<28} {v}");
            }
            for c in &stage.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                let mut line = format!("  {status} {:<23}", c.name);
                if let Some(v) = c.value {
                    let _ = write!(line, " {v:.3e}");
                }
                if let Some(t) = c.threshold {
                    let _ = write!(line, " (limit {t:.1e})");
                }
                if let Some(d) = &c.detail {
                    let _ = write!(line, " {d}");
                }
                let _ = writeln!(out, "{}", line.trim_end());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("validate");
        let mut s = Stage::new("validation");
        s.info("dof", 2);
        s.check(Check::at_most("ccr_residual", 1e-14, 1e-10));
        s.check(Check::at_most("asymmetry", f64::NAN, 1e-10));
        r.push(s);
        r
    }

    #[test]
    fn verdicts() {
        let r = sample();
        assert!(!r.passed());
        assert_eq!(r.failed_checks().count(), 1);
        assert!(r.find("validation", "ccr_residual").unwrap().passed);
        assert!(Report::new("empty").passed());
    }

    #[test]
    fn renderings() {
        let r = sample();
        let human = r.to_human();
        assert!(human.starts_with("validate: FAIL\n"));
        assert!(human.contains("FAIL asymmetry"));
        let v = json::parse(&r.to_json()).unwrap();
        assert_eq!(v["passed"], false);
        assert_eq!(v["stages"][0]["checks"][1]["value"], Value::Null);
        assert_eq!(v["stages"][0]["info"]["dof"], "2");
    }
}
