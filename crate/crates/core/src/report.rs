//! Pass/fail records for identity checks.

use std::fmt;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Size of the discrepancy found by a check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    /// Exact equality held (or the failure had no meaningful size).
    Exact,
    Value(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    /// The identity being checked, written out.
    pub identity: String,
    pub status: Status,
    pub residual: Residual,
    pub elapsed: Duration,
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Outcome of a check body before timing is attached.
pub struct Outcome {
    pub status: Status,
    pub residual: Residual,
    pub detail: Option<String>,
}

impl Outcome {
    pub fn exact(ok: bool, detail: impl Into<Option<String>>) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Residual::Exact,
            detail: detail.into(),
        }
    }

    /// Passes when `residual ≤ bound`.
    pub fn within(residual: f64, bound: f64) -> Self {
        let ok = residual <= bound;
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Residual::Value(residual),
            detail: if ok {
                None
            } else {
                Some(format!("residual {residual:e} exceeds {bound:e}"))
            },
        }
    }

    pub fn skipped(why: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            residual: Residual::Exact,
            detail: Some(why.into()),
        }
    }

    pub fn error(e: &Error) -> Self {
        Outcome {
            status: Status::Fail,
            residual: Residual::Exact,
            detail: Some(e.to_string()),
        }
    }
}

/// Runs `body` and records its outcome; errors become failures.
pub fn run_check(
    name: impl Into<String>,
    identity: impl Into<String>,
    body: impl FnOnce() -> Result<Outcome, Error>,
) -> CheckRecord {
    let start = Instant::now();
    let out = body().unwrap_or_else(|e| Outcome::error(&e));
    CheckRecord {
        name: name.into(),
        identity: identity.into(),
        status: out.status,
        residual: out.residual,
        elapsed: start.elapsed(),
        detail: out.detail,
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_checks(checks: Vec<CheckRecord>) -> Self {
        let mut r = VerificationReport { checks };
        r.sort();
        r
    }

    pub fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
        self.sort();
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.sort();
    }

    fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn checks(&self) -> &[CheckRecord] {
        &self.checks
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn status(&self) -> Status {
        if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn total_elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }

    /// JSON array of check records; timings only when `timings` is set so
    /// that exact runs serialize byte-identically.
    pub fn checks_json(&self, timings: bool) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "name": c.name,
                        "identity": c.identity,
                        "status": c.status.as_str(),
                        "residual": match c.residual {
                            Residual::Exact => Value::String("exact".into()),
                            Residual::Value(x) => json!(x),
                        },
                    });
                    if let Some(d) = &c.detail {
                        v["detail"] = Value::String(d.clone());
                    }
                    if timings {
                        v["elapsed"] = json!(c.elapsed.as_secs_f64());
                    }
                    v
                })
                .collect(),
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let res = match c.residual {
                Residual::Exact => "exact".to_string(),
                Residual::Value(x) => format!("{x:.3e}"),
            };
            write!(
                f,
                "[{:<7}] {:<48} {:>10}  {}",
                c.status.as_str(),
                c.name,
                res,
                c.identity
            )?;
            if let Some(d) = &c.detail {
                if c.status != Status::Pass {
                    write!(f, "  ({d})")?;
                }
            }
            writeln!(f)?;
        }
        let n_fail = self.failures().count();
        write!(
            f,
            "{} checks, {} failed: {}",
            self.checks.len(),
            n_fail,
            self.status().as_str()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_sorted_and_aggregates() {
        let mut r = VerificationReport::new();
        r.push(run_check("b", "x = x", || Ok(Outcome::exact(true, None))));
        r.push(run_check("a", "y = y", || Ok(Outcome::within(1e-3, 1e-8))));
        r.push(run_check("c", "z", || Err(Error::EmptyPolynomial)));
        let names: Vec<_> = r.checks().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 2);
        let j = r.checks_json(false);
        assert_eq!(j[1]["residual"], "exact");
        assert!(j[0].get("elapsed").is_none());
        assert!(r.checks_json(true)[0].get("elapsed").is_some());
    }

    #[test]
    fn skipped_checks_do_not_fail_the_report() {
        let r = VerificationReport::from_checks(vec![run_check("s", "n/a", || {
            Ok(Outcome::skipped("outside window"))
        })]);
        assert!(r.passed());
    }
}
