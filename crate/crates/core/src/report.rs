//! Pass/fail records shared by every verification routine.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Preconditions of the check did not hold for this input.
    Skipped,
}

/// Outcome of one named check, with the counterexamples it found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    /// Number of individual instances examined.
    pub checked: usize,
    pub detail: String,
    pub counterexamples: Vec<String>,
}

/// Cap on the counterexamples retained per check.
const MAX_COUNTEREXAMPLES: usize = 20;

impl CheckReport {
    pub fn new(name: impl Into<String>) -> CheckReport {
        CheckReport {
            name: name.into(),
            status: Status::Pass,
            checked: 0,
            detail: String::new(),
            counterexamples: Vec::new(),
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> CheckReport {
        CheckReport { status: Status::Skipped, detail: why.into(), ..CheckReport::new(name) }
    }

    /// Records one instance; `ok == false` marks the report failed.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.status = Status::Fail;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    pub fn fail(&mut self, why: impl Into<String>) {
        self.record(false, || why.into());
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> CheckReport {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Folds another report's instances into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        if other.status == Status::Fail {
            self.status = Status::Fail;
            let room = MAX_COUNTEREXAMPLES.saturating_sub(self.counterexamples.len());
            self.counterexamples.extend(other.counterexamples.into_iter().take(room));
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "[{tag}] {} ({} checked)", self.name, self.checked)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        for c in &self.counterexamples {
            write!(f, "\n    counterexample: {c}")?;
        }
        Ok(())
    }
}
