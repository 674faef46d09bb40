//! Outcome of a named verification suite.

use std::fmt;

/// How many failures are kept verbatim; the count is always exact.
const KEPT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Records one check; `detail` is only evaluated on failure.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(detail());
        }
    }

    pub fn fail(&mut self, detail: String) {
        self.failed += 1;
        if self.failures.len() < KEPT {
            self.failures.push(detail);
        }
    }

    pub fn merge(&mut self, other: CheckResult) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} checked", self.name, self.checked)?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        write!(f, ")")?;
        for d in &self.failures {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}
