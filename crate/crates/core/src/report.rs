use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One failed or unverifiable check, keyed by the instance it concerns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub check: String,
    pub key: String,
    pub detail: String,
}

/// Aggregated outcome of a family of consistency checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// Number of passing instances per check.
    pub passed: BTreeMap<String, u64>,
    pub failures: Vec<Finding>,
    pub unverifiable: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, check: &str) {
        *self.passed.entry(check.to_string()).or_insert(0) += 1;
    }

    pub fn fail(&mut self, check: &str, key: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Finding {
            check: check.to_string(),
            key: key.into(),
            detail: detail.into(),
        });
    }

    pub fn unverifiable(&mut self, check: &str, key: impl Into<String>, detail: impl Into<String>) {
        self.unverifiable.push(Finding {
            check: check.to_string(),
            key: key.into(),
            detail: detail.into(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        for (k, v) in other.passed {
            *self.passed.entry(k).or_insert(0) += v;
        }
        self.failures.extend(other.failures);
        self.unverifiable.extend(other.unverifiable);
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed_count(&self, check: &str) -> u64 {
        self.passed.get(check).copied().unwrap_or(0)
    }
}
