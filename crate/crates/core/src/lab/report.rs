//! Sweep reports and replayable witnesses.

use std::fmt::Write as _;

/// `key=value` lines identifying the most adverse sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Witness {
    pub entries: Vec<(String, String)>,
}

impl Witness {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub samples: u64,
    /// Samples with `gap < −tolerance`.
    pub violations: u64,
    /// Smallest `rhs − lhs` seen.
    pub min_gap: f64,
    pub witness: Witness,
    /// Description of the tolerance rule.
    pub tolerance: String,
    /// Extra diagnostics (regime counts, constants, per-family counts).
    pub notes: Vec<(String, String)>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.samples > 0
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `name,samples,violations,min_gap,witness_path`.
    pub fn csv_row(&self, witness_path: &str) -> String {
        format!(
            "{},{},{},{:e},{}",
            self.name, self.samples, self.violations, self.min_gap, witness_path
        )
    }

    pub const CSV_HEADER: &'static str = "name,samples,violations,min_gap,witness";
}
