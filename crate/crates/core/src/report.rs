//! Check reports shared by every axiom checker in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check could not be evaluated: a prerequisite was broken or no
    /// instance of the scheme could be formed on the given structure.
    Unsupported,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::Unsupported => write!(f, "unsupported"),
        }
    }
}

/// One named check. `checked` counts evaluated instance families and
/// `skipped` counts existential demands whose target sort was not declared;
/// skipped demands never fail a check, they are only recorded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub checked: usize,
    pub skipped: usize,
    pub witnesses: Vec<String>,
}

impl CheckEntry {
    pub fn pass(name: &str, checked: usize, skipped: usize) -> Self {
        CheckEntry {
            name: name.to_string(),
            status: CheckStatus::Pass,
            checked,
            skipped,
            witnesses: vec![],
        }
    }

    pub fn fail(name: &str, checked: usize, skipped: usize, witnesses: Vec<String>) -> Self {
        debug_assert!(!witnesses.is_empty(), "fail entries carry a witness");
        CheckEntry {
            name: name.to_string(),
            status: CheckStatus::Fail,
            checked,
            skipped,
            witnesses,
        }
    }

    pub fn unsupported(name: &str, reason: &str) -> Self {
        CheckEntry {
            name: name.to_string(),
            status: CheckStatus::Unsupported,
            checked: 0,
            skipped: 0,
            witnesses: vec![reason.to_string()],
        }
    }
}

/// A list of named check entries in a fixed, reproducible order.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AxiomReport {
    pub entries: Vec<CheckEntry>,
}

/// Collects failing witnesses for one check, capping how many are kept.
#[derive(Debug)]
pub struct WitnessLog {
    witnesses: Vec<String>,
    cap: usize,
    total: usize,
}

impl WitnessLog {
    pub fn new(cap: usize) -> Self {
        WitnessLog {
            witnesses: vec![],
            cap,
            total: 0,
        }
    }

    pub fn record(&mut self, witness: String) {
        self.total += 1;
        if self.witnesses.len() < self.cap {
            self.witnesses.push(witness);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn into_witnesses(self) -> Vec<String> {
        self.witnesses
    }
}

impl AxiomReport {
    pub fn new() -> Self {
        AxiomReport::default()
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    /// Close out one check from a witness log.
    pub fn finish(&mut self, name: &str, checked: usize, skipped: usize, log: WitnessLog) {
        if log.is_empty() {
            self.push(CheckEntry::pass(name, checked, skipped));
        } else {
            self.push(CheckEntry::fail(name, checked, skipped, log.into_witnesses()));
        }
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.entry(name).map(|e| e.status)
    }

    /// Every entry passed.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == CheckStatus::Pass)
    }

    pub fn has_fail(&self) -> bool {
        self.entries.iter().any(|e| e.status == CheckStatus::Fail)
    }

    pub fn merged(mut self, other: AxiomReport) -> AxiomReport {
        self.entries.extend(other.entries);
        self
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "[{}] {} (checked {}, skipped {})",
                e.status, e.name, e.checked, e.skipped
            )?;
            if !e.witnesses.is_empty() {
                write!(f, " witnesses: {}", e.witnesses.join("; "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
