//! Verification reports: one record per checked clause.
//!
//! Text form, one line per check:
//! `PASS u_to_v.L.1 <= 2 actual 1` or
//! `FAIL diameter == 7 actual inf offenders 1-5`.
//! Vertex ids in offenders are 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "relation", content = "value", rename_all = "snake_case")]
pub enum Expect {
    Equal(u64),
    AtMost(u64),
    AtLeast(u64),
    /// The pair must be disconnected.
    Infinite,
}

impl Expect {
    /// `None` is an infinite distance.
    pub fn holds(self, actual: Option<u64>) -> bool {
        match (self, actual) {
            (Expect::Equal(e), Some(a)) => a == e,
            (Expect::AtMost(e), Some(a)) => a <= e,
            (Expect::AtLeast(e), Some(a)) => a >= e,
            (Expect::AtLeast(_), None) | (Expect::Infinite, None) => true,
            (Expect::Infinite, Some(_)) => false,
            (_, None) => false,
        }
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expect::Equal(v) => write!(f, "== {v}"),
            Expect::AtMost(v) => write!(f, "<= {v}"),
            Expect::AtLeast(v) => write!(f, ">= {v}"),
            Expect::Infinite => f.write_str("== inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: Expect,
    /// Worst observation over the clause (max for `<=`, min for `>=`, first
    /// mismatch for `==`); `None` is infinity.
    pub actual: Option<u64>,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offenders: Vec<(VertexId, VertexId)>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok { "PASS" } else { "FAIL" };
        let actual = self
            .actual
            .map_or_else(|| "inf".to_string(), |a| a.to_string());
        write!(
            f,
            "{status} {} {} actual {actual}",
            self.name, self.expected
        )?;
        if !self.offenders.is_empty() {
            f.write_str(" offenders")?;
            for (s, t) in &self.offenders {
                write!(f, " {s}-{t}")?;
            }
        }
        Ok(())
    }
}

/// Accumulates one clause over many vertex pairs.
pub(crate) struct Tally {
    name: String,
    expected: Expect,
    actual: Option<Option<u64>>,
    offenders: Vec<(VertexId, VertexId)>,
}

const MAX_OFFENDERS: usize = 8;

impl Tally {
    pub(crate) fn new(name: impl Into<String>, expected: Expect) -> Self {
        Self {
            name: name.into(),
            expected,
            actual: None,
            offenders: Vec::new(),
        }
    }

    /// Records `dist(s, t)`; `None` is infinity.
    pub(crate) fn observe(&mut self, s: VertexId, t: VertexId, dist: Option<u64>) {
        let ok = self.expected.holds(dist);
        if !ok && self.offenders.len() < MAX_OFFENDERS {
            self.offenders.push((s + 1, t + 1));
        }
        let worse = match (self.actual, self.expected) {
            (None, _) => true,
            (Some(prev), Expect::Equal(_) | Expect::Infinite) => self.expected.holds(prev) && !ok,
            (Some(prev), Expect::AtMost(_)) => match (prev, dist) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(a), Some(b)) => b > a,
            },
            (Some(prev), Expect::AtLeast(_)) => match (prev, dist) {
                (_, None) => false,
                (None, Some(_)) => true,
                (Some(a), Some(b)) => b < a,
            },
        };
        if worse {
            self.actual = Some(dist);
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.actual.is_none()
    }

    pub(crate) fn finish(self) -> Check {
        let actual = self.actual.flatten();
        let ok = self.offenders.is_empty() && self.actual.is_some_and(|a| self.expected.holds(a));
        Check {
            name: self.name,
            expected: self.expected,
            actual,
            ok,
            offenders: self.offenders,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.ok);
        Self { passed, checks }
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.checks.extend(other.checks);
        Self::new(self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} {} checks, {failed} failed\n",
            if self.passed { "PASSED" } else { "FAILED" },
            self.checks.len()
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
