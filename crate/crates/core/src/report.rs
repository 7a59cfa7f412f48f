//! Verification reports and their text and JSON renderings.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub label: String,
    pub status: Status,
    /// Residue or counterexample when the item fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

impl Item {
    pub fn pass(label: impl Into<String>) -> Self {
        Item { label: label.into(), status: Status::Pass, residue: None }
    }

    pub fn fail(label: impl Into<String>, residue: impl Into<String>) -> Self {
        Item { label: label.into(), status: Status::Fail, residue: Some(residue.into()) }
    }

    /// Passes iff `residue` renders as `"0"`.
    pub fn residue(label: impl Into<String>, residue: impl fmt::Display) -> Self {
        let r = residue.to_string();
        if r == "0" {
            Item::pass(label)
        } else {
            Item::fail(label, r)
        }
    }

    pub fn check(label: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Item::pass(label)
        } else {
            Item::fail(label, detail())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub items: Vec<Item>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl SuiteReport {
    /// Items are sorted by label; the status is derived from them.
    pub fn new(suite: impl Into<String>, mut items: Vec<Item>) -> Self {
        items.sort_by(|a, b| a.label.cmp(&b.label));
        let status = Status::from_bool(items.iter().all(|i| i.status == Status::Pass));
        SuiteReport { suite: suite.into(), status, items, timing_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub status: Status,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(suites: Vec<SuiteReport>) -> Self {
        let status = Status::from_bool(suites.iter().all(SuiteReport::passed));
        Report { status, suites }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            write!(f, "[{}] {} ({} items)", s.status, s.suite, s.items.len())?;
            if let Some(ms) = s.timing_ms {
                write!(f, " {ms} ms")?;
            }
            writeln!(f)?;
            for i in &s.items {
                write!(f, "  {} {}", i.status, i.label)?;
                if let Some(r) = &i.residue {
                    write!(f, ": {r}")?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "overall: {}", self.status)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_and_roundtrip() {
        let r = Report::new(vec![SuiteReport::new("x", vec![Item::pass("b"), Item::fail("a", "1")])]);
        assert!(!r.passed());
        assert_eq!(r.suites[0].items[0].label, "a");
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_string().contains("  fail a: 1"));
    }
}
