//! Witnessed pass/fail records for law checks.

use serde_json::{json, Value};

use crate::error::Result;
use crate::morphism::Morphism;
use crate::scalar::Scalar;

/// Both sides of a failing equation, serialized.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawRecord {
    pub check: String,
    /// The equation or diagram being checked, in words.
    pub diagram: String,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl LawRecord {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "diagram": self.diagram,
            "passed": self.passed,
        });
        if let Some(w) = &self.witness {
            v["witness"] = json!({ "lhs": w.lhs, "rhs": w.rhs });
        }
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Verdict {
    pub records: Vec<LawRecord>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn first_failure(&self) -> Option<&LawRecord> {
        self.failures().next()
    }

    pub fn find(&self, check: &str) -> Option<&LawRecord> {
        self.records.iter().find(|r| r.check == check)
    }

    /// Whether every record whose name starts with `prefix` passed (and at least one exists).
    pub fn passed_prefix(&self, prefix: &str) -> bool {
        let mut any = false;
        for r in self.records.iter().filter(|r| r.check.starts_with(prefix)) {
            any = true;
            if !r.passed {
                return false;
            }
        }
        any
    }

    /// Records `lhs = rhs`. Errors while building either side count as failures.
    pub fn check_eq<S: Scalar>(
        &mut self,
        check: impl Into<String>,
        diagram: impl Into<String>,
        lhs: Result<Morphism<S>>,
        rhs: Result<Morphism<S>>,
    ) -> bool {
        let (passed, witness, note) = match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => (true, None, None),
            (Ok(l), Ok(r)) => (
                false,
                Some(Witness {
                    lhs: l.to_json(),
                    rhs: r.to_json(),
                }),
                None,
            ),
            (Err(e), _) | (_, Err(e)) => (false, None, Some(e.to_string())),
        };
        self.records.push(LawRecord {
            check: check.into(),
            diagram: diagram.into(),
            passed,
            witness,
            note,
        });
        passed
    }

    pub fn check_bool(
        &mut self,
        check: impl Into<String>,
        diagram: impl Into<String>,
        passed: bool,
        note: Option<String>,
    ) -> bool {
        self.records.push(LawRecord {
            check: check.into(),
            diagram: diagram.into(),
            passed,
            witness: None,
            note,
        });
        passed
    }

    pub fn check_values(
        &mut self,
        check: impl Into<String>,
        diagram: impl Into<String>,
        lhs: Value,
        rhs: Value,
    ) -> bool {
        let passed = lhs == rhs;
        self.records.push(LawRecord {
            check: check.into(),
            diagram: diagram.into(),
            passed,
            witness: (!passed).then_some(Witness { lhs, rhs }),
            note: None,
        });
        passed
    }

    pub fn extend(&mut self, other: Verdict) {
        self.records.extend(other.records);
    }

    /// Appends `other` with every check name prefixed by `prefix/`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Verdict) {
        self.records.extend(other.records.into_iter().map(|mut r| {
            r.check = format!("{prefix}/{}", r.check);
            r
        }));
    }
}
