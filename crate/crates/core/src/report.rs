//! Machine-readable run reports.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::verdict::{LawRecord, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing was checked.
    Vacuous,
    /// The input could not be loaded.
    InputError,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Vacuous => "vacuous",
            Outcome::InputError => "input-error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::Vacuous => 0,
            Outcome::Fail => 1,
            Outcome::InputError => 2,
        }
    }
}

pub struct Report {
    pub instance: String,
    pub digest: String,
    /// `"verify"` or `"build:<target>"`.
    pub command: String,
    pub suites: Vec<String>,
    pub records: Vec<LawRecord>,
    pub structure: Option<Value>,
    /// A load failure, or a constructor that refused to run.
    pub error: Option<String>,
    pub input_error: bool,
    pub timing_ms: u128,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: impl Into<String>, bytes: &[u8]) -> Self {
        Self {
            instance: String::new(),
            digest: digest(bytes),
            command: command.into(),
            suites: Vec::new(),
            records: Vec::new(),
            structure: None,
            error: None,
            input_error: false,
            timing_ms: 0,
        }
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.records = v.records;
        self
    }

    /// Parse and I/O errors are input errors; anything else is a mathematical failure.
    pub fn with_error(mut self, e: &Error) -> Self {
        self.input_error = matches!(e, Error::Parse(_) | Error::Io(_) | Error::Json(_));
        self.error = Some(e.to_string());
        self
    }

    pub fn passed_count(&self) -> usize {
        self.records.iter().filter(|r| r.passed).count()
    }

    pub fn outcome(&self) -> Outcome {
        if self.input_error {
            Outcome::InputError
        } else if self.error.is_some() || self.passed_count() < self.records.len() {
            Outcome::Fail
        } else if self.records.is_empty() {
            Outcome::Vacuous
        } else {
            Outcome::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome().exit_code()
    }

    pub fn to_json(&self) -> Value {
        let failed: Vec<&str> = self.records.iter().filter(|r| !r.passed).map(|r| r.check.as_str()).collect();
        let mut v = json!({
            "instance": self.instance,
            "digest": self.digest,
            "command": self.command,
            "suites": self.suites,
            "records": self.records.iter().map(LawRecord::to_json).collect::<Vec<_>>(),
            "summary": {
                "total": self.records.len(),
                "passed": self.passed_count(),
                "failed": failed.len(),
                "failing_checks": failed,
            },
            "verdict": self.outcome().label(),
            "timing_ms": self.timing_ms,
        });
        if let Some(s) = &self.structure {
            v["structure"] = s.clone();
        }
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }

    /// One line per failing record plus a closing summary.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().filter(|r| !r.passed) {
            out.push_str(&format!("FAIL {}  [{}]", r.check, r.diagram));
            if let Some(n) = &r.note {
                out.push_str(&format!("  ({n})"));
            }
            out.push('\n');
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!(
            "{} {}: {}/{} checks passed, verdict {}\n",
            self.command,
            if self.instance.is_empty() { "<unnamed>" } else { &self.instance },
            self.passed_count(),
            self.records.len(),
            self.outcome().label()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcomes() {
        let r = Report::new("verify", b"{}");
        assert_eq!(r.outcome(), Outcome::Vacuous);
        assert_eq!(r.exit_code(), 0);
        let mut v = Verdict::new();
        v.check_bool("a", "a", true, None);
        let r = Report::new("verify", b"{}").with_verdict(v.clone());
        assert_eq!(r.outcome(), Outcome::Pass);
        v.check_bool("b", "b", false, None);
        let r = Report::new("verify", b"{}").with_verdict(v);
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.to_json()["summary"]["failing_checks"], json!(["b"]));
        let r = Report::new("verify", b"").with_error(&Error::Parse("x".into()));
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
