//! Verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A documented discrepancy that was observed as documented.
    ExpectedMismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ExpectedMismatch => "expected-mismatch",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub params: Value,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub expected_mismatch: usize,
}

/// An ordered list of case records plus tallies. The summary is maintained by
/// [`Report::push`], so it always matches the cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    suite: String,
    cases: Vec<Case>,
    summary: Summary,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            cases: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn suite(&self) -> &str {
        &self.suite
    }

    pub fn cases(&self) -> &[Case] {
        &self.cases
    }

    pub fn summary(&self) -> Summary {
        self.summary
    }

    pub fn push(&mut self, id: impl Into<String>, params: Value, status: Status, detail: impl Into<String>) {
        match status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::ExpectedMismatch => self.summary.expected_mismatch += 1,
        }
        self.cases.push(Case {
            id: id.into(),
            params,
            status,
            detail: detail.into(),
        });
    }

    /// Append every case of `other`, prefixing its ids with its suite name.
    pub fn absorb(&mut self, other: Report) {
        let prefix = other.suite;
        for c in other.cases {
            self.push(format!("{prefix}/{}", c.id), c.params, c.status, c.detail);
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Whether the summary equals a fresh tally of the cases.
    pub fn is_consistent(&self) -> bool {
        let mut s = Summary::default();
        for c in &self.cases {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::ExpectedMismatch => s.expected_mismatch += 1,
            }
        }
        s == self.summary
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn summary_tracks_cases() {
        let mut r = Report::new("demo");
        r.push("a", json!({}), Status::Pass, "");
        r.push("b", json!({"n": 2}), Status::ExpectedMismatch, "documented");
        assert_eq!(
            r.summary(),
            Summary {
                pass: 1,
                fail: 0,
                expected_mismatch: 1
            }
        );
        assert!(r.passed());
        let mut all = Report::new("all");
        all.absorb(r);
        assert_eq!(all.cases()[1].id, "demo/b");
        assert!(all.is_consistent());
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new("x");
        r.push("1", json!({"k": 1}), Status::ExpectedMismatch, "d");
        assert_eq!(
            r.to_json(),
            r#"{"suite":"x","cases":[{"id":"1","params":{"k":1},"status":"expected-mismatch","detail":"d"}],"summary":{"pass":0,"fail":0,"expected_mismatch":1}}"#
        );
    }
}
