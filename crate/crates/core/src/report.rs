use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of checking one lemma at one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lemma: String,
    pub n: usize,
    pub pass: bool,
    pub counterexample: Option<Value>,
    pub checked: u64,
}

impl VerificationReport {
    pub fn new(lemma: impl Into<String>, n: usize) -> Self {
        VerificationReport {
            lemma: lemma.into(),
            n,
            pass: true,
            counterexample: None,
            checked: 0,
        }
    }

    /// Count one check; the first failure is kept as the counterexample.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.counterexample = Some(witness());
        }
    }

    /// One human-readable line, `PASS lemma N=.. (checked ..)`.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        match &self.counterexample {
            Some(c) => format!("{verdict} {} N={} (checked {}) counterexample: {c}", self.lemma, self.n, self.checked),
            None => format!("{verdict} {} N={} (checked {})", self.lemma, self.n, self.checked),
        }
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keeps_first_counterexample() {
        let mut r = VerificationReport::new("demo", 3);
        r.record(true, || json!(0));
        r.record(false, || json!({"at": 1}));
        r.record(false, || json!({"at": 2}));
        assert!(!r.pass);
        assert_eq!(r.checked, 3);
        assert_eq!(r.counterexample, Some(json!({"at": 1})));
        assert!(r.line().starts_with("FAIL demo N=3"));
    }

    #[test]
    fn json_schema() {
        let r = VerificationReport::new("lemma-1.3", 4);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, json!({"lemma": "lemma-1.3", "n": 4, "pass": true, "counterexample": null, "checked": 0}));
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
