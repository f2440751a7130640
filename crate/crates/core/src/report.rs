//! Structured verifier outcomes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::boundary::finite_or_inf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "violated")]
    Violated,
    #[serde(rename = "equality")]
    EqualityCase,
}

/// One checked inequality: positive values mean the inequality holds with
/// room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slack {
    pub label: String,
    pub point: Option<Complex64>,
    #[serde(serialize_with = "finite_or_inf")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub verifier: String,
    pub inputs_digest: String,
    pub verdict: Verdict,
    #[serde(serialize_with = "finite_or_inf")]
    pub min_slack: f64,
    /// Present exactly when the verdict is `Violated`.
    pub witness: Option<Complex64>,
    pub slacks: Vec<Slack>,
    pub tolerances: BTreeMap<String, f64>,
    /// Verifier-specific findings (hypothesis flags, measured quantities).
    pub details: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Violated
    }

    pub fn detail(&self, key: &str) -> Option<&serde_json::Value> {
        self.details.get(key)
    }
}

/// SHA-256 of the canonical JSON encoding of the inputs.
pub fn inputs_digest<T: Serialize + ?Sized>(inputs: &T) -> String {
    let bytes = serde_json::to_vec(inputs).expect("verifier inputs serialize to JSON");
    hex::encode(Sha256::digest(&bytes))
}

/// Accumulates slacks and findings; [`ReportBuilder::finish`] derives
/// `min_slack` from the recorded slacks.
#[derive(Debug, Clone)]
pub struct ReportBuilder {
    verifier: String,
    inputs_digest: String,
    slacks: Vec<Slack>,
    tolerances: BTreeMap<String, f64>,
    details: BTreeMap<String, serde_json::Value>,
}

impl ReportBuilder {
    pub fn new<T: Serialize + ?Sized>(verifier: &str, inputs: &T) -> Self {
        ReportBuilder {
            verifier: verifier.to_string(),
            inputs_digest: inputs_digest(inputs),
            slacks: Vec::new(),
            tolerances: BTreeMap::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) -> &mut Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn slack(&mut self, label: impl Into<String>, point: Option<Complex64>, value: f64) -> &mut Self {
        self.slacks.push(Slack {
            label: label.into(),
            point,
            value,
        });
        self
    }

    pub fn detail<V: Serialize>(&mut self, key: &str, value: V) -> &mut Self {
        let v = serde_json::to_value(value).expect("detail values serialize to JSON");
        self.details.insert(key.to_string(), v);
        self
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().map(|s| s.value).fold(f64::INFINITY, f64::min)
    }

    /// The slack entry with the smallest value.
    pub fn worst(&self) -> Option<&Slack> {
        self.slacks.iter().min_by(|a, b| a.value.total_cmp(&b.value))
    }

    pub fn finish(self, verdict: Verdict, witness: Option<Complex64>) -> VerificationReport {
        debug_assert!(verdict != Verdict::Violated || witness.is_some());
        let min_slack = self.min_slack();
        VerificationReport {
            verifier: self.verifier,
            inputs_digest: self.inputs_digest,
            verdict,
            min_slack,
            witness: if verdict == Verdict::Violated { witness } else { None },
            slacks: self.slacks,
            tolerances: self.tolerances,
            details: self.details,
        }
    }
}
