// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultEntry {
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub provenance: Provenance,
}

impl ResultEntry {
    pub fn new(name: impl Into<String>, value: impl Serialize, provenance: Provenance) -> Self {
        ResultEntry {
            name: name.into(),
            value: to_value(value),
            witness: None,
            provenance,
        }
    }

    pub fn with_witness(mut self, witness: impl Serialize) -> Self {
        self.witness = Some(to_value(witness));
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// How the two sides of a check are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|lhs − rhs| ≤ tol`
    Approx,
    /// `lhs == rhs`
    Exact,
    /// `lhs ≤ rhs + tol`
    AtMost,
    /// The check is a boolean; `lhs` is 1 for true.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub property: String,
    pub status: Status,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub witness: Value,
}

impl Check {
    pub fn new(property: impl Into<String>, relation: Relation, lhs: f64, rhs: f64, tol: f64, witness: impl Serialize) -> Self {
        let ok = match relation {
            Relation::Approx => (lhs - rhs).abs() <= tol,
            Relation::Exact => lhs == rhs,
            Relation::AtMost => lhs <= rhs + tol,
            Relation::Holds => lhs == 1.0,
        };
        Check {
            property: property.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            relation,
            lhs,
            rhs,
            tolerance: tol,
            witness: to_value(witness),
        }
    }

    pub fn approx(property: impl Into<String>, lhs: f64, rhs: f64, tol: f64, witness: impl Serialize) -> Self {
        Self::new(property, Relation::Approx, lhs, rhs, tol, witness)
    }

    pub fn exact(property: impl Into<String>, lhs: f64, rhs: f64, witness: impl Serialize) -> Self {
        Self::new(property, Relation::Exact, lhs, rhs, 0.0, witness)
    }

    pub fn at_most(property: impl Into<String>, lhs: f64, rhs: f64, tol: f64, witness: impl Serialize) -> Self {
        Self::new(property, Relation::AtMost, lhs, rhs, tol, witness)
    }

    pub fn holds(property: impl Into<String>, ok: bool, witness: impl Serialize) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Self::new(property, Relation::Holds, v, 1.0, 0.0, witness)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("<unserializable: {e}>")))
}

/// One report object per run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub results: Vec<ResultEntry>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub passed: bool,
}

impl AnalysisReport {
    pub fn new(command: Vec<String>) -> Self {
        AnalysisReport {
            command,
            ..Default::default()
        }
    }

    /// Hashes everything the run read, in order.
    pub fn set_inputs<'a>(&mut self, inputs: impl IntoIterator<Item = &'a [u8]>) {
        let mut h = Sha256::new();
        for chunk in inputs {
            h.update((chunk.len() as u64).to_le_bytes());
            h.update(chunk);
        }
        self.inputs_digest = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    }

    pub fn push(&mut self, r: ResultEntry) {
        self.results.push(r);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend_checks(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn finish(&mut self) {
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        self.summary = Summary {
            checks: self.checks.len(),
            failed,
            passed: failed == 0,
        };
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::approx("p", 1.0, 1.0 + 1e-10, 1e-9, ()).passed());
        assert!(!Check::approx("p", 1.0, 1.1, 1e-9, ()).passed());
        assert!(!Check::exact("p", 1.0, 1.0 + 1e-15, ()).passed());
        assert!(Check::at_most("p", 2.0, 1.0, 1.5, ()).passed());
        assert!(!Check::holds("p", false, "w").passed());
        assert!(!Check::approx("p", f64::NAN, 1.0, 1e-9, ()).passed());
    }

    #[test]
    fn digest_is_stable() {
        let mut a = AnalysisReport::new(vec!["x".into()]);
        a.set_inputs([b"abc".as_slice(), b"d".as_slice()]);
        let mut b = AnalysisReport::new(vec!["x".into()]);
        b.set_inputs([b"ab".as_slice(), b"cd".as_slice()]);
        assert_eq!(a.inputs_digest.len(), 64);
        assert_ne!(a.inputs_digest, b.inputs_digest);
    }
}
