//! Verification results shared by every stabilization check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReportKind {
    #[serde(rename = "upper")]
    UpperTail,
    #[serde(rename = "lower")]
    LowerTail,
    #[serde(rename = "periodic")]
    Periodic,
    #[serde(rename = "laurent")]
    TwoSided,
    #[serde(rename = "subsum-shift")]
    SubsumShift,
    #[serde(rename = "g22")]
    G22Convolution,
    #[serde(rename = "prop3")]
    SingleFamily,
    #[serde(rename = "pop")]
    PlaneOverpartition,
    #[serde(rename = "mirrored-convolution")]
    MirroredConvolution,
    #[serde(rename = "series-convolution")]
    SeriesConvolution,
}

/// How much a report's `identity_holds` is worth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Hypotheses were checked; a failure would contradict a proven statement.
    Certified,
    /// Hypotheses fail; the scan only describes what the data shows.
    EmpiricalOnly,
    /// Stated without proof; holding means holding up to the tested order.
    CheckedToOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Onset {
    pub n: i64,
    pub predicted: i64,
    pub empirical: i64,
}

/// A concrete disagreement: `lhs` and `rhs` should have been equal (or, for
/// bounds, `lhs <= rhs`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub check: String,
    pub n: i64,
    pub k: i64,
    #[serde(serialize_with = "decimal")]
    pub lhs: BigInt,
    #[serde(serialize_with = "decimal")]
    pub rhs: BigInt,
}

pub(crate) fn decimal<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Witness lists are capped; `witness_count` keeps the true total.
pub const MAX_WITNESSES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub kind: ReportKind,
    pub m: Option<i64>,
    pub status: Certification,
    pub n_max: usize,
    pub identity_holds: bool,
    pub limit_match: Option<bool>,
    pub bound_holds: Option<bool>,
    /// Named sub-checks for reports that bundle several identities.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, bool>,
    pub onsets: Vec<Onset>,
    pub witness_count: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StabilizationReport {
    pub fn new(kind: ReportKind, n_max: usize) -> Self {
        Self {
            kind,
            m: None,
            status: Certification::Certified,
            n_max,
            identity_holds: true,
            limit_match: None,
            bound_holds: None,
            checks: BTreeMap::new(),
            onsets: Vec::new(),
            witness_count: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_status(mut self, status: Certification) -> Self {
        self.status = status;
        self
    }

    pub(crate) fn witness(&mut self, check: &str, n: i64, k: i64, lhs: &BigInt, rhs: &BigInt) {
        self.witness_count += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness { check: check.into(), n, k, lhs: lhs.clone(), rhs: rhs.clone() });
        }
    }

    /// Records a sub-check outcome; any failure also clears `identity_holds`.
    pub(crate) fn record(&mut self, check: &str, ok: bool) {
        let entry = self.checks.entry(check.to_string()).or_insert(true);
        *entry &= ok;
        self.identity_holds &= ok;
    }

    /// Everything that was checked held.
    pub fn all_hold(&self) -> bool {
        self.identity_holds && self.limit_match != Some(false) && self.bound_holds != Some(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = StabilizationReport::new(ReportKind::UpperTail, 5);
        r.m = Some(2);
        r.onsets.push(Onset { n: 4, predicted: 3, empirical: 2 });
        r.witness("shift", 4, 3, &BigInt::from(7), &BigInt::from(-1));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["kind"], "upper");
        assert_eq!(v["status"], "certified");
        assert_eq!(v["limit_match"], serde_json::Value::Null);
        assert_eq!(v["onsets"][0]["empirical"], 2);
        assert_eq!(v["witnesses"][0]["lhs"], "7");
        assert_eq!(v["witnesses"][0]["rhs"], "-1");
    }

    #[test]
    fn witnesses_capped() {
        let mut r = StabilizationReport::new(ReportKind::LowerTail, 1);
        for i in 0..100 {
            r.witness("shift", i, 0, &BigInt::from(0), &BigInt::from(1));
        }
        assert_eq!(r.witnesses.len(), MAX_WITNESSES);
        assert_eq!(r.witness_count, 100);
    }
}
