//! Certification report types shared by the scan and the pentagon certifier,
//! serialized verbatim into the CLI's JSON output.

use serde::{Deserialize, Serialize};

use crate::assignment::IntersectionWitness;
use crate::inequality::CaseResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONTEXTUAL")]
    Contextual,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Algorithm,
    Pentagon,
}

/// Witness payload, by method: exact intersecting subset pairs for the scan,
/// per-case determinant results for the pentagon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witnesses {
    Intersections(Vec<IntersectionWitness>),
    Cases(Vec<CaseResult>),
}

/// Preconditions the verdict rests on, recorded alongside it.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Preconditions {
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknown_count: Option<usize>,
    /// n ≥ m + u + 2 for the algorithm method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub soundness_gate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs_tested: Option<usize>,
    /// Per-case clockwise-quadrilateral flags for the pentagon method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrilaterals_ok: Option<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub tool_version: String,
    pub generated_at: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub verdict: Verdict,
    pub method: Method,
    pub witnesses: Witnesses,
    pub preconditions: Preconditions,
    pub provenance: Provenance,
}

impl CertificationReport {
    /// A report may claim CONTEXTUAL only when its method's soundness
    /// precondition is recorded as satisfied.
    pub fn verdict_consistent(&self) -> bool {
        if self.verdict != Verdict::Contextual {
            return true;
        }
        match self.method {
            Method::Algorithm => self.preconditions.soundness_gate == Some(true),
            Method::Pentagon => self
                .preconditions
                .quadrilaterals_ok
                .as_ref()
                .is_some_and(|flags| flags.iter().all(|&ok| ok)),
        }
    }
}
