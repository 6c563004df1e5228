//! The JSON wire formats. Field names and nesting are stable contracts;
//! tests round-trip them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use schwinger_core::verify::{CheckResult, CheckStatus};

/// `factor` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    #[serde(rename = "M")]
    pub m: u64,
    pub constituents: Vec<ConstituentDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstituentDoc {
    pub prime: u64,
    pub exponent: u32,
    pub modulus: u64,
    pub cofactor: u64,
    pub inverse: u64,
}

/// `roots` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsDoc {
    #[serde(rename = "M")]
    pub m: u64,
    pub roots: Vec<RootDoc>,
    /// Number of coprime bi-factorizations (canonical sign-root pairs).
    pub bifactorizations: u64,
    /// Count of roots that are not sign roots (even M only).
    pub exotic_roots: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDoc {
    pub value: u64,
    /// Residue modulo each prime-power constituent.
    pub pattern: Vec<u64>,
    /// Sign string like `"++-"`, or `"exotic"` when some residue is not
    /// plus or minus one.
    pub signs: String,
    /// The split selected by a sign root, `[plus product, minus product]`.
    pub split: Option<[u64; 2]>,
    pub exotic: bool,
}

/// `basis` output: the documented serialization of a labeled basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDoc {
    #[serde(rename = "M")]
    pub m: u64,
    pub scheme: Vec<u64>,
    pub states: Vec<StateDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub label: Vec<u64>,
    pub support: Vec<u64>,
    pub phase_exponents: Vec<u64>,
}

/// `overlap` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapDoc {
    #[serde(rename = "M")]
    pub m: u64,
    pub bra: String,
    pub ket: String,
    pub entries: Vec<OverlapEntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct OverlapEntryDoc {
    pub bra_label: Vec<u64>,
    pub ket_label: Vec<u64>,
    pub magnitude: f64,
    /// Exact phase as a rational exponent of the full turn, `"e/M"`, when
    /// the overlap is a pure phase; absent otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    pub zero: bool,
}

/// `check` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    #[serde(rename = "M")]
    pub m: u64,
    pub results: Vec<CheckResultDoc>,
    pub summary: SummaryDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResultDoc {
    pub check_id: String,
    #[serde(rename = "M")]
    pub m: u64,
    pub parameters: BTreeMap<String, String>,
    /// `"pass"`, `"fail"`, or `"skipped"`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl From<&CheckResult> for CheckResultDoc {
    fn from(r: &CheckResult) -> Self {
        let (status, witness, reason) = match &r.status {
            CheckStatus::Pass => ("pass", None, None),
            CheckStatus::Fail { witness } => ("fail", Some(witness.clone()), None),
            CheckStatus::Skipped { reason } => ("skipped", None, Some(reason.clone())),
        };
        CheckResultDoc {
            check_id: r.id.to_string(),
            m: r.dimension,
            parameters: r.parameters.clone(),
            status: status.to_string(),
            witness,
            reason,
        }
    }
}

/// Assembles the full report document from suite results.
pub fn report_doc(m: u64, results: &[CheckResult]) -> ReportDoc {
    let summary = SummaryDoc {
        pass: results.iter().filter(|r| matches!(r.status, CheckStatus::Pass)).count(),
        fail: results.iter().filter(|r| matches!(r.status, CheckStatus::Fail { .. })).count(),
        skipped: results
            .iter()
            .filter(|r| matches!(r.status, CheckStatus::Skipped { .. }))
            .count(),
    };
    ReportDoc { m, results: results.iter().map(CheckResultDoc::from).collect(), summary }
}
