//! The JSON verification report. Console summaries are rendered from the
//! same object.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bidersolve::{BiderBlock, Certificate, FactorStatus};
use crate::dersolve::{DerBlockReport, DerClassification};
use crate::exterior::Parity;
use crate::families::RootComparison;
use crate::linalg::FieldTag;
use crate::structchecks::LemmaReport;
use crate::superfields::JacobiReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Failed,
    /// A resource limit stopped some block before it was resolved.
    Incomplete,
}

/// One named predicate; the verdict is their conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCount {
    pub degree: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    pub dim: usize,
    pub even: usize,
    pub odd: usize,
    pub top_degree: i64,
    pub degree_modulus: Option<i64>,
    pub degrees: Vec<DegreeCount>,
    pub distinct_weights: usize,
    pub lprime_dim: Option<usize>,
    pub lprime_outer: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HamiltonianIdentity {
    pub passed: bool,
    pub pairs_checked: usize,
    pub counterexample: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiSection {
    pub validation_error: Option<String>,
    pub jacobi: Option<JacobiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian_identity: Option<HamiltonianIdentity>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerParity {
    pub parity: Parity,
    pub unknowns: usize,
    pub dimension: usize,
    pub complete: bool,
    pub cross_block_rows: usize,
    pub blocks: Vec<DerBlockReport>,
    pub classification: Option<DerClassification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerSection {
    pub parities: Vec<DerParity>,
    pub total_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiderParity {
    pub parity: Parity,
    pub unknowns: usize,
    pub total_nullity: usize,
    pub complete: bool,
    pub cross_block_rows: usize,
    pub block_count: usize,
    /// Blocks with nonzero nullity away from weight 0 and degree 0.
    pub nonzero_off_diagonal: Vec<BiderBlock>,
    pub blocks: Vec<BiderBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerResidual {
    pub lambda: i64,
    pub residual_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub parity: Parity,
    pub solution: usize,
    pub weight: Option<String>,
    pub degree: Option<i64>,
    pub status: FactorStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiderSection {
    pub parities: Vec<BiderParity>,
    pub bracket_is_solution: bool,
    pub bracket_in_span: Option<bool>,
    pub inner_residuals: Vec<InnerResidual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub factorizations: Vec<FactorSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub section: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub family: String,
    pub n: usize,
    pub in_theorem_scope: bool,
    pub field: FieldTag,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Dimensions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivations: Option<DerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub biderivations: Option<BiderSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lemmas: Vec<LemmaReport>,
    pub checks: Vec<Check>,
    pub complete: bool,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl VerificationReport {
    pub fn new(command: &str, family: &str, n: usize, in_theorem_scope: bool, field: FieldTag, seed: u64) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            family: family.into(),
            n,
            in_theorem_scope,
            field,
            seed,
            dimensions: None,
            roots: None,
            jacobi: None,
            derivations: None,
            biderivations: None,
            lemmas: Vec::new(),
            checks: Vec::new(),
            complete: true,
            verdict: Verdict::Verified,
            timings: None,
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, detail });
        self.update_verdict();
    }

    pub fn mark_incomplete(&mut self) {
        self.complete = false;
        self.update_verdict();
    }

    fn update_verdict(&mut self) {
        self.verdict = if self.checks.iter().any(|c| !c.passed) {
            Verdict::Failed
        } else if !self.complete {
            Verdict::Incomplete
        } else {
            Verdict::Verified
        };
    }

    /// 0 verified, 1 a check failed, 3 incomplete.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Verified => 0,
            Verdict::Failed => 1,
            Verdict::Incomplete => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Plain-text summary for the console.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let scope = if self.in_theorem_scope { "" } else { " (outside theorem scope)" };
        let _ = writeln!(s, "{}({}){scope} over {}: {}", self.family, self.n, self.field, self.command);
        if let Some(d) = &self.dimensions {
            let lp = d.lprime_dim.map(|x| format!(", dim L' = {x}")).unwrap_or_default();
            let _ = writeln!(s, "  dim = {} (even {}, odd {}), top degree {}{lp}", d.dim, d.even, d.odd, d.top_degree);
        }
        if let Some(der) = &self.derivations {
            for p in &der.parities {
                let _ = writeln!(s, "  Der {}: dim {} ({} unknowns, {} blocks)", p.parity, p.dimension, p.unknowns, p.blocks.len());
            }
        }
        if let Some(b) = &self.biderivations {
            for p in &b.parities {
                let _ = writeln!(s, "  BDer {}: nullity {} ({} unknowns, {} blocks)", p.parity, p.total_nullity, p.unknowns, p.block_count);
            }
        }
        for c in &self.checks {
            let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
            let _ = writeln!(s, "  {:<5} {}{detail}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
        let _ = writeln!(s, "verdict: {}", serde_json::to_value(self.verdict).expect("serializes").as_str().unwrap_or_default());
        s
    }
}
