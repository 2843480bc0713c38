use std::fmt;

use serde::{Deserialize, Serialize};

use crate::logic::ValidationReport;
use crate::model::{Assignment, EvalError, FiniteStructure, SearchError};

/// The outcome of a check.  `Inconclusive` is reserved for undischarged
/// size-bound obligations on disjunction families: the check could neither
/// confirm nor refute without trusting the family's bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn worst(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

/// One per-model, per-sequent finding.  `Pass`-level findings are
/// informational warnings; `Fail` findings always carry a reproducible
/// counterexample (the structure, and where relevant the assignment).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub verdict: Verdict,
    pub sequent_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<FiniteStructure>,
    /// Filled in when the counterexample structure has been written out.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_file: Option<String>,
    pub assignment: Assignment,
    pub detail: String,
}

impl Finding {
    pub fn new(verdict: Verdict, sequent_id: impl Into<String>, detail: impl Into<String>) -> Self {
        Finding {
            verdict,
            sequent_id: sequent_id.into(),
            model: None,
            model_file: None,
            assignment: Assignment::new(),
            detail: detail.into(),
        }
    }

    pub fn with_model(mut self, model: &FiniteStructure) -> Self {
        self.model = Some(model.clone());
        self
    }

    pub fn with_assignment(mut self, assignment: Assignment) -> Self {
        self.assignment = assignment;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckStats {
    pub models_checked: usize,
    pub max_size: usize,
}

/// The report a checker produces: an overall verdict plus itemized
/// findings.  A `fail` verdict implies at least one `fail` finding with an
/// attached counterexample structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
    pub stats: CheckStats,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Pass,
            findings: Vec::new(),
            stats: CheckStats::default(),
        }
    }

    pub fn push(&mut self, finding: Finding) {
        self.verdict = self.verdict.worst(finding.verdict);
        self.findings.push(finding);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// The first fail-level counterexample, if any.
    pub fn counterexample(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| f.verdict == Verdict::Fail && f.model.is_some())
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "check {}: {} (models checked: {}, max size: {})",
            self.check,
            self.verdict.to_string().to_uppercase(),
            self.stats.models_checked,
            self.stats.max_size
        )?;
        for finding in &self.findings {
            let size = finding.model.as_ref().map(|m| m.size);
            write!(f, "  [{}] {}", finding.verdict, finding.sequent_id)?;
            if let Some(size) = size {
                write!(f, " (model size {size})")?;
            }
            if !finding.assignment.is_empty() {
                let pairs: Vec<String> =
                    finding.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, " at {}", pairs.join(", "))?;
            }
            if !finding.detail.is_empty() {
                write!(f, ": {}", finding.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An error that prevented a check from running at all, as opposed to a
/// fail verdict.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("resource ceiling: {0}")]
    Search(#[from] SearchError),
    #[error("evaluation contract violation: {0}")]
    Eval(#[from] EvalError),
    #[error("invalid input:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    BadRequest(String),
}
