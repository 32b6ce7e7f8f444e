use serde::{Deserialize, Serialize};

use super::claim::Claim;
use super::verdict::JudgeVerdict;

/// What the engine tells the orchestrator to do with a scored report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Ship the report as-is.
    Proceed,
    /// Re-synthesize the summary from the same evidence.
    Regenerate,
    /// Revise the plan and gather more evidence.
    Replan,
}

impl Decision {
    pub fn label(&self) -> &'static str {
        match self {
            Decision::Proceed => "proceed",
            Decision::Regenerate => "regenerate",
            Decision::Replan => "replan",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A synthesized report: the free-text summary plus its extracted claims,
/// tagged with the signal that triggered the investigation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub signal_id: String,
    pub synthesis_text: String,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn new(
        signal_id: impl Into<String>,
        synthesis_text: impl Into<String>,
        claims: Vec<Claim>,
    ) -> Report {
        Report {
            signal_id: signal_id.into(),
            synthesis_text: synthesis_text.into(),
            claims,
        }
    }

    /// Placeholder report for degraded terminations that never produced one.
    pub fn empty(signal_id: impl Into<String>) -> Report {
        Report::new(signal_id, "", Vec::new())
    }
}

/// One judge evaluation inside an investigation: the verdict, the engine's
/// recomputed score, and the decision that score mapped to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictStep {
    pub verdict: JudgeVerdict,
    pub score: f64,
    pub decision: Decision,
}

/// Terminal state of one bounded investigation.
///
/// `degraded` marks a termination forced by the replan budget (or by a hook
/// failure, in which case `error` carries the note) rather than by reaching
/// a proceed decision. When termination is judge-driven, `degraded` implies
/// `replans_used == k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvestigationResult {
    pub report: Report,
    pub score: f64,
    pub replans_used: u32,
    pub regenerations_used: u32,
    pub degraded: bool,
    pub verdict_history: Vec<VerdictStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decision_serializes_lowercase() {
        assert_eq!(
            serde_json::to_string(&Decision::Proceed).unwrap(),
            "\"proceed\""
        );
        assert_eq!(
            serde_json::from_str::<Decision>("\"regenerate\"").unwrap(),
            Decision::Regenerate
        );
    }
}
