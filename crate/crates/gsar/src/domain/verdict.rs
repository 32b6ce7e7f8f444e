use serde::{Deserialize, Serialize};

use super::claim::Claim;
use super::partition::Partition;
use crate::Error;

/// Whether the judge committed to a verdict or declined to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionStatus {
    Resolved,
    Abstain,
}

/// A judge's structured assessment of one synthesized report.
///
/// `judge_score` is the judge's own scalar and is carried for audit only;
/// the engine always recomputes the grounding score from the partition. An
/// abstaining verdict must say why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VerdictWire", into = "VerdictWire")]
pub struct JudgeVerdict {
    judge_score: f64,
    is_grounded: bool,
    partition: Partition,
    gaps: Vec<String>,
    contradictions: Vec<String>,
    verification_needed: bool,
    verification_reason: Option<String>,
    explanation: String,
    decision_status: DecisionStatus,
    abstain_reason: Option<String>,
}

impl JudgeVerdict {
    /// Builds a resolved verdict.
    #[allow(clippy::too_many_arguments)]
    pub fn resolved(
        judge_score: f64,
        is_grounded: bool,
        partition: Partition,
        gaps: Vec<String>,
        contradictions: Vec<String>,
        verification_needed: bool,
        verification_reason: Option<String>,
        explanation: impl Into<String>,
    ) -> crate::Result<JudgeVerdict> {
        JudgeVerdict::build(
            judge_score,
            is_grounded,
            partition,
            gaps,
            contradictions,
            verification_needed,
            verification_reason,
            explanation.into(),
            DecisionStatus::Resolved,
            None,
        )
    }

    /// Builds an abstaining verdict around an (often empty) partition.
    pub fn abstaining(
        judge_score: f64,
        partition: Partition,
        reason: impl Into<String>,
    ) -> crate::Result<JudgeVerdict> {
        JudgeVerdict::build(
            judge_score,
            false,
            partition,
            Vec::new(),
            Vec::new(),
            false,
            None,
            String::new(),
            DecisionStatus::Abstain,
            Some(reason.into()),
        )
    }

    /// The safe default: neutral score, empty partition, abstain. This is
    /// what the parser falls back to when judge output is unusable.
    pub fn safe_default(reason: impl Into<String>) -> JudgeVerdict {
        JudgeVerdict {
            judge_score: 0.5,
            is_grounded: false,
            partition: Partition::empty(),
            gaps: Vec::new(),
            contradictions: Vec::new(),
            verification_needed: false,
            verification_reason: None,
            explanation: String::new(),
            decision_status: DecisionStatus::Abstain,
            abstain_reason: Some(reason.into()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        judge_score: f64,
        is_grounded: bool,
        partition: Partition,
        gaps: Vec<String>,
        contradictions: Vec<String>,
        verification_needed: bool,
        verification_reason: Option<String>,
        explanation: String,
        decision_status: DecisionStatus,
        abstain_reason: Option<String>,
    ) -> crate::Result<JudgeVerdict> {
        if !(0.0..=1.0).contains(&judge_score) {
            return Err(Error::invalid(
                "judge verdict",
                format!("judge score {judge_score} outside [0, 1]"),
            ));
        }
        if decision_status == DecisionStatus::Abstain
            && abstain_reason
                .as_deref()
                .is_none_or(|r| r.trim().is_empty())
        {
            return Err(Error::invalid(
                "judge verdict",
                "abstain without an abstain_reason",
            ));
        }
        Ok(JudgeVerdict {
            judge_score,
            is_grounded,
            partition,
            gaps,
            contradictions,
            verification_needed,
            verification_reason,
            explanation,
            decision_status,
            abstain_reason,
        })
    }

    pub fn judge_score(&self) -> f64 {
        self.judge_score
    }

    pub fn is_grounded(&self) -> bool {
        self.is_grounded
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn gaps(&self) -> &[String] {
        &self.gaps
    }

    pub fn contradictions(&self) -> &[String] {
        &self.contradictions
    }

    pub fn verification_needed(&self) -> bool {
        self.verification_needed
    }

    pub fn verification_reason(&self) -> Option<&str> {
        self.verification_reason.as_deref()
    }

    pub fn explanation(&self) -> &str {
        &self.explanation
    }

    pub fn decision_status(&self) -> DecisionStatus {
        self.decision_status
    }

    pub fn is_abstain(&self) -> bool {
        self.decision_status == DecisionStatus::Abstain
    }

    pub fn abstain_reason(&self) -> Option<&str> {
        self.abstain_reason.as_deref()
    }

    /// Copy of this verdict with a different partition (used by ablation
    /// variants that re-home complementary claims).
    pub fn with_partition(&self, partition: Partition) -> JudgeVerdict {
        JudgeVerdict {
            partition,
            ..self.clone()
        }
    }
}

/// Flat wire shape. Field names are the judge protocol's and are stable;
/// the partition is spelled out as the four `*_claims` lists.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictWire {
    grounding_score: f64,
    is_grounded: bool,
    grounded_claims: Vec<Claim>,
    ungrounded_claims: Vec<Claim>,
    contradicted_claims: Vec<Claim>,
    complementary_claims: Vec<Claim>,
    gaps: Vec<String>,
    contradictions: Vec<String>,
    verification_needed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verification_reason: Option<String>,
    explanation: String,
    decision_status: DecisionStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    abstain_reason: Option<String>,
}

impl TryFrom<VerdictWire> for JudgeVerdict {
    type Error = Error;

    fn try_from(wire: VerdictWire) -> crate::Result<JudgeVerdict> {
        let partition = Partition::new(
            wire.grounded_claims,
            wire.ungrounded_claims,
            wire.contradicted_claims,
            wire.complementary_claims,
        )?;
        JudgeVerdict::build(
            wire.grounding_score,
            wire.is_grounded,
            partition,
            wire.gaps,
            wire.contradictions,
            wire.verification_needed,
            wire.verification_reason,
            wire.explanation,
            wire.decision_status,
            wire.abstain_reason,
        )
    }
}

impl From<JudgeVerdict> for VerdictWire {
    fn from(verdict: JudgeVerdict) -> VerdictWire {
        VerdictWire {
            grounding_score: verdict.judge_score,
            is_grounded: verdict.is_grounded,
            grounded_claims: verdict.partition.grounded().to_vec(),
            ungrounded_claims: verdict.partition.ungrounded().to_vec(),
            contradicted_claims: verdict.partition.contradicted().to_vec(),
            complementary_claims: verdict.partition.complementary().to_vec(),
            gaps: verdict.gaps,
            contradictions: verdict.contradictions,
            verification_needed: verdict.verification_needed,
            verification_reason: verdict.verification_reason,
            explanation: verdict.explanation,
            decision_status: verdict.decision_status,
            abstain_reason: verdict.abstain_reason,
        }
    }
}
