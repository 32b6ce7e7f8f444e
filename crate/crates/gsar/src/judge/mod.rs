//! The judge protocol: structured requests, verdict parsing with graceful
//! degradation, and the judge backends (deterministic rule-based, recorded
//! replay, remote HTTP, and scripted sequences for loop tests).

mod http;
mod parse;
mod replay;
mod rule;
mod scripted;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{ClaimRecord, ScoredDocument};
use crate::domain::{Claim, JudgeVerdict};
use crate::Error;

pub use http::{default_prompt_template, HttpJudge, DEFAULT_HTTP_TIMEOUT};
pub use parse::parse_judge_output;
pub use replay::{write_replay_trace, ReplayJudge};
pub use rule::{RuleBasedJudge, DEFAULT_KAPPA};
pub use scripted::ScriptedJudge;

/// One labelled evidence passage shown to the judge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidencePassage {
    pub label: String,
    pub text: String,
}

/// Everything a judge sees: the synthesized summary, its extracted claims,
/// and the labelled evidence corpus. Gold labels are deliberately absent.
///
/// Evidence labels are deduplicated at construction (first occurrence wins),
/// so a request always presents a stable, unique labelling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgeRequest {
    synthesis_text: String,
    claims: Vec<Claim>,
    evidence: Vec<EvidencePassage>,
}

impl JudgeRequest {
    pub fn new(
        synthesis_text: impl Into<String>,
        claims: Vec<Claim>,
        evidence: Vec<EvidencePassage>,
    ) -> JudgeRequest {
        let mut seen = std::collections::HashSet::new();
        let evidence = evidence
            .into_iter()
            .filter(|passage| seen.insert(passage.label.clone()))
            .collect();
        JudgeRequest {
            synthesis_text: synthesis_text.into(),
            claims,
            evidence,
        }
    }

    pub fn synthesis_text(&self) -> &str {
        &self.synthesis_text
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn evidence(&self) -> &[EvidencePassage] {
        &self.evidence
    }

    /// Content fingerprint used to key recorded verdicts: a SHA-256 over the
    /// synthesis text and the sorted evidence labels, length-framed so
    /// concatenation cannot alias.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        let synthesis = self.synthesis_text.as_bytes();
        hasher.update((synthesis.len() as u64).to_be_bytes());
        hasher.update(synthesis);
        let mut labels: Vec<&str> = self.evidence.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        for label in labels {
            hasher.update((label.len() as u64).to_be_bytes());
            hasher.update(label.as_bytes());
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(digest.len() * 2);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Which parsing path produced a verdict: 1 strict schema, 2 lenient
/// extraction, 3 safe fallback. Backends that build verdicts natively
/// report stage 1; misses and transport failures report stage 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseStage {
    Strict = 1,
    Lenient = 2,
    Fallback = 3,
}

impl ParseStage {
    pub fn as_u8(&self) -> u8 {
        *self as u8
    }
}

/// A verdict together with the telemetry of how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Judgement {
    pub verdict: JudgeVerdict,
    pub parse_stage: ParseStage,
}

impl Judgement {
    pub fn native(verdict: JudgeVerdict) -> Judgement {
        Judgement {
            verdict,
            parse_stage: ParseStage::Strict,
        }
    }

    pub fn fallback(verdict: JudgeVerdict) -> Judgement {
        Judgement {
            verdict,
            parse_stage: ParseStage::Fallback,
        }
    }
}

/// A judge that evaluates structured requests. Implementations must be
/// deterministic given identical inputs unless they proxy a remote model.
pub trait JudgeBackend: Send + Sync {
    /// Stable identifier recorded in traces.
    fn id(&self) -> &str;

    /// Evaluates one request. Total: failures surface as abstaining
    /// verdicts, never as panics or errors.
    fn evaluate(&self, request: &JudgeRequest) -> Judgement;
}

/// A judge as the evaluation pipeline drives it: per dataset record, with
/// the retrieval results and the structured request both in hand.
///
/// Request-level backends ignore the record (they must not see gold labels);
/// the rule-based judge ignores the request and works from the record and
/// retrieval directly.
pub trait RecordJudge: Send + Sync {
    fn backend_id(&self) -> &str;

    fn judge_record(
        &self,
        record: &ClaimRecord,
        retrieved: &[ScoredDocument],
        request: &JudgeRequest,
    ) -> Judgement;
}

impl<B: JudgeBackend> RecordJudge for B {
    fn backend_id(&self) -> &str {
        self.id()
    }

    fn judge_record(
        &self,
        _record: &ClaimRecord,
        _retrieved: &[ScoredDocument],
        request: &JudgeRequest,
    ) -> Judgement {
        self.evaluate(request)
    }
}

/// Reads one JSONL artifact line, tolerating blank lines.
pub(crate) fn parse_jsonl_line<T: serde::de::DeserializeOwned>(
    path: &str,
    line_no: usize,
    line: &str,
) -> crate::Result<Option<T>> {
    if line.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(line)
        .map(Some)
        .map_err(|e| Error::Artifact {
            path: path.to_string(),
            line: line_no,
            reason: e.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::EvidenceType;

    fn passage(label: &str, text: &str) -> EvidencePassage {
        EvidencePassage {
            label: label.into(),
            text: text.into(),
        }
    }

    #[test]
    fn evidence_labels_are_deduplicated_keeping_the_first() {
        let request = JudgeRequest::new(
            "summary",
            vec![],
            vec![
                passage("e1", "first"),
                passage("e1", "second"),
                passage("e2", "third"),
            ],
        );
        assert_eq!(request.evidence().len(), 2);
        assert_eq!(request.evidence()[0].text, "first");
    }

    #[test]
    fn fingerprint_ignores_evidence_order_but_not_content() {
        let a = JudgeRequest::new(
            "summary",
            vec![],
            vec![passage("e1", "x"), passage("e2", "y")],
        );
        let b = JudgeRequest::new(
            "summary",
            vec![],
            vec![passage("e2", "y"), passage("e1", "x")],
        );
        assert_eq!(a.fingerprint(), b.fingerprint());

        let c = JudgeRequest::new("summary", vec![], vec![passage("e3", "x")]);
        assert_ne!(a.fingerprint(), c.fingerprint());

        let d = JudgeRequest::new("different summary", vec![], vec![]);
        let e = JudgeRequest::new("summary", vec![], vec![]);
        assert_ne!(d.fingerprint(), e.fingerprint());
    }

    #[test]
    fn fingerprint_is_stable_across_claim_changes() {
        let claim = Claim::new("c", EvidenceType::Inference, vec![]).unwrap();
        let a = JudgeRequest::new("s", vec![], vec![passage("e", "t")]);
        let b = JudgeRequest::new("s", vec![claim], vec![passage("e", "t")]);
        assert_eq!(a.fingerprint(), b.fingerprint());
    }
}
