//! Total parser for judge output.
//!
//! Judge text is attempted in three stages, strictest first:
//!
//! 1. the whole payload parses as a schema-conformant verdict;
//! 2. a balanced-brace scan extracts JSON object substrings and the first
//!    one carrying at least one recognized verdict field is coerced
//!    leniently (missing fields defaulted, bare-string claims adopted as
//!    inference claims, malformed entries dropped);
//! 3. the safe default: neutral score, empty partition, abstain.
//!
//! Stage 2 never repairs a disjointness violation; an extracted object whose
//! claim lists overlap is rejected like any other unusable candidate. The
//! parser cannot fail, which is what makes downstream control flow total.

use serde_json::{Map, Value};

use super::{Judgement, ParseStage};
use crate::domain::{Claim, DecisionStatus, EvidenceRef, EvidenceType, JudgeVerdict, Partition};

/// Reason attached to stage-3 fallback verdicts.
pub(crate) const FALLBACK_REASON: &str = "unparseable judge output";

const RECOGNIZED_FIELDS: [&str; 13] = [
    "grounding_score",
    "is_grounded",
    "grounded_claims",
    "ungrounded_claims",
    "contradicted_claims",
    "complementary_claims",
    "gaps",
    "contradictions",
    "verification_needed",
    "verification_reason",
    "explanation",
    "decision_status",
    "abstain_reason",
];

/// Parses raw judge output, degrading through the stages above. Total over
/// arbitrary strings.
pub fn parse_judge_output(raw: &str) -> Judgement {
    if let Ok(verdict) = serde_json::from_str::<JudgeVerdict>(raw) {
        return Judgement {
            verdict,
            parse_stage: ParseStage::Strict,
        };
    }

    for candidate in object_candidates(raw) {
        if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(candidate) {
            if let Some(verdict) = lenient_verdict(&map) {
                return Judgement {
                    verdict,
                    parse_stage: ParseStage::Lenient,
                };
            }
        }
    }

    Judgement::fallback(JudgeVerdict::safe_default(FALLBACK_REASON))
}

/// Balanced-brace object candidates in order of start position, honouring
/// JSON string literals and escapes.
fn object_candidates(raw: &str) -> impl Iterator<Item = &str> {
    raw.char_indices()
        .filter(|&(_, c)| c == '{')
        .filter_map(move |(start, _)| balanced_object(&raw[start..]))
}

fn balanced_object(slice: &str) -> Option<&str> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (idx, c) in slice.char_indices() {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&slice[..idx + c.len_utf8()]);
                }
            }
            _ => {}
        }
    }
    None
}

/// Builds a verdict from an arbitrary JSON object if it looks like judge
/// output at all. Returns `None` for objects without a single recognized
/// field or whose claim lists cannot form a partition.
fn lenient_verdict(map: &Map<String, Value>) -> Option<JudgeVerdict> {
    if !RECOGNIZED_FIELDS
        .iter()
        .any(|field| map.contains_key(*field))
    {
        return None;
    }

    let judge_score = map
        .get("grounding_score")
        .and_then(Value::as_f64)
        .filter(|s| s.is_finite())
        .map(|s| s.clamp(0.0, 1.0))
        .unwrap_or(0.5);

    let partition = Partition::new(
        lenient_claims(map.get("grounded_claims")),
        lenient_claims(map.get("ungrounded_claims")),
        lenient_claims(map.get("contradicted_claims")),
        lenient_claims(map.get("complementary_claims")),
    )
    .ok()?;

    let decision_status = match map.get("decision_status").and_then(Value::as_str) {
        Some("abstain") => DecisionStatus::Abstain,
        _ => DecisionStatus::Resolved,
    };
    let abstain_reason = map
        .get("abstain_reason")
        .and_then(Value::as_str)
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(String::from);

    let verdict = match decision_status {
        DecisionStatus::Abstain => JudgeVerdict::abstaining(
            judge_score,
            partition,
            abstain_reason.unwrap_or_else(|| "unspecified".to_string()),
        ),
        DecisionStatus::Resolved => JudgeVerdict::resolved(
            judge_score,
            map.get("is_grounded")
                .and_then(Value::as_bool)
                .unwrap_or(false),
            partition,
            lenient_strings(map.get("gaps")),
            lenient_strings(map.get("contradictions")),
            map.get("verification_needed")
                .and_then(Value::as_bool)
                .unwrap_or(false),
            map.get("verification_reason")
                .and_then(Value::as_str)
                .map(String::from),
            map.get("explanation")
                .and_then(Value::as_str)
                .unwrap_or("")
                .to_string(),
        ),
    };
    verdict.ok()
}

/// Claim-list coercion: claim objects parse with defaults, bare strings are
/// adopted as unreferenced inference claims, anything else is dropped.
fn lenient_claims(value: Option<&Value>) -> Vec<Claim> {
    let Some(Value::Array(items)) = value else {
        return Vec::new();
    };
    items
        .iter()
        .filter_map(|item| match item {
            Value::String(text) => Claim::new(text, EvidenceType::Inference, vec![]).ok(),
            Value::Object(obj) => {
                let text = obj.get("text").and_then(Value::as_str)?;
                let evidence_type = obj
                    .get("type")
                    .or_else(|| obj.get("evidence_type"))
                    .and_then(Value::as_str)
                    .map(EvidenceType::from_label)
                    .unwrap_or(EvidenceType::Inference);
                let refs = obj
                    .get("evidence_refs")
                    .and_then(Value::as_array)
                    .map(|items| {
                        items
                            .iter()
                            .filter_map(|r| serde_json::from_value::<EvidenceRef>(r.clone()).ok())
                            .filter(|r| r.validate().is_ok())
                            .collect()
                    })
                    .unwrap_or_default();
                Claim::new(text, evidence_type, refs).ok()
            }
            _ => None,
        })
        .collect()
}

fn lenient_strings(value: Option<&Value>) -> Vec<String> {
    let Some(Value::Array(items)) = value else {
        return Vec::new();
    };
    items
        .iter()
        .filter_map(|item| item.as_str().map(String::from))
        .collect()
}
