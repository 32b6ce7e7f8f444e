//! HTTP judge backend.
//!
//! Renders the request into a prompt, POSTs `{"prompt": ...}` to a judge
//! endpoint, and runs the response body through the total output parser.
//! Transport failures (timeouts, connection errors, non-2xx statuses) map to
//! the stage-3 safe default rather than surfacing as errors: a flaky judge
//! endpoint degrades an investigation, it never crashes one.

use std::time::Duration;

use super::{parse_judge_output, JudgeBackend, JudgeRequest, Judgement};
use crate::domain::JudgeVerdict;
use crate::Error;

/// Default end-to-end timeout for one judge call.
pub const DEFAULT_HTTP_TIMEOUT: Duration = Duration::from_secs(30);

/// Prompt template shipped with the crate. Placeholders: `{{synthesis}}`,
/// `{{claims}}`, `{{evidence}}`.
pub fn default_prompt_template() -> &'static str {
    r#"You are a grounding judge. Assess whether the synthesized summary below is supported by the evidence passages, then answer with a single JSON object and nothing else.

The JSON object must have exactly these fields:
- "grounding_score": number in [0, 1]
- "is_grounded": boolean
- "grounded_claims": array of {"text", "type", "evidence_refs"} for claims the evidence supports
- "ungrounded_claims": same shape, for claims the evidence neither supports nor refutes
- "contradicted_claims": same shape, for claims the evidence refutes
- "complementary_claims": same shape, for correct claims that add context beyond the evidence
- "gaps": array of strings naming missing evidence
- "contradictions": array of strings naming conflicts
- "verification_needed": boolean
- "verification_reason": string (omit when verification_needed is false)
- "explanation": string
- "decision_status": "resolved" or "abstain"
- "abstain_reason": string (required when decision_status is "abstain")

Claim "type" is one of: tool_match, specific_data, signal_match, neg_evidence, complementary_finding, synthesis, inference, domain.

Summary:
{{synthesis}}

Extracted claims:
{{claims}}

Evidence passages:
{{evidence}}
"#
}

/// Judge backend speaking to a remote endpoint.
pub struct HttpJudge {
    endpoint: String,
    template: String,
    client: reqwest::blocking::Client,
}

impl HttpJudge {
    /// Builds a judge with the default template and timeout.
    pub fn new(endpoint: impl Into<String>) -> crate::Result<HttpJudge> {
        HttpJudge::with_options(
            endpoint,
            default_prompt_template().to_string(),
            DEFAULT_HTTP_TIMEOUT,
        )
    }

    /// Builds a judge with a custom template and timeout. The template must
    /// carry at least the synthesis and evidence placeholders, otherwise the
    /// judge would assess thin air.
    pub fn with_options(
        endpoint: impl Into<String>,
        template: String,
        timeout: Duration,
    ) -> crate::Result<HttpJudge> {
        for placeholder in ["{{synthesis}}", "{{evidence}}"] {
            if !template.contains(placeholder) {
                return Err(Error::Config(format!(
                    "judge prompt template is missing the {placeholder} placeholder"
                )));
            }
        }
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| Error::Config(format!("could not build http client: {e}")))?;
        Ok(HttpJudge {
            endpoint: endpoint.into(),
            template,
            client,
        })
    }

    fn render_prompt(&self, request: &JudgeRequest) -> String {
        let claims = if request.claims().is_empty() {
            "(none extracted)".to_string()
        } else {
            request
                .claims()
                .iter()
                .map(|claim| format!("- {}", claim.text()))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let evidence = if request.evidence().is_empty() {
            "(none retrieved)".to_string()
        } else {
            request
                .evidence()
                .iter()
                .map(|passage| format!("[{}] {}", passage.label, passage.text))
                .collect::<Vec<_>>()
                .join("\n")
        };
        self.template
            .replace("{{synthesis}}", request.synthesis_text())
            .replace("{{claims}}", &claims)
            .replace("{{evidence}}", &evidence)
    }
}

impl JudgeBackend for HttpJudge {
    fn id(&self) -> &str {
        "http"
    }

    fn evaluate(&self, request: &JudgeRequest) -> Judgement {
        let prompt = self.render_prompt(request);
        let response = self
            .client
            .post(&self.endpoint)
            .header("content-type", "application/json")
            .body(
                serde_json::to_string(&serde_json::json!({ "prompt": prompt }))
                    .expect("prompt serializes"),
            )
            .send();

        let response = match response {
            Ok(response) => response,
            Err(e) => {
                return Judgement::fallback(JudgeVerdict::safe_default(format!(
                    "judge endpoint error: {e}"
                )))
            }
        };
        if !response.status().is_success() {
            return Judgement::fallback(JudgeVerdict::safe_default(format!(
                "judge endpoint returned status {}",
                response.status().as_u16()
            )));
        }
        match response.text() {
            Ok(body) => parse_judge_output(&body),
            Err(e) => Judgement::fallback(JudgeVerdict::safe_default(format!(
                "judge endpoint error: {e}"
            ))),
        }
    }
}
