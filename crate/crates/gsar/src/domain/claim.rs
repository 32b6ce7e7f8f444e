use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Evidence type attached to a claim, from strongest to weakest support.
///
/// The set is open: judges may emit labels outside the known eight, which are
/// carried verbatim as [`EvidenceType::Unknown`] and scored with the weight
/// map's default weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvidenceType {
    /// Claim restates a tool output directly.
    ToolMatch,
    /// Claim cites a concrete datum (value, identifier, timestamp).
    SpecificData,
    /// Claim matches the triggering signal itself.
    SignalMatch,
    /// Claim reports the absence of something that was actually checked.
    NegEvidence,
    /// Claim adds correct context that no single evidence item states.
    ComplementaryFinding,
    /// Claim aggregates several evidence items.
    Synthesis,
    /// Claim is an interpretive step beyond the evidence.
    Inference,
    /// Claim leans on background domain knowledge.
    Domain,
    /// Any label outside the known set, preserved as written.
    Unknown(String),
}

impl EvidenceType {
    const KNOWN: [(&'static str, EvidenceType); 8] = [
        ("tool_match", EvidenceType::ToolMatch),
        ("specific_data", EvidenceType::SpecificData),
        ("signal_match", EvidenceType::SignalMatch),
        ("neg_evidence", EvidenceType::NegEvidence),
        ("complementary_finding", EvidenceType::ComplementaryFinding),
        ("synthesis", EvidenceType::Synthesis),
        ("inference", EvidenceType::Inference),
        ("domain", EvidenceType::Domain),
    ];

    /// Canonical label, as used on the wire and in weight maps.
    pub fn label(&self) -> &str {
        match self {
            EvidenceType::ToolMatch => "tool_match",
            EvidenceType::SpecificData => "specific_data",
            EvidenceType::SignalMatch => "signal_match",
            EvidenceType::NegEvidence => "neg_evidence",
            EvidenceType::ComplementaryFinding => "complementary_finding",
            EvidenceType::Synthesis => "synthesis",
            EvidenceType::Inference => "inference",
            EvidenceType::Domain => "domain",
            EvidenceType::Unknown(label) => label,
        }
    }

    /// Total mapping from a label to an evidence type. Known labels map to
    /// their variant, so `Unknown` never shadows a known label.
    pub fn from_label(label: &str) -> EvidenceType {
        for (known, ty) in EvidenceType::KNOWN.iter() {
            if *known == label {
                return ty.clone();
            }
        }
        EvidenceType::Unknown(label.to_string())
    }

    /// The eight known types in descending default-weight order.
    pub fn known() -> impl Iterator<Item = EvidenceType> {
        EvidenceType::KNOWN.iter().map(|(_, ty)| ty.clone())
    }
}

impl std::fmt::Display for EvidenceType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for EvidenceType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for EvidenceType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let label = String::deserialize(deserializer)?;
        Ok(EvidenceType::from_label(&label))
    }
}

/// Pointer from a claim back into the evidence it rests on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceRef {
    /// A field of a raw tool invocation's output.
    ToolOutput {
        tool_id: String,
        step_id: String,
        field_path: String,
    },
    /// A field of a specialist step's structured output.
    StepOutput {
        specialist_id: String,
        step_id: String,
        field_path: String,
    },
    /// A field of the triggering signal.
    Signal {
        signal_id: String,
        field_path: String,
    },
    /// Another claim, for synthesis chains.
    Claim { claim_id: String },
    /// A retrieved passage in a document-grounded setting.
    Passage { document_id: String },
}

impl EvidenceRef {
    fn id_fields(&self) -> Vec<(&'static str, &str)> {
        match self {
            EvidenceRef::ToolOutput {
                tool_id, step_id, ..
            } => vec![("tool_id", tool_id), ("step_id", step_id)],
            EvidenceRef::StepOutput {
                specialist_id,
                step_id,
                ..
            } => vec![("specialist_id", specialist_id), ("step_id", step_id)],
            EvidenceRef::Signal { signal_id, .. } => vec![("signal_id", signal_id)],
            EvidenceRef::Claim { claim_id } => vec![("claim_id", claim_id)],
            EvidenceRef::Passage { document_id } => vec![("document_id", document_id)],
        }
    }

    /// Checks that every id field is non-empty.
    pub fn validate(&self) -> crate::Result<()> {
        for (name, value) in self.id_fields() {
            if value.trim().is_empty() {
                return Err(Error::invalid("evidence ref", format!("empty {name}")));
            }
        }
        Ok(())
    }
}

/// Normalized claim identity: trimmed, internal whitespace collapsed to a
/// single space, case folded. Two claims with the same normalized text are
/// the same claim for partition-disjointness purposes.
pub fn normalize_claim_text(text: &str) -> String {
    text.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// One atomic claim of a synthesized report.
///
/// On the wire a claim is `{"text": ..., "type": ..., "evidence_refs": [...]}`;
/// the type label is open-ended and evidence refs may be empty (a judge can
/// ground a claim without naming the exact field it matched).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClaimWire", into = "ClaimWire")]
pub struct Claim {
    text: String,
    evidence_type: EvidenceType,
    evidence_refs: Vec<EvidenceRef>,
}

impl Claim {
    /// Builds a claim, rejecting empty text and malformed refs.
    pub fn new(
        text: impl Into<String>,
        evidence_type: EvidenceType,
        evidence_refs: Vec<EvidenceRef>,
    ) -> crate::Result<Claim> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::invalid("claim", "empty text"));
        }
        for r in &evidence_refs {
            r.validate()?;
        }
        Ok(Claim {
            text,
            evidence_type,
            evidence_refs,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn evidence_type(&self) -> &EvidenceType {
        &self.evidence_type
    }

    pub fn evidence_refs(&self) -> &[EvidenceRef] {
        &self.evidence_refs
    }

    /// Identity under which partition disjointness is checked.
    pub fn identity(&self) -> String {
        normalize_claim_text(&self.text)
    }

    /// Same claim text and refs with a different evidence type.
    pub fn with_evidence_type(&self, evidence_type: EvidenceType) -> Claim {
        Claim {
            text: self.text.clone(),
            evidence_type,
            evidence_refs: self.evidence_refs.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ClaimWire {
    text: String,
    #[serde(rename = "type", alias = "evidence_type")]
    evidence_type: EvidenceType,
    #[serde(default)]
    evidence_refs: Vec<EvidenceRef>,
}

impl TryFrom<ClaimWire> for Claim {
    type Error = Error;

    fn try_from(wire: ClaimWire) -> crate::Result<Claim> {
        Claim::new(wire.text, wire.evidence_type, wire.evidence_refs)
    }
}

impl From<Claim> for ClaimWire {
    fn from(claim: Claim) -> ClaimWire {
        ClaimWire {
            text: claim.text,
            evidence_type: claim.evidence_type,
            evidence_refs: claim.evidence_refs,
        }
    }
}
