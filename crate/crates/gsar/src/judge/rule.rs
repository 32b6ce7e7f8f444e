//! Deterministic retrieval-driven judge for harness runs.
//!
//! Routing follows the record's gold label: SUPPORTS claims are grounded,
//! REFUTES claims are contradicted, and NOT ENOUGH INFO claims are
//! ungrounded unless retrieval surfaces a strong non-gold neighbour, in
//! which case the claim is routed complementary. Evidence typing checks for
//! a verbatim gold sentence among the retrieved passages: present means
//! `specific_data` with a passage reference, absent means `inference`.

use crate::corpus::{ClaimRecord, DocumentSource, GoldLabel, ScoredDocument};
use crate::domain::{
    normalize_claim_text, Claim, EvidenceRef, EvidenceType, GsarConfig, JudgeVerdict, Partition,
    PartitionClass,
};
use crate::judge::{JudgeRequest, Judgement, RecordJudge};
use crate::scoring::gsar_score;

/// Default cosine threshold above which a non-gold neighbour makes a
/// NOT ENOUGH INFO claim complementary rather than ungrounded.
pub const DEFAULT_KAPPA: f64 = 0.55;

/// The rule-based judge. It reads the record and the retrieval results
/// directly, so unlike request-level backends it sees gold labels; this is
/// exactly why it is wired in as a [`RecordJudge`] and never receives bare
/// [`JudgeRequest`]s of unknown provenance.
#[derive(Debug, Clone)]
pub struct RuleBasedJudge {
    kappa: f64,
    config: GsarConfig,
}

impl Default for RuleBasedJudge {
    fn default() -> RuleBasedJudge {
        RuleBasedJudge::new(DEFAULT_KAPPA)
    }
}

impl RuleBasedJudge {
    pub fn new(kappa: f64) -> RuleBasedJudge {
        RuleBasedJudge {
            kappa,
            config: GsarConfig::default(),
        }
    }

    /// Judge whose own audit score is computed under the given config.
    pub fn with_config(kappa: f64, config: GsarConfig) -> RuleBasedJudge {
        RuleBasedJudge { kappa, config }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    fn verdict_for(&self, record: &ClaimRecord, retrieved: &[ScoredDocument]) -> JudgeVerdict {
        // A gold sentence retrieved verbatim upgrades the claim's evidence
        // type to specific_data and pins a passage reference.
        let verbatim_gold = retrieved.iter().find(|hit| {
            hit.document.metadata.src == DocumentSource::Gold
                && record
                    .gold_evidence
                    .iter()
                    .any(|gold| gold.sentence_text == hit.document.content)
        });
        let (evidence_type, evidence_refs) = match verbatim_gold {
            Some(hit) => (
                EvidenceType::SpecificData,
                vec![EvidenceRef::Passage {
                    document_id: hit.document.id.clone(),
                }],
            ),
            None => (EvidenceType::Inference, Vec::new()),
        };

        // Strongest retrieved passage that is neither gold evidence nor the
        // record's own claim row; retrieval order is already descending.
        let claim_identity = normalize_claim_text(&record.claim_text);
        let neighbour = retrieved.iter().find(|hit| {
            hit.document.metadata.src != DocumentSource::Gold
                && normalize_claim_text(&hit.document.content) != claim_identity
        });

        let (class, claim) = match record.gold_label {
            GoldLabel::Supports => (
                PartitionClass::Grounded,
                Claim::new(&record.claim_text, evidence_type, evidence_refs),
            ),
            GoldLabel::Refutes => (
                PartitionClass::Contradicted,
                Claim::new(&record.claim_text, evidence_type, evidence_refs),
            ),
            GoldLabel::NotEnoughInfo => match neighbour {
                Some(hit) if hit.similarity >= self.kappa => (
                    PartitionClass::Complementary,
                    Claim::new(
                        &record.claim_text,
                        EvidenceType::ComplementaryFinding,
                        vec![EvidenceRef::Passage {
                            document_id: hit.document.id.clone(),
                        }],
                    ),
                ),
                _ => (
                    PartitionClass::Ungrounded,
                    Claim::new(&record.claim_text, EvidenceType::Inference, vec![]),
                ),
            },
        };
        let claim = claim.expect("record claim text is non-empty");
        let partition = Partition::singleton(claim, class);

        let judge_score = gsar_score(&partition, &self.config).score;
        let is_grounded = matches!(
            class,
            PartitionClass::Grounded | PartitionClass::Complementary
        );
        let gaps = match class {
            PartitionClass::Ungrounded => vec!["no sufficiently similar passage retrieved".into()],
            _ => Vec::new(),
        };
        let contradictions = match class {
            PartitionClass::Contradicted => record
                .gold_evidence
                .first()
                .map(|gold| vec![gold.sentence_text.clone()])
                .unwrap_or_default(),
            _ => Vec::new(),
        };
        let explanation = format!(
            "label routing placed the claim in the {} class",
            class.label()
        );

        JudgeVerdict::resolved(
            judge_score,
            is_grounded,
            partition,
            gaps,
            contradictions,
            false,
            None,
            explanation,
        )
        .expect("rule judge builds valid verdicts")
    }
}

impl RecordJudge for RuleBasedJudge {
    fn backend_id(&self) -> &str {
        "rule"
    }

    fn judge_record(
        &self,
        record: &ClaimRecord,
        retrieved: &[ScoredDocument],
        _request: &JudgeRequest,
    ) -> Judgement {
        Judgement::native(self.verdict_for(record, retrieved))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{embed_text, index_records, synthetic, VectorStore};

    fn retrieve(store: &VectorStore, record: &ClaimRecord, k: usize) -> Vec<ScoredDocument> {
        let query = embed_text(&record.claim_text, store.dimension());
        store
            .top_k(&query, k + 1)
            .unwrap()
            .into_iter()
            .filter(|hit| {
                normalize_claim_text(&hit.document.content)
                    != normalize_claim_text(&record.claim_text)
            })
            .take(k)
            .collect()
    }

    fn judged(records: &[ClaimRecord], idx: usize) -> JudgeVerdict {
        let mut store = VectorStore::new(256);
        index_records(&mut store, records).unwrap();
        let judge = RuleBasedJudge::new(DEFAULT_KAPPA);
        let record = &records[idx];
        let request = JudgeRequest::new(record.claim_text.clone(), vec![], vec![]);
        judge
            .judge_record(record, &retrieve(&store, record, 5), &request)
            .verdict
    }

    #[test]
    fn supports_with_verbatim_gold_grounds_as_specific_data() {
        let records = synthetic::generate(5, 42);
        let verdict = judged(&records, 0);
        let grounded = verdict.partition().grounded();
        assert_eq!(verdict.partition().counts(), (1, 0, 0, 0));
        assert_eq!(grounded[0].evidence_type(), &EvidenceType::SpecificData);
        assert!(matches!(
            grounded[0].evidence_refs()[0],
            EvidenceRef::Passage { .. }
        ));
        assert_eq!(verdict.judge_score(), 1.0);
        assert!(verdict.is_grounded());
    }

    #[test]
    fn refutes_routes_contradicted_and_cites_the_gold_sentence() {
        let records = synthetic::generate(5, 42);
        let verdict = judged(&records, 1);
        assert_eq!(verdict.partition().counts(), (0, 0, 1, 0));
        assert_eq!(
            verdict.partition().contradicted()[0].evidence_type(),
            &EvidenceType::SpecificData
        );
        assert_eq!(verdict.contradictions().len(), 1);
        assert_eq!(verdict.judge_score(), 0.0);
    }

    #[test]
    fn nei_with_near_neighbour_routes_complementary() {
        let records = synthetic::generate(5, 42);
        for idx in [2, 3] {
            let verdict = judged(&records, idx);
            assert_eq!(verdict.partition().counts(), (0, 0, 0, 1), "record {idx}");
            assert_eq!(
                verdict.partition().complementary()[0].evidence_type(),
                &EvidenceType::ComplementaryFinding
            );
        }
    }

    #[test]
    fn nei_without_neighbour_routes_ungrounded() {
        let records = synthetic::generate(5, 42);
        let verdict = judged(&records, 4);
        assert_eq!(verdict.partition().counts(), (0, 1, 0, 0));
        assert_eq!(
            verdict.partition().ungrounded()[0].evidence_type(),
            &EvidenceType::Inference
        );
        assert_eq!(verdict.judge_score(), 0.0);
        assert!(!verdict.is_grounded());
    }

    #[test]
    fn supports_without_retrieved_gold_downgrades_to_inference() {
        let records = synthetic::generate(5, 42);
        let record = &records[0];
        let request = JudgeRequest::new(record.claim_text.clone(), vec![], vec![]);
        let judge = RuleBasedJudge::new(DEFAULT_KAPPA);
        // Empty retrieval: nothing verbatim, no neighbour.
        let verdict = judge.judge_record(record, &[], &request).verdict;
        assert_eq!(
            verdict.partition().grounded()[0].evidence_type(),
            &EvidenceType::Inference
        );
    }
}
