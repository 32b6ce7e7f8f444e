//! Synthetic claim corpus with controlled retrieval geometry.
//!
//! Records come in blocks of five: a SUPPORTS record and a REFUTES record
//! whose gold sentences share most of their tokens with the claim (so the
//! gold sentence is retrieved and matched verbatim), a pair of NOT ENOUGH
//! INFO records that are near-duplicates of each other (so each retrieves
//! the other as a strong non-gold neighbour and routes complementary), and
//! one isolated NOT ENOUGH INFO record with record-unique vocabulary (no
//! neighbour above any reasonable routing threshold). The paired records
//! carry the `complementary_gold` annotation.
//!
//! Output is a pure function of `(n, seed)`; the seed only varies the
//! numeric filler inside claim texts.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::records::{ClaimRecord, GoldEvidence, GoldLabel, Verifiable};
use crate::Error;

/// Generates `n` records. Block structure repeats every five records:
/// SUPPORTS, REFUTES, paired NEI, paired NEI, isolated NEI.
pub fn generate(n: usize, seed: u64) -> Vec<ClaimRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    let mut block = 0usize;
    while records.len() < n {
        let checksum: u32 = rng.gen_range(1000..9999);
        let quota: u32 = rng.gen_range(10..95);

        let supports_claim =
            format!("service alpha{block}a alpha{block}b alpha{block}c reported checksum {checksum} healthy");
        push(
            &mut records,
            n,
            ClaimRecord {
                id: String::new(),
                claim_text: supports_claim.clone(),
                gold_label: GoldLabel::Supports,
                gold_evidence: vec![GoldEvidence {
                    page_title: format!("alpha{block}"),
                    sentence_id: 0,
                    sentence_text: format!("{supports_claim} according to audit logs"),
                }],
                verifiable: Verifiable::Verifiable,
                complementary_gold: false,
            },
        );

        let refutes_claim =
            format!("cluster beta{block}a beta{block}b beta{block}c stayed under quota {quota}");
        push(
            &mut records,
            n,
            ClaimRecord {
                id: String::new(),
                claim_text: refutes_claim,
                gold_label: GoldLabel::Refutes,
                gold_evidence: vec![GoldEvidence {
                    page_title: format!("beta{block}"),
                    sentence_id: 0,
                    sentence_text: format!(
                        "telemetry shows cluster beta{block}a beta{block}b beta{block}c far over quota {quota}"
                    ),
                }],
                verifiable: Verifiable::Verifiable,
                complementary_gold: false,
            },
        );

        for suffix in ["deploy", "rollout"] {
            push(
                &mut records,
                n,
                ClaimRecord {
                    id: String::new(),
                    claim_text: format!(
                        "gamma{block}a gamma{block}b gamma{block}c gamma{block}d gamma{block}e latency climbed {suffix}"
                    ),
                    gold_label: GoldLabel::NotEnoughInfo,
                    gold_evidence: Vec::new(),
                    verifiable: Verifiable::NotVerifiable,
                    complementary_gold: true,
                },
            );
        }

        push(
            &mut records,
            n,
            ClaimRecord {
                id: String::new(),
                claim_text: format!(
                    "delta{block}a delta{block}b delta{block}c delta{block}d delta{block}e drift unexplained"
                ),
                gold_label: GoldLabel::NotEnoughInfo,
                gold_evidence: Vec::new(),
                verifiable: Verifiable::NotVerifiable,
                complementary_gold: false,
            },
        );

        block += 1;
    }
    records
}

/// Appends up to the requested size, assigning sequential `syn-NNNN` ids.
fn push(records: &mut Vec<ClaimRecord>, n: usize, mut record: ClaimRecord) {
    if records.len() < n {
        record.id = format!("syn-{:04}", records.len());
        records.push(record);
    }
}

/// Serializes records as JSONL, one record per line.
pub fn to_jsonl(records: &[ClaimRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Writes records as a JSONL dataset file.
pub fn write_jsonl(path: &Path, records: &[ClaimRecord]) -> crate::Result<()> {
    let mut file =
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(to_jsonl(records).as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cosine, embed_text};

    #[test]
    fn generation_is_deterministic_and_sized() {
        let a = generate(23, 7);
        let b = generate(23, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 23);
        assert_ne!(a, generate(23, 8));
    }

    #[test]
    fn block_mix_has_the_expected_label_shape() {
        let records = generate(200, 42);
        let supports = records
            .iter()
            .filter(|r| r.gold_label == GoldLabel::Supports)
            .count();
        let refutes = records
            .iter()
            .filter(|r| r.gold_label == GoldLabel::Refutes)
            .count();
        let nei = records
            .iter()
            .filter(|r| r.gold_label == GoldLabel::NotEnoughInfo)
            .count();
        let paired = records.iter().filter(|r| r.complementary_gold).count();
        assert_eq!(supports, 40);
        assert_eq!(refutes, 40);
        assert_eq!(nei, 120);
        assert_eq!(paired, 80);
    }

    #[test]
    fn paired_records_are_near_neighbours_and_isolated_ones_are_not() {
        let records = generate(10, 42);
        let dim = 256;
        let twin_a = embed_text(&records[2].claim_text, dim);
        let twin_b = embed_text(&records[3].claim_text, dim);
        assert!(cosine(&twin_a, &twin_b) > 0.8);

        let lone = embed_text(&records[4].claim_text, dim);
        for (i, record) in records.iter().enumerate() {
            if i == 4 {
                continue;
            }
            let other = embed_text(&record.claim_text, dim);
            assert!(
                cosine(&lone, &other) < 0.4,
                "record {i} too close to the isolated record"
            );
        }
    }

    #[test]
    fn round_trips_through_the_dataset_reader() {
        let records = generate(12, 42);
        let file = tempfile::NamedTempFile::new().unwrap();
        write_jsonl(file.path(), &records).unwrap();
        let back = crate::corpus::read_dataset(file.path()).unwrap();
        assert_eq!(back, records);
    }
}
