use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Deserializer;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Gold verification label of a claim record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoldLabel {
    #[serde(rename = "SUPPORTS")]
    Supports,
    #[serde(rename = "REFUTES")]
    Refutes,
    #[serde(rename = "NOT ENOUGH INFO")]
    NotEnoughInfo,
}

impl GoldLabel {
    pub fn label(&self) -> &'static str {
        match self {
            GoldLabel::Supports => "SUPPORTS",
            GoldLabel::Refutes => "REFUTES",
            GoldLabel::NotEnoughInfo => "NOT ENOUGH INFO",
        }
    }
}

/// Whether the claim is verifiable against the evidence corpus at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verifiable {
    #[serde(rename = "VERIFIABLE")]
    Verifiable,
    #[serde(rename = "NOT VERIFIABLE")]
    NotVerifiable,
}

/// One gold evidence sentence: page title, sentence index, sentence text.
/// On the wire this is a three-element array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(String, i64, String)", into = "(String, i64, String)")]
pub struct GoldEvidence {
    pub page_title: String,
    pub sentence_id: i64,
    pub sentence_text: String,
}

impl From<(String, i64, String)> for GoldEvidence {
    fn from((page_title, sentence_id, sentence_text): (String, i64, String)) -> GoldEvidence {
        GoldEvidence {
            page_title,
            sentence_id,
            sentence_text,
        }
    }
}

impl From<GoldEvidence> for (String, i64, String) {
    fn from(e: GoldEvidence) -> (String, i64, String) {
        (e.page_title, e.sentence_id, e.sentence_text)
    }
}

/// One labelled claim with its gold evidence sentences.
///
/// `complementary_gold` is an optional annotation used by synthetic corpora
/// to mark records whose correct routing is the complementary class; natural
/// datasets do not carry it and default to `false`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    #[serde(deserialize_with = "string_or_number")]
    pub id: String,
    #[serde(rename = "claim")]
    pub claim_text: String,
    #[serde(rename = "label")]
    pub gold_label: GoldLabel,
    #[serde(rename = "evidence", default)]
    pub gold_evidence: Vec<GoldEvidence>,
    pub verifiable: Verifiable,
    #[serde(default, skip_serializing_if = "is_false")]
    pub complementary_gold: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Dataset ids appear both as strings and as bare integers in the wild.
fn string_or_number<'de, D: Deserializer<'de>>(deserializer: D) -> Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        N(i64),
    }
    Ok(match Raw::deserialize(deserializer)? {
        Raw::S(s) => s,
        Raw::N(n) => n.to_string(),
    })
}

impl ClaimRecord {
    /// Structural checks beyond what serde enforces: non-empty claim text
    /// and gold evidence present whenever the label asserts a verdict.
    fn validate(&self) -> Result<(), String> {
        if self.claim_text.trim().is_empty() {
            return Err("empty claim text".into());
        }
        if self.gold_label != GoldLabel::NotEnoughInfo && self.gold_evidence.is_empty() {
            return Err(format!(
                "label {} requires at least one gold evidence sentence",
                self.gold_label.label()
            ));
        }
        Ok(())
    }
}

/// Reads every record of a JSONL dataset in file order, reporting the first
/// malformed row by line number.
pub fn read_dataset(path: &Path) -> crate::Result<Vec<ClaimRecord>> {
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(display.clone(), e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(display.clone(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ClaimRecord = serde_json::from_str(&line).map_err(|e| Error::Dataset {
            path: display.clone(),
            line: idx + 1,
            reason: e.to_string(),
        })?;
        record.validate().map_err(|reason| Error::Dataset {
            path: display.clone(),
            line: idx + 1,
            reason,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Draws a deterministic sample of `n` records from a JSONL dataset.
///
/// The same `(path contents, n, seed)` always yields the same records in the
/// same order. Asking for more records than the file holds is an error, and
/// `n = 0` yields an empty sample.
pub fn load_dataset(path: &Path, n: usize, seed: u64) -> crate::Result<Vec<ClaimRecord>> {
    let records = read_dataset(path)?;
    if n > records.len() {
        return Err(Error::SampleTooLarge {
            requested: n,
            available: records.len(),
            path: path.display().to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, records.len(), n);
    Ok(chosen.into_iter().map(|i| records[i].clone()).collect())
}
