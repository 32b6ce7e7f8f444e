use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::embed::{cosine, embed_text};
use super::records::ClaimRecord;
use crate::Error;

/// Where an indexed document came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentSource {
    /// The claim text of a record.
    Claim,
    /// A gold evidence sentence.
    Gold,
}

/// Provenance attached to each indexed document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocMetadata {
    pub src: DocumentSource,
    /// Index of the contributing record in the sampled record list (for gold
    /// sentences shared by several records, the first contributor).
    pub claim_id: usize,
    /// Gold label of the contributing record, for claim documents only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// One embedded passage in the store.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub content: String,
    pub embedding: Vec<f64>,
    pub metadata: DocMetadata,
}

/// A retrieval hit: the document and its cosine similarity to the query.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDocument {
    pub document: Document,
    pub similarity: f64,
}

/// Minimal in-memory vector store with exhaustive cosine scan.
///
/// Writes happen up front (index, then query); reads never mutate, so a
/// populated store can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct VectorStore {
    dimension: usize,
    documents: Vec<Document>,
}

impl VectorStore {
    pub fn new(dimension: usize) -> VectorStore {
        VectorStore {
            dimension,
            documents: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// Inserts a document, rejecting embeddings of the wrong width.
    pub fn insert(&mut self, document: Document) -> crate::Result<()> {
        if document.embedding.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                store: self.dimension,
                query: document.embedding.len(),
            });
        }
        self.documents.push(document);
        Ok(())
    }

    /// Top-k documents by cosine similarity, descending, with ties broken by
    /// ascending document id. A zero query vector matches nothing.
    pub fn top_k(&self, query: &[f64], k: usize) -> crate::Result<Vec<ScoredDocument>> {
        if query.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                store: self.dimension,
                query: query.len(),
            });
        }
        if query.iter().all(|&v| v == 0.0) {
            return Ok(Vec::new());
        }
        let mut scored: Vec<ScoredDocument> = self
            .documents
            .iter()
            .map(|doc| ScoredDocument {
                similarity: cosine(query, &doc.embedding),
                document: doc.clone(),
            })
            .collect();
        scored.sort_by(|a, b| {
            b.similarity
                .partial_cmp(&a.similarity)
                .expect("similarities are finite")
                .then_with(|| a.document.id.cmp(&b.document.id))
        });
        scored.truncate(k);
        Ok(scored)
    }
}

/// Indexes a record list: one document per claim and one per distinct gold
/// evidence sentence (deduplicated by sentence text across the whole list).
/// Returns the number of documents inserted.
pub fn index_records(store: &mut VectorStore, records: &[ClaimRecord]) -> crate::Result<usize> {
    let dimension = store.dimension();
    let mut inserted = 0;
    let mut seen_gold: HashSet<String> = HashSet::new();
    let mut gold_counter = 0usize;

    for (claim_id, record) in records.iter().enumerate() {
        store.insert(Document {
            id: format!("claim:{claim_id:06}"),
            content: record.claim_text.clone(),
            embedding: embed_text(&record.claim_text, dimension),
            metadata: DocMetadata {
                src: DocumentSource::Claim,
                claim_id,
                label: Some(record.gold_label.label().to_string()),
            },
        })?;
        inserted += 1;

        for evidence in &record.gold_evidence {
            if !seen_gold.insert(evidence.sentence_text.clone()) {
                continue;
            }
            store.insert(Document {
                id: format!("gold:{gold_counter:06}"),
                content: evidence.sentence_text.clone(),
                embedding: embed_text(&evidence.sentence_text, dimension),
                metadata: DocMetadata {
                    src: DocumentSource::Gold,
                    claim_id,
                    label: None,
                },
            })?;
            gold_counter += 1;
            inserted += 1;
        }
    }
    Ok(inserted)
}
