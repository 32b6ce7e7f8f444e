//! Claim-verification corpora and the retrieval plumbing around them:
//! JSONL datasets of labelled claims, a deterministic hashed-bag-of-tokens
//! embedder, an exhaustive-scan vector store, and a synthetic corpus
//! generator for harness runs that need controlled routing behavior.

mod embed;
mod records;
mod store;
pub mod synthetic;

pub use embed::{cosine, embed_text, DEFAULT_DIMENSION, MIN_DIMENSION};
pub use records::{load_dataset, read_dataset, ClaimRecord, GoldEvidence, GoldLabel, Verifiable};
pub use store::{
    index_records, DocMetadata, Document, DocumentSource, ScoredDocument, VectorStore,
};
