//! Grounded-score assessment and replanning (GSAR) for synthesized reports.
//!
//! An investigation pipeline turns a signal into a synthesized report whose
//! atomic claims a judge sorts into four classes: grounded, ungrounded,
//! contradicted, and complementary. This crate scores that partition with a
//! weighted grounding ratio, maps the score to a proceed / regenerate / replan
//! decision, and drives a bounded replanning loop around pluggable plan and
//! synthesis hooks. A small evaluation harness replays ablation variants of
//! the scorer over retrieval corpora and audits the resulting traces.
//!
//! The crate is split along those lines:
//!
//! - [`domain`]: claims, partitions, judge verdicts, and configuration
//! - [`scoring`]: the grounding ratio and the decision thresholds
//! - [`judge`]: judge protocol, output parsing, and judge backends
//! - [`corpus`]: claim datasets, hashed embeddings, and a tiny vector store
//! - [`replan`]: the bounded regenerate/replan control loop
//! - [`harness`]: ablation variants, metrics, bootstrap CIs, trace audits

pub mod corpus;
pub mod domain;
mod error;
pub mod harness;
pub mod judge;
pub mod replan;
pub mod scoring;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
