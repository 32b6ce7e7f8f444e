//! Core vocabulary: claims and their evidence types, the four-class
//! partition, judge verdicts in their wire shape, decisions, and the scoring
//! configuration with its defaults.

mod claim;
mod config;
mod partition;
mod report;
mod verdict;

pub use claim::{normalize_claim_text, Claim, EvidenceRef, EvidenceType};
pub use config::{GsarConfig, Thresholds, WeightMap};
pub use partition::{Partition, PartitionClass};
pub use report::{Decision, InvestigationResult, Report, VerdictStep};
pub use verdict::{DecisionStatus, JudgeVerdict};
