//! Per-record run traces and their JSONL form.
//!
//! One trace is written per `(record, variant)` pair. Traces are the ground
//! truth the metrics, deltas, and the audit are computed from, so they carry
//! enough to recompute everything: the partition contents (as atoms), the
//! score, the decision, and how the judge output was obtained.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{Decision, EvidenceType, Partition, PartitionClass};
use crate::harness::variant::Variant;
use crate::judge::parse_jsonl_line;
use crate::Error;

/// One claim as it sat in the (possibly variant-transformed) partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAtom {
    pub text: String,
    pub class: PartitionClass,
    pub evidence_type: EvidenceType,
}

/// The outcome of judging one record under one variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub record_id: String,
    pub variant: Variant,
    pub gold_label: String,
    /// Whether the dataset marks this record as having a genuine
    /// complementary counterpart.
    pub complementary_gold: bool,
    /// Grounded / ungrounded / contradicted / complementary counts, in that
    /// order, after the variant's partition transform.
    pub partition_counts: [usize; 4],
    pub atoms: Vec<TraceAtom>,
    pub score: f64,
    pub decision: Decision,
    pub replans_used: u32,
    pub judge_backend: String,
    /// 1 = strict parse, 2 = lenient recovery, 3 = fallback.
    pub parse_stage: u8,
    /// True when the judge abstained; the decision is then a forced replan.
    pub abstained: bool,
}

/// Flattens a partition into trace atoms, class by class in partition
/// order.
pub fn atoms_of(partition: &Partition) -> Vec<TraceAtom> {
    partition
        .iter_with_class()
        .map(|(claim, class)| TraceAtom {
            text: claim.text().to_string(),
            class,
            evidence_type: claim.evidence_type().clone(),
        })
        .collect()
}

/// Serializes traces as JSONL, one trace per line, in input order.
pub fn traces_to_jsonl(traces: &[RunTrace]) -> String {
    let mut out = String::new();
    for trace in traces {
        out.push_str(&serde_json::to_string(trace).expect("traces serialize"));
        out.push('\n');
    }
    out
}

/// Writes traces as a JSONL file.
pub fn write_traces(path: &Path, traces: &[RunTrace]) -> crate::Result<()> {
    std::fs::write(path, traces_to_jsonl(traces))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads traces back from a JSONL file, reporting the offending line on
/// malformed input.
pub fn read_traces(path: &Path) -> crate::Result<Vec<RunTrace>> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(shown.clone(), e))?;
    let mut traces = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(trace) = parse_jsonl_line(&shown, idx + 1, line)? {
            traces.push(trace);
        }
    }
    Ok(traces)
}
