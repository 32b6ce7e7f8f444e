//! Per-variant metrics computed from run traces.
//!
//! Denominator-free rates are reported as `Option` rather than silently
//! defaulting to zero: a dataset with no REFUTES records has no
//! contradiction-detection rate, it does not have a rate of 0.

use serde::{Deserialize, Serialize};

use crate::domain::Decision;
use crate::harness::trace::RunTrace;
use crate::harness::variant::Variant;

/// Which denominator the complementary-recognition rate was computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementaryMode {
    /// Records annotated `complementary_gold`: the rate is against dataset
    /// ground truth.
    GoldRelative,
    /// No annotations available: the rate is the share of NOT ENOUGH INFO
    /// records the judge routed complementary, a judge-relative view.
    JudgeRelative,
}

/// Aggregate metrics for one variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantMetrics {
    pub variant: Variant,
    pub records: usize,
    pub proceed: usize,
    pub regenerate: usize,
    pub replan: usize,
    /// Share of records that proceeded.
    pub proceed_rate: f64,
    /// Mean replans among records that proceeded; `None` when none did.
    pub mean_replans_to_proceed: Option<f64>,
    pub mean_score: f64,
    /// Share of gold-REFUTES records with at least one contradicted claim;
    /// `None` when the dataset has no REFUTES records.
    pub contradiction_detection_rate: Option<f64>,
    /// Share of eligible records with at least one complementary claim;
    /// `None` when no record is eligible under either mode.
    pub complementary_recognition_rate: Option<f64>,
    pub complementary_mode: Option<ComplementaryMode>,
    pub abstentions: usize,
    /// Traces whose judge output needed the stage-3 fallback.
    pub fallback_parses: usize,
}

const REFUTES: &str = "REFUTES";
const NOT_ENOUGH_INFO: &str = "NOT ENOUGH INFO";

/// Computes metrics over the traces of a single variant. Panics in debug
/// builds if traces from another variant slip in.
pub fn compute_metrics(variant: Variant, traces: &[RunTrace]) -> VariantMetrics {
    debug_assert!(traces.iter().all(|t| t.variant == variant));
    let records = traces.len();
    let count = |d: Decision| traces.iter().filter(|t| t.decision == d).count();
    let proceed = count(Decision::Proceed);
    let regenerate = count(Decision::Regenerate);
    let replan = count(Decision::Replan);

    let proceed_rate = if records == 0 {
        0.0
    } else {
        proceed as f64 / records as f64
    };
    let mean_replans_to_proceed = (proceed > 0).then(|| {
        traces
            .iter()
            .filter(|t| t.decision == Decision::Proceed)
            .map(|t| t.replans_used as f64)
            .sum::<f64>()
            / proceed as f64
    });
    let mean_score = if records == 0 {
        0.0
    } else {
        traces.iter().map(|t| t.score).sum::<f64>() / records as f64
    };

    let refutes: Vec<&RunTrace> = traces.iter().filter(|t| t.gold_label == REFUTES).collect();
    let contradiction_detection_rate = (!refutes.is_empty()).then(|| {
        let hit = refutes.iter().filter(|t| t.partition_counts[2] > 0).count();
        hit as f64 / refutes.len() as f64
    });

    let (complementary_recognition_rate, complementary_mode) = complementary_rate(traces);

    VariantMetrics {
        variant,
        records,
        proceed,
        regenerate,
        replan,
        proceed_rate,
        mean_replans_to_proceed,
        mean_score,
        contradiction_detection_rate,
        complementary_recognition_rate,
        complementary_mode,
        abstentions: traces.iter().filter(|t| t.abstained).count(),
        fallback_parses: traces.iter().filter(|t| t.parse_stage == 3).count(),
    }
}

/// Complementary recognition against gold annotations when the dataset has
/// them, against the judge's own NEI routing otherwise.
fn complementary_rate(traces: &[RunTrace]) -> (Option<f64>, Option<ComplementaryMode>) {
    let gold: Vec<&RunTrace> = traces.iter().filter(|t| t.complementary_gold).collect();
    if !gold.is_empty() {
        let hit = gold.iter().filter(|t| t.partition_counts[3] > 0).count();
        return (
            Some(hit as f64 / gold.len() as f64),
            Some(ComplementaryMode::GoldRelative),
        );
    }
    let nei: Vec<&RunTrace> = traces
        .iter()
        .filter(|t| t.gold_label == NOT_ENOUGH_INFO)
        .collect();
    if !nei.is_empty() {
        let hit = nei.iter().filter(|t| t.partition_counts[3] > 0).count();
        return (
            Some(hit as f64 / nei.len() as f64),
            Some(ComplementaryMode::JudgeRelative),
        );
    }
    (None, None)
}
