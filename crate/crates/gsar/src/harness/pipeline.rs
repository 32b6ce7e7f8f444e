//! The record-level evaluation pipeline.
//!
//! For each record: embed the claim, retrieve its nearest passages (the
//! record's own claim document excluded), judge once, then score the single
//! shared verdict under every requested variant. One judge call per record
//! keeps variant comparisons paired and keeps the expensive step linear in
//! the dataset, not in the variant count.
//!
//! Judging runs on a rayon pool; everything downstream of the judge is
//! deterministic, so two runs over the same inputs produce byte-identical
//! traces.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{embed_text, index_records, ClaimRecord, ScoredDocument, VectorStore};
use crate::corpus::{DocumentSource, DEFAULT_DIMENSION};
use crate::domain::{Claim, Decision, EvidenceType, GsarConfig};
use crate::harness::audit::{fingerprint_audit, AuditReport};
use crate::harness::metrics::{compute_metrics, VariantMetrics};
use crate::harness::stats::{
    paired_bootstrap_ci, spearman_rho, BootstrapCi, DEFAULT_BOOTSTRAP_RESAMPLES,
};
use crate::harness::trace::{atoms_of, RunTrace};
use crate::harness::variant::{evaluate_variant, CollapseTarget, Variant};
use crate::judge::{EvidencePassage, JudgeRequest, Judgement, RecordJudge};
use crate::Error;

/// Knobs for one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Variants to score, in output order. Must include `default` for
    /// deltas to be computed.
    pub variants: Vec<Variant>,
    /// Passages retrieved per record (after self-exclusion).
    pub k: usize,
    /// Seed for the bootstrap resampler.
    pub seed: u64,
    /// Embedding dimension.
    pub dimension: usize,
    /// Where collapsing variants put complementary claims.
    pub collapse: CollapseTarget,
    pub config: GsarConfig,
}

impl Default for PipelineOptions {
    fn default() -> PipelineOptions {
        PipelineOptions {
            variants: Variant::ALL.to_vec(),
            k: 5,
            seed: 42,
            dimension: DEFAULT_DIMENSION,
            collapse: CollapseTarget::default(),
            config: GsarConfig::default(),
        }
    }
}

/// Run provenance recorded alongside the metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryMeta {
    pub records: usize,
    pub variants: Vec<Variant>,
    pub k: usize,
    pub seed: u64,
    pub dimension: usize,
    pub judge_backend: String,
    /// Wall-clock timestamp, injected by the caller at write time so that
    /// library output stays deterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<String>,
}

/// A variant's paired comparison against the default variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantDelta {
    pub variant: Variant,
    pub baseline: Variant,
    /// Per-record score delta (variant − baseline), with bootstrap CI.
    pub mean_score_delta: BootstrapCi,
    pub proceed_rate_delta: f64,
    /// Spearman correlation between the variant's and the baseline's
    /// per-record scores; `None` when undefined (constant scores or
    /// fewer than three records).
    pub score_rank_correlation: Option<f64>,
}

/// The full run summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub meta: SummaryMeta,
    pub variants: Vec<VariantMetrics>,
    pub deltas: Vec<VariantDelta>,
    pub audit: AuditReport,
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub traces: Vec<RunTrace>,
    pub audit: AuditReport,
    /// `None` when the audit failed: corrupted traces are not summarized.
    pub summary: Option<SummaryReport>,
}

/// Runs retrieval + judging + variant scoring, producing one trace per
/// `(variant, record)` in variant-major order.
pub fn run_traces(
    records: &[ClaimRecord],
    judge: &dyn RecordJudge,
    options: &PipelineOptions,
) -> crate::Result<Vec<RunTrace>> {
    validate_options(records, options)?;

    let mut store = VectorStore::new(options.dimension);
    index_records(&mut store, records)?;

    let judged: Vec<Judgement> = records
        .par_iter()
        .enumerate()
        .map(|(idx, record)| judge_one(record, idx, &store, judge, options))
        .collect::<crate::Result<Vec<_>>>()?;

    let mut traces = Vec::with_capacity(records.len() * options.variants.len());
    for &variant in &options.variants {
        for (record, judgement) in records.iter().zip(&judged) {
            let verdict = &judgement.verdict;
            let (partition, score, mut decision) = evaluate_variant(
                variant,
                verdict.partition(),
                &options.config,
                options.collapse,
            );
            let abstained = verdict.is_abstain();
            if abstained {
                // An unevaluated report must not ship on the strength of a
                // placeholder score.
                decision = Decision::Replan;
            }
            traces.push(RunTrace {
                record_id: record.id.clone(),
                variant,
                gold_label: record.gold_label.label().to_string(),
                complementary_gold: record.complementary_gold,
                partition_counts: counts_array(&partition),
                atoms: atoms_of(&partition),
                score,
                decision,
                replans_used: 0,
                judge_backend: judge.backend_id().to_string(),
                parse_stage: judgement.parse_stage.as_u8(),
                abstained,
            });
        }
    }
    Ok(traces)
}

fn validate_options(records: &[ClaimRecord], options: &PipelineOptions) -> crate::Result<()> {
    if records.is_empty() {
        return Err(Error::InsufficientData {
            what: "pipeline records",
            min: 1,
            got: 0,
        });
    }
    if options.variants.is_empty() {
        return Err(Error::invalid(
            "variants",
            "at least one variant is required",
        ));
    }
    for (i, variant) in options.variants.iter().enumerate() {
        if options.variants[..i].contains(variant) {
            return Err(Error::invalid(
                "variants",
                format!("variant {variant} listed twice"),
            ));
        }
    }
    if options.k == 0 {
        return Err(Error::invalid("k", "retrieval depth must be at least 1"));
    }
    Ok(())
}

/// Retrieves for one record and judges it once.
fn judge_one(
    record: &ClaimRecord,
    idx: usize,
    store: &VectorStore,
    judge: &dyn RecordJudge,
    options: &PipelineOptions,
) -> crate::Result<Judgement> {
    // Fetch one extra hit, then drop the record's own claim document: the
    // claim always matches itself at cosine 1.0, which would make every
    // record its own best "evidence".
    let query = embed_text(&record.claim_text, options.dimension);
    let retrieved: Vec<ScoredDocument> = store
        .top_k(&query, options.k + 1)?
        .into_iter()
        .filter(|hit| {
            !(hit.document.metadata.src == DocumentSource::Claim
                && hit.document.metadata.claim_id == idx)
        })
        .take(options.k)
        .collect();

    let evidence = retrieved
        .iter()
        .map(|hit| EvidencePassage {
            label: hit.document.id.clone(),
            text: hit.document.content.clone(),
        })
        .collect();
    let claims = vec![Claim::new(
        &record.claim_text,
        EvidenceType::Inference,
        vec![],
    )?];
    let request = JudgeRequest::new(record.claim_text.clone(), claims, evidence);
    Ok(judge.judge_record(record, &retrieved, &request))
}

fn counts_array(partition: &crate::domain::Partition) -> [usize; 4] {
    let (g, u, x, k) = partition.counts();
    [g, u, x, k]
}

/// Builds the summary from finished traces. The caller decides whether the
/// audit outcome permits this (see [`run_pipeline`]).
pub fn build_summary(
    traces: &[RunTrace],
    options: &PipelineOptions,
    judge_backend: &str,
    audit: AuditReport,
) -> crate::Result<SummaryReport> {
    let per_variant: Vec<Vec<&RunTrace>> = options
        .variants
        .iter()
        .map(|&variant| traces.iter().filter(|t| t.variant == variant).collect())
        .collect();

    let mut variants = Vec::with_capacity(options.variants.len());
    for (&variant, group) in options.variants.iter().zip(&per_variant) {
        let owned: Vec<RunTrace> = group.iter().map(|&t| t.clone()).collect();
        variants.push(compute_metrics(variant, &owned));
    }

    let mut deltas = Vec::new();
    if let Some(base_idx) = options.variants.iter().position(|&v| v == Variant::Default) {
        let base_scores: Vec<f64> = per_variant[base_idx].iter().map(|t| t.score).collect();
        let base_rate = variants[base_idx].proceed_rate;
        for (i, &variant) in options.variants.iter().enumerate() {
            if variant == Variant::Default {
                continue;
            }
            let scores: Vec<f64> = per_variant[i].iter().map(|t| t.score).collect();
            if scores.len() != base_scores.len() {
                return Err(Error::invalid(
                    "traces",
                    format!(
                        "variant {variant} has {} traces but default has {}",
                        scores.len(),
                        base_scores.len()
                    ),
                ));
            }
            let paired: Vec<f64> = scores
                .iter()
                .zip(&base_scores)
                .map(|(s, b)| s - b)
                .collect();
            let mean_score_delta =
                paired_bootstrap_ci(&paired, DEFAULT_BOOTSTRAP_RESAMPLES, options.seed)?;
            let score_rank_correlation = if scores.len() >= 3 {
                spearman_rho(&scores, &base_scores)?
            } else {
                None
            };
            deltas.push(VariantDelta {
                variant,
                baseline: Variant::Default,
                mean_score_delta,
                proceed_rate_delta: variants[i].proceed_rate - base_rate,
                score_rank_correlation,
            });
        }
    }

    Ok(SummaryReport {
        meta: SummaryMeta {
            records: per_variant.first().map_or(0, |g| g.len()),
            variants: options.variants.clone(),
            k: options.k,
            seed: options.seed,
            dimension: options.dimension,
            judge_backend: judge_backend.to_string(),
            generated_at: None,
        },
        variants,
        deltas,
        audit,
    })
}

/// The whole pipeline: traces, audit, and — audit permitting — the summary.
pub fn run_pipeline(
    records: &[ClaimRecord],
    judge: &dyn RecordJudge,
    options: &PipelineOptions,
) -> crate::Result<PipelineOutput> {
    let traces = run_traces(records, judge, options)?;
    let audit = fingerprint_audit(&traces);
    let summary = if audit.passed {
        Some(build_summary(
            &traces,
            options,
            judge.backend_id(),
            audit.clone(),
        )?)
    } else {
        None
    };
    Ok(PipelineOutput {
        traces,
        audit,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synthetic;
    use crate::judge::RuleBasedJudge;

    fn run_default(n: usize) -> PipelineOutput {
        let records = synthetic::generate(n, 42);
        let judge = RuleBasedJudge::default();
        run_pipeline(&records, &judge, &PipelineOptions::default()).unwrap()
    }

    #[test]
    fn produces_one_trace_per_variant_record_pair() {
        let out = run_default(10);
        assert_eq!(out.traces.len(), 10 * Variant::ALL.len());
        assert!(out.audit.passed, "{:?}", out.audit.checks);
        let summary = out.summary.expect("clean audit yields a summary");
        assert_eq!(summary.meta.records, 10);
        assert_eq!(summary.variants.len(), Variant::ALL.len());
        assert_eq!(summary.deltas.len(), Variant::ALL.len() - 1);
        assert!(summary.meta.generated_at.is_none());
    }

    #[test]
    fn default_variant_routes_the_synthetic_blocks_as_designed() {
        let out = run_default(5);
        let default: Vec<&RunTrace> = out
            .traces
            .iter()
            .filter(|t| t.variant == Variant::Default)
            .collect();
        // Block layout: SUPPORTS, REFUTES, twin, twin, isolated.
        assert_eq!(default[0].decision, Decision::Proceed);
        assert_eq!(default[0].score, 1.0);
        assert_eq!(default[1].decision, Decision::Replan);
        assert_eq!(default[1].partition_counts, [0, 0, 1, 0]);
        assert_eq!(default[2].partition_counts, [0, 0, 0, 1]);
        assert_eq!(default[3].partition_counts, [0, 0, 0, 1]);
        assert_eq!(default[4].partition_counts, [0, 1, 0, 0]);
    }

    #[test]
    fn collapsing_variant_proceeds_at_most_as_often_as_default() {
        let out = run_default(20);
        let summary = out.summary.unwrap();
        let rate = |v: Variant| {
            summary
                .variants
                .iter()
                .find(|m| m.variant == v)
                .unwrap()
                .proceed_rate
        };
        // Non-vacuity: the synthetic twins must actually route complementary.
        assert!(out
            .traces
            .iter()
            .any(|t| t.variant == Variant::Default && t.partition_counts[3] > 0));
        assert!(rate(Variant::NoComplementary) < rate(Variant::Default));
    }

    #[test]
    fn rho_zero_never_scores_below_default() {
        let out = run_default(20);
        let default: Vec<f64> = out
            .traces
            .iter()
            .filter(|t| t.variant == Variant::Default)
            .map(|t| t.score)
            .collect();
        let rho_zero: Vec<f64> = out
            .traces
            .iter()
            .filter(|t| t.variant == Variant::RhoZero)
            .map(|t| t.score)
            .collect();
        for (r, d) in rho_zero.iter().zip(&default) {
            assert!(r >= d, "rho_zero {r} < default {d}");
        }
    }

    #[test]
    fn reruns_are_identical() {
        let a = run_default(15);
        let b = run_default(15);
        assert_eq!(a.traces, b.traces);
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn degenerate_options_are_rejected() {
        let records = synthetic::generate(5, 42);
        let judge = RuleBasedJudge::default();
        let empty_records = run_pipeline(&[], &judge, &PipelineOptions::default());
        assert!(empty_records.is_err());

        let mut no_variants = PipelineOptions::default();
        no_variants.variants.clear();
        assert!(run_pipeline(&records, &judge, &no_variants).is_err());

        let dup = PipelineOptions {
            variants: vec![Variant::Default, Variant::Default],
            ..PipelineOptions::default()
        };
        assert!(run_pipeline(&records, &judge, &dup).is_err());
    }
}
