//! Evaluation harness: variants, traces, metrics, statistics, and the
//! integrity audit, tied together by the record-level pipeline.
//!
//! The harness exists to answer "does the grounding score earn its keep?"
//! with paired, reproducible numbers. Every variant scores the same judge
//! verdicts, traces capture enough to recompute everything, and the audit
//! refuses to summarize runs whose ablations demonstrably did not run.

mod audit;
mod metrics;
mod pipeline;
mod stats;
mod trace;
mod variant;

pub use audit::{fingerprint_audit, AuditCheck, AuditReport, CONTAMINATION_MARKER};
pub use metrics::{compute_metrics, ComplementaryMode, VariantMetrics};
pub use pipeline::{
    build_summary, run_pipeline, run_traces, PipelineOptions, PipelineOutput, SummaryMeta,
    SummaryReport, VariantDelta,
};
pub use stats::{paired_bootstrap_ci, spearman_rho, BootstrapCi, DEFAULT_BOOTSTRAP_RESAMPLES};
pub use trace::{atoms_of, read_traces, traces_to_jsonl, write_traces, RunTrace, TraceAtom};
pub use variant::{
    evaluate_variant, resolve_variant, score_under_rule, transform_partition, CollapseTarget,
    DecisionRule, ResolvedVariant, Variant,
};
