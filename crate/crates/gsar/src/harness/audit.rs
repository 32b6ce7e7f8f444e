//! Trace integrity audit.
//!
//! Two corruption modes have bitten evaluation pipelines like this one
//! before, and both produce numbers that look perfectly plausible:
//!
//! * a variant transform silently not applied, so an ablation "run" is a
//!   byte-copy of the condition it was supposed to ablate;
//! * synthesis text contaminated with scaffolding markers (claims prefixed
//!   `complementary view:`) that leak the expected class to the judge.
//!
//! The audit checks the finished traces for both. It is cheap, runs on
//! every pipeline invocation, and a failure is meant to invalidate the run:
//! callers should refuse to summarize traces that fail it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::harness::trace::RunTrace;
use crate::harness::variant::Variant;

/// Atom texts that indicate scaffolding contamination.
pub const CONTAMINATION_MARKER: &str = "complementary view:";

/// One audit check's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The full audit outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub passed: bool,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    fn from_checks(checks: Vec<AuditCheck>) -> AuditReport {
        AuditReport {
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    /// Failed checks, for compact reporting.
    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every audit check over a flat trace list (any variant mix, any
/// order; grouping is internal and order-preserving).
pub fn fingerprint_audit(traces: &[RunTrace]) -> AuditReport {
    let mut by_variant: BTreeMap<Variant, Vec<&RunTrace>> = BTreeMap::new();
    for trace in traces {
        by_variant.entry(trace.variant).or_default().push(trace);
    }
    let mut checks = vec![marker_check(traces)];
    checks.extend(divergence_checks(&by_variant));
    checks.push(alignment_check(&by_variant));
    AuditReport::from_checks(checks)
}

/// The per-record partition fingerprint: class counts plus the sorted atom
/// texts. Sorting makes the fingerprint insensitive to within-class claim
/// order, which no variant is supposed to change meaningfully.
fn fingerprint(trace: &RunTrace) -> ([usize; 4], Vec<&str>) {
    let mut texts: Vec<&str> = trace.atoms.iter().map(|a| a.text.as_str()).collect();
    texts.sort_unstable();
    (trace.partition_counts, texts)
}

fn marker_check(traces: &[RunTrace]) -> AuditCheck {
    let contaminated: Vec<String> = traces
        .iter()
        .filter(|t| {
            t.atoms
                .iter()
                .any(|a| a.text.trim_start().starts_with(CONTAMINATION_MARKER))
        })
        .map(|t| format!("{}/{}", t.variant, t.record_id))
        .collect();
    AuditCheck {
        name: "no_contamination_markers".into(),
        passed: contaminated.is_empty(),
        detail: if contaminated.is_empty() {
            "no atom text carries a scaffolding marker".into()
        } else {
            format!(
                "{} trace(s) carry `{CONTAMINATION_MARKER}` atoms: {}",
                contaminated.len(),
                preview(&contaminated)
            )
        },
    }
}

/// For every (collapsing, non-collapsing) variant pair, the trace
/// fingerprints must differ somewhere whenever the non-collapsing side
/// actually produced complementary claims — otherwise the collapse was
/// never applied.
fn divergence_checks(by_variant: &BTreeMap<Variant, Vec<&RunTrace>>) -> Vec<AuditCheck> {
    let mut checks = Vec::new();
    for (&collapsing, collapsed_traces) in by_variant {
        if !collapsing.collapses_complementary() {
            continue;
        }
        for (&reference, reference_traces) in by_variant {
            if reference.collapses_complementary() {
                continue;
            }
            let has_complementary = reference_traces.iter().any(|t| t.partition_counts[3] > 0);
            let name = format!("{collapsing}_diverges_from_{reference}");
            if !has_complementary {
                checks.push(AuditCheck {
                    name,
                    passed: true,
                    detail: format!(
                        "{reference} produced no complementary claims; identical traces are expected"
                    ),
                });
                continue;
            }
            let identical = collapsed_traces.len() == reference_traces.len()
                && collapsed_traces
                    .iter()
                    .zip(reference_traces)
                    .all(|(a, b)| fingerprint(a) == fingerprint(b));
            checks.push(AuditCheck {
                name,
                passed: !identical,
                detail: if identical {
                    format!(
                        "{collapsing} traces are byte-identical to {reference} although \
                         {reference} has complementary claims; the collapse was not applied"
                    )
                } else {
                    format!("{collapsing} partitions diverge from {reference} as expected")
                },
            });
        }
    }
    checks
}

/// All variants must cover the same records in the same order; anything
/// else means traces were dropped or reordered.
fn alignment_check(by_variant: &BTreeMap<Variant, Vec<&RunTrace>>) -> AuditCheck {
    let mut sequences = by_variant.iter().map(|(variant, traces)| {
        (
            variant,
            traces
                .iter()
                .map(|t| t.record_id.as_str())
                .collect::<Vec<_>>(),
        )
    });
    let Some((first_variant, first_seq)) = sequences.next() else {
        return AuditCheck {
            name: "record_alignment".into(),
            passed: true,
            detail: "no traces to align".into(),
        };
    };
    for (variant, seq) in sequences {
        if seq != first_seq {
            return AuditCheck {
                name: "record_alignment".into(),
                passed: false,
                detail: format!(
                    "{variant} covers a different record sequence than {first_variant}"
                ),
            };
        }
    }
    AuditCheck {
        name: "record_alignment".into(),
        passed: true,
        detail: "all variants cover the same records in the same order".into(),
    }
}

fn preview(items: &[String]) -> String {
    const SHOWN: usize = 5;
    if items.len() <= SHOWN {
        items.join(", ")
    } else {
        format!(
            "{}, … ({} more)",
            items[..SHOWN].join(", "),
            items.len() - SHOWN
        )
    }
}
