//! The bounded regenerate/replan loop.
//!
//! One investigation runs: plan, dispatch and synthesize, judge, score,
//! decide; then while the decision is not proceed, either re-synthesize the
//! summary (regenerate) or revise the plan and re-dispatch (replan), judging
//! and scoring after every action. Replans are capped at `k_max`; when the
//! budget is exhausted the loop terminates degraded instead of spinning.
//!
//! Two refinements keep the loop honest. A judge abstention is handled like
//! a replan decision, so an uncooperative judge consumes budget rather than
//! stalling. And regeneration is bounded to one attempt per score
//! evaluation: if two consecutive evaluations both land in the regenerate
//! band, the second escalates to the replan branch, so the loop cannot
//! oscillate on free regenerations.
//!
//! Plan and synthesis work is abstracted behind [`InvestigationHooks`]; the
//! loop owns only control flow. A hook failure terminates the investigation
//! degraded with the error noted, never with a panic.

use thiserror::Error;

use crate::domain::{Decision, GsarConfig, InvestigationResult, Report, VerdictStep};
use crate::judge::{JudgeBackend, JudgeRequest};
use crate::scoring::{decide, gsar_score};

/// Failure reported by a hook implementation.
#[derive(Debug, Clone, Error)]
#[error("{0}")]
pub struct HookError(pub String);

/// An orchestrator plan: opaque payload plus a revision counter that
/// increments by exactly one per revision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    payload: String,
    revision: u32,
}

impl Plan {
    pub fn new(payload: impl Into<String>) -> Plan {
        Plan {
            payload: payload.into(),
            revision: 0,
        }
    }

    /// The revised plan, one revision further on.
    pub fn revised(&self, payload: impl Into<String>) -> Plan {
        Plan {
            payload: payload.into(),
            revision: self.revision + 1,
        }
    }

    pub fn payload(&self) -> &str {
        &self.payload
    }

    pub fn revision(&self) -> u32 {
        self.revision
    }
}

/// Simulation points for the orchestrator-side work the loop drives.
///
/// Implementations should derive revised plans with [`Plan::revised`] so the
/// revision counter tracks the number of revisions.
pub trait InvestigationHooks {
    /// Produces the initial plan for a signal.
    fn initial_plan(&mut self, signal_id: &str) -> Result<Plan, HookError>;

    /// Executes a plan and synthesizes a report from its outputs.
    fn dispatch_and_synthesize(&mut self, plan: &Plan) -> Result<Report, HookError>;

    /// Revises a plan after an unsatisfying report; `explanation` carries the
    /// judge's reasoning, or the gather-more-evidence instruction on
    /// abstention.
    fn revise_plan(
        &mut self,
        plan: &Plan,
        report: &Report,
        explanation: &str,
    ) -> Result<Plan, HookError>;

    /// Re-synthesizes the summary from the same evidence.
    fn regenerate_summary(
        &mut self,
        report: &Report,
        explanation: &str,
    ) -> Result<Report, HookError>;
}

/// Plan-revision instruction delivered on judge abstention, when there is no
/// usable judge explanation to forward.
fn abstain_explanation(reason: Option<&str>) -> String {
    let reason = reason.unwrap_or("no reason given");
    format!("judge abstained ({reason}); gather more evidence before re-attempting synthesis")
}

/// Runs one bounded investigation. Total: hook failures and hostile judges
/// degrade the result, they never escape as errors.
pub fn run_investigation(
    signal_id: &str,
    hooks: &mut dyn InvestigationHooks,
    judge: &dyn JudgeBackend,
    config: &GsarConfig,
) -> InvestigationResult {
    let mut replans_used = 0u32;
    let mut regenerations_used = 0u32;
    let mut history: Vec<VerdictStep> = Vec::new();

    let mut plan = match hooks.initial_plan(signal_id) {
        Ok(plan) => plan,
        Err(e) => return hook_failure(signal_id, e, history, replans_used, regenerations_used),
    };
    let mut report = match hooks.dispatch_and_synthesize(&plan) {
        Ok(report) => report,
        Err(e) => return hook_failure(signal_id, e, history, replans_used, regenerations_used),
    };

    let evaluate = |report: &Report, history: &mut Vec<VerdictStep>| {
        let request =
            JudgeRequest::new(report.synthesis_text.clone(), report.claims.clone(), vec![]);
        let verdict = judge.evaluate(&request).verdict;
        let score = gsar_score(verdict.partition(), config).score;
        let decision = decide(score, config.thresholds())
            .expect("scores from gsar_score stay inside the unit interval");
        history.push(VerdictStep {
            verdict: verdict.clone(),
            score,
            decision,
        });
        (verdict, score, decision)
    };

    let (mut verdict, mut score, mut decision) = evaluate(&report, &mut history);
    let mut degraded = false;
    // Set after a regeneration so that an immediately repeated regenerate
    // decision escalates instead of regenerating again.
    let mut just_regenerated = false;

    while decision != Decision::Proceed {
        let escalate = verdict.is_abstain() || decision == Decision::Replan || just_regenerated;
        if escalate {
            if replans_used >= config.k_max() {
                degraded = true;
                break;
            }
            let explanation = if verdict.is_abstain() {
                abstain_explanation(verdict.abstain_reason())
            } else {
                verdict.explanation().to_string()
            };
            plan = match hooks.revise_plan(&plan, &report, &explanation) {
                Ok(plan) => plan,
                Err(e) => {
                    return hook_failure_with(
                        report,
                        score,
                        e,
                        history,
                        replans_used,
                        regenerations_used,
                    )
                }
            };
            report = match hooks.dispatch_and_synthesize(&plan) {
                Ok(report) => report,
                Err(e) => {
                    return hook_failure_with(
                        report,
                        score,
                        e,
                        history,
                        replans_used,
                        regenerations_used,
                    )
                }
            };
            replans_used += 1;
            just_regenerated = false;
        } else {
            report = match hooks.regenerate_summary(&report, verdict.explanation()) {
                Ok(report) => report,
                Err(e) => {
                    return hook_failure_with(
                        report,
                        score,
                        e,
                        history,
                        replans_used,
                        regenerations_used,
                    )
                }
            };
            regenerations_used += 1;
            just_regenerated = true;
        }
        (verdict, score, decision) = evaluate(&report, &mut history);
    }

    InvestigationResult {
        report,
        score,
        replans_used,
        regenerations_used,
        degraded,
        verdict_history: history,
        error: None,
    }
}

fn hook_failure(
    signal_id: &str,
    error: HookError,
    history: Vec<VerdictStep>,
    replans_used: u32,
    regenerations_used: u32,
) -> InvestigationResult {
    hook_failure_with(
        Report::empty(signal_id),
        0.0,
        error,
        history,
        replans_used,
        regenerations_used,
    )
}

fn hook_failure_with(
    report: Report,
    score: f64,
    error: HookError,
    history: Vec<VerdictStep>,
    replans_used: u32,
    regenerations_used: u32,
) -> InvestigationResult {
    InvestigationResult {
        report,
        score,
        replans_used,
        regenerations_used,
        degraded: true,
        verdict_history: history,
        error: Some(error.0),
    }
}

/// Ready-made deterministic hooks for loop simulations: plans and reports
/// are synthesized placeholder text that records how it came about.
#[derive(Debug, Default)]
pub struct SimulationHooks {
    signal_id: String,
}

impl InvestigationHooks for SimulationHooks {
    fn initial_plan(&mut self, signal_id: &str) -> Result<Plan, HookError> {
        self.signal_id = signal_id.to_string();
        Ok(Plan::new(format!("investigate {signal_id}")))
    }

    fn dispatch_and_synthesize(&mut self, plan: &Plan) -> Result<Report, HookError> {
        Ok(Report::new(
            self.signal_id.clone(),
            format!("synthesis of plan revision {}", plan.revision()),
            Vec::new(),
        ))
    }

    fn revise_plan(
        &mut self,
        plan: &Plan,
        _report: &Report,
        explanation: &str,
    ) -> Result<Plan, HookError> {
        Ok(plan.revised(format!("{} | revised after: {explanation}", plan.payload())))
    }

    fn regenerate_summary(
        &mut self,
        report: &Report,
        _explanation: &str,
    ) -> Result<Report, HookError> {
        Ok(Report::new(
            report.signal_id.clone(),
            format!("{} (regenerated)", report.synthesis_text),
            report.claims.clone(),
        ))
    }
}
