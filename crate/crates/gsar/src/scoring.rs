//! The weighted grounding score and its decision rule.
//!
//! A partition's score is the weight the judge could verify over the weight
//! it had to consider:
//!
//! ```text
//!         W(G) + W(K)
//! S = ---------------------------------
//!     W(G) + W(U) + rho * W(X) + W(K)
//! ```
//!
//! where `W` sums per-claim weights by evidence type over the grounded (G),
//! ungrounded (U), contradicted (X), and complementary (K) classes, and
//! `rho` discounts contradictions in the denominator. Complementary weight
//! appears in both numerator and denominator, so correct-but-extra context
//! is credited rather than punished. A partition carrying no weight at all
//! scores the configured neutral value instead of 0/0.
//!
//! The score maps to a decision through two thresholds: proceed at or above
//! `tau_proceed`, regenerate in the band below it, replan below
//! `tau_regenerate`.

use serde::{Deserialize, Serialize};

use crate::domain::{Claim, Decision, GsarConfig, Partition, Thresholds, WeightMap};
use crate::Error;

/// The score together with the per-class weights that produced it.
///
/// `numerator` and `denominator` are the exact values whose ratio is
/// `score`, except for the weightless case where `denominator` is zero and
/// `score` is the configured neutral value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub w_grounded: f64,
    pub w_ungrounded: f64,
    pub w_contradicted: f64,
    pub w_complementary: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub score: f64,
}

/// Total weight of a claim list under the given weight map, summed in input
/// order.
pub fn partition_weight(claims: &[Claim], weights: &WeightMap) -> f64 {
    claims
        .iter()
        .map(|claim| weights.weight(claim.evidence_type()))
        // fold, not sum: f64's Sum identity is -0.0, which would leak a
        // negative zero into serialized breakdowns of empty classes.
        .fold(0.0, |acc, w| acc + w)
}

/// Scores a partition under the given configuration.
pub fn gsar_score(partition: &Partition, config: &GsarConfig) -> ScoreBreakdown {
    let weights = config.weights();
    let w_grounded = partition_weight(partition.grounded(), weights);
    let w_ungrounded = partition_weight(partition.ungrounded(), weights);
    let w_contradicted = partition_weight(partition.contradicted(), weights);
    let w_complementary = partition_weight(partition.complementary(), weights);

    let numerator = w_grounded + w_complementary;
    let denominator = w_grounded + w_ungrounded + config.rho() * w_contradicted + w_complementary;

    let score = if denominator == 0.0 {
        config.empty_partition_score()
    } else {
        numerator / denominator
    };

    ScoreBreakdown {
        w_grounded,
        w_ungrounded,
        w_contradicted,
        w_complementary,
        numerator,
        denominator,
        score,
    }
}

/// Maps a score to a decision. Scores outside the unit interval are input
/// errors, not clamped.
pub fn decide(score: f64, thresholds: &Thresholds) -> crate::Result<Decision> {
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::ScoreOutOfRange(score));
    }
    if score >= thresholds.tau_proceed() {
        Ok(Decision::Proceed)
    } else if score >= thresholds.tau_regenerate() {
        Ok(Decision::Regenerate)
    } else {
        Ok(Decision::Replan)
    }
}

/// Scores and decides in one step.
pub fn score_and_decide(
    partition: &Partition,
    config: &GsarConfig,
) -> crate::Result<(ScoreBreakdown, Decision)> {
    let breakdown = gsar_score(partition, config);
    let decision = decide(breakdown.score, config.thresholds())?;
    Ok((breakdown, decision))
}
