//! Scoring variants and ablations.
//!
//! A variant is a transformation applied on top of a shared judge verdict:
//! it may rewrite the partition (collapse the complementary class), rewrite
//! the configuration (uniform weights, ρ = 0), or swap the decision rule
//! (two-tier thresholds, the binary baseline). Because every variant starts
//! from the same per-record verdict, per-record comparisons across variants
//! are paired.

use serde::{Deserialize, Serialize};

use crate::domain::{Decision, GsarConfig, Partition, WeightMap};
use crate::scoring::{decide, gsar_score};
use crate::Error;

/// The evaluation variants the harness knows how to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// The shipped configuration, unmodified.
    Default,
    /// Every evidence type weighted 1.0; tests whether the type-sensitive
    /// weighting matters beyond set membership.
    UniformWeights,
    /// Complementary claims folded back into the ungrounded class; tests
    /// the value of the fourth class.
    NoComplementary,
    /// Contradictions removed from the denominator (ρ = 0).
    RhoZero,
    /// No regenerate band: anything below the proceed threshold replans.
    TwoTier,
    /// Scoring-free baseline: proceed iff at least one grounded claim and
    /// no contradicted ones; the reported score is the grounded fraction.
    BaselineBinary,
    /// Stacked baseline: uniform weights plus the complementary collapse.
    BaselineUniformJudge,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Default,
        Variant::UniformWeights,
        Variant::NoComplementary,
        Variant::RhoZero,
        Variant::TwoTier,
        Variant::BaselineBinary,
        Variant::BaselineUniformJudge,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Variant::Default => "default",
            Variant::UniformWeights => "uniform_weights",
            Variant::NoComplementary => "no_complementary",
            Variant::RhoZero => "rho_zero",
            Variant::TwoTier => "two_tier",
            Variant::BaselineBinary => "baseline_binary",
            Variant::BaselineUniformJudge => "baseline_uniform_judge",
        }
    }

    pub fn parse(label: &str) -> crate::Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.label() == label)
            .ok_or_else(|| {
                let known = Variant::ALL.map(|v| v.label()).join(", ");
                Error::invalid(
                    "variant",
                    format!("unknown variant {label:?}; known: {known}"),
                )
            })
    }

    /// Whether this variant folds the complementary class away. Collapsing
    /// variants must produce different partitions from non-collapsing ones
    /// whenever complementary claims exist; the audit checks exactly that.
    pub fn collapses_complementary(&self) -> bool {
        matches!(
            self,
            Variant::NoComplementary | Variant::BaselineUniformJudge
        )
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Where collapsed complementary claims land.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseTarget {
    /// Treat complementary findings as unsupported (the conservative
    /// reading, and the default).
    #[default]
    Ungrounded,
    /// Treat complementary findings as grounded (the permissive reading).
    Grounded,
}

/// How a score (or partition) turns into a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    /// proceed / regenerate / replan against both thresholds.
    ThreeTier,
    /// proceed / replan against the proceed threshold only.
    TwoTier,
    /// proceed iff any grounded claim and no contradicted ones.
    Binary,
}

/// A variant resolved against a base configuration.
#[derive(Debug, Clone)]
pub struct ResolvedVariant {
    pub variant: Variant,
    pub config: GsarConfig,
    pub rule: DecisionRule,
    pub collapse: Option<CollapseTarget>,
}

/// Resolves what a variant changes, relative to a base configuration.
pub fn resolve_variant(
    variant: Variant,
    base: &GsarConfig,
    collapse: CollapseTarget,
) -> ResolvedVariant {
    let uniform = || {
        base.clone()
            .with_weights(WeightMap::uniform(1.0).expect("1.0 is a valid weight"))
    };
    let (config, rule, collapses) = match variant {
        Variant::Default => (base.clone(), DecisionRule::ThreeTier, false),
        Variant::UniformWeights => (uniform(), DecisionRule::ThreeTier, false),
        Variant::NoComplementary => (base.clone(), DecisionRule::ThreeTier, true),
        Variant::RhoZero => (
            base.clone().with_rho(0.0).expect("0.0 is a valid rho"),
            DecisionRule::ThreeTier,
            false,
        ),
        Variant::TwoTier => (base.clone(), DecisionRule::TwoTier, false),
        Variant::BaselineBinary => (base.clone(), DecisionRule::Binary, false),
        Variant::BaselineUniformJudge => (uniform(), DecisionRule::ThreeTier, true),
    };
    ResolvedVariant {
        variant,
        config,
        rule,
        collapse: collapses.then_some(collapse),
    }
}

/// Applies a variant's partition transformation. Identity for
/// non-collapsing variants.
pub fn transform_partition(partition: &Partition, collapse: Option<CollapseTarget>) -> Partition {
    let Some(target) = collapse else {
        return partition.clone();
    };
    if partition.complementary().is_empty() {
        return partition.clone();
    }
    let mut grounded = partition.grounded().to_vec();
    let mut ungrounded = partition.ungrounded().to_vec();
    let absorbed = partition.complementary().to_vec();
    match target {
        CollapseTarget::Ungrounded => ungrounded.extend(absorbed),
        CollapseTarget::Grounded => grounded.extend(absorbed),
    }
    Partition::new(
        grounded,
        ungrounded,
        partition.contradicted().to_vec(),
        vec![],
    )
    .expect("collapsing a valid partition cannot introduce duplicate claims")
}

/// Scores a (already transformed) partition and decides under the variant's
/// rule.
pub fn score_under_rule(
    partition: &Partition,
    config: &GsarConfig,
    rule: DecisionRule,
) -> (f64, Decision) {
    match rule {
        DecisionRule::ThreeTier => {
            let score = gsar_score(partition, config).score;
            let decision = decide(score, config.thresholds())
                .expect("scores from gsar_score stay inside the unit interval");
            (score, decision)
        }
        DecisionRule::TwoTier => {
            let score = gsar_score(partition, config).score;
            let decision = if score >= config.thresholds().tau_proceed() {
                Decision::Proceed
            } else {
                Decision::Replan
            };
            (score, decision)
        }
        DecisionRule::Binary => {
            let (g, _, x, _) = partition.counts();
            let total = partition.total_claims();
            // Convention mirrors the empty-partition neutral score: with no
            // claims at all there is nothing to be confident or worried
            // about.
            let score = if total == 0 {
                0.5
            } else {
                g as f64 / total as f64
            };
            let decision = if g > 0 && x == 0 {
                Decision::Proceed
            } else {
                Decision::Replan
            };
            (score, decision)
        }
    }
}

/// Convenience wrapper: resolve, transform, score, decide.
pub fn evaluate_variant(
    variant: Variant,
    partition: &Partition,
    base: &GsarConfig,
    collapse: CollapseTarget,
) -> (Partition, f64, Decision) {
    let resolved = resolve_variant(variant, base, collapse);
    let transformed = transform_partition(partition, resolved.collapse);
    let (score, decision) = score_under_rule(&transformed, &resolved.config, resolved.rule);
    (transformed, score, decision)
}
