use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::claim::EvidenceType;
use crate::Error;

/// Per-type claim weights plus a default for types outside the map.
///
/// The defaults grade evidence strength from direct tool matches (1.0) down
/// to inference and domain knowledge (0.6); the default weight matches that
/// weakest informative tier so unrecognized labels are scored conservatively.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMap {
    entries: BTreeMap<EvidenceType, f64>,
    default_weight: f64,
}

impl WeightMap {
    /// Builds a weight map, rejecting weights outside `[0, 1]`.
    pub fn new(
        entries: BTreeMap<EvidenceType, f64>,
        default_weight: f64,
    ) -> crate::Result<WeightMap> {
        for (ty, w) in &entries {
            check_unit_interval(*w, &format!("weights.{}", ty.label()))?;
        }
        check_unit_interval(default_weight, "default_weight")?;
        Ok(WeightMap {
            entries,
            default_weight,
        })
    }

    /// Weight for a claim of the given type; types outside the map get the
    /// default weight.
    pub fn weight(&self, evidence_type: &EvidenceType) -> f64 {
        self.entries
            .get(evidence_type)
            .copied()
            .unwrap_or(self.default_weight)
    }

    pub fn default_weight(&self) -> f64 {
        self.default_weight
    }

    pub fn entries(&self) -> &BTreeMap<EvidenceType, f64> {
        &self.entries
    }

    /// Every stored weight and the default set to the same value.
    pub fn uniform(weight: f64) -> crate::Result<WeightMap> {
        let entries = EvidenceType::known().map(|ty| (ty, weight)).collect();
        WeightMap::new(entries, weight)
    }

    fn set(&mut self, ty: EvidenceType, weight: f64) -> crate::Result<()> {
        check_unit_interval(weight, &format!("weights.{}", ty.label()))?;
        self.entries.insert(ty, weight);
        Ok(())
    }
}

impl Default for WeightMap {
    fn default() -> WeightMap {
        let entries = [
            (EvidenceType::ToolMatch, 1.00),
            (EvidenceType::SpecificData, 0.95),
            (EvidenceType::SignalMatch, 0.90),
            (EvidenceType::ComplementaryFinding, 0.85),
            (EvidenceType::Synthesis, 0.80),
            (EvidenceType::NegEvidence, 0.70),
            (EvidenceType::Inference, 0.60),
            (EvidenceType::Domain, 0.60),
        ]
        .into_iter()
        .collect();
        WeightMap {
            entries,
            default_weight: 0.60,
        }
    }
}

/// The two decision thresholds, with `0 < tau_regenerate < tau_proceed < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThresholdsWire", into = "ThresholdsWire")]
pub struct Thresholds {
    tau_proceed: f64,
    tau_regenerate: f64,
}

impl Thresholds {
    pub fn new(tau_proceed: f64, tau_regenerate: f64) -> crate::Result<Thresholds> {
        if !(tau_regenerate > 0.0 && tau_regenerate < tau_proceed && tau_proceed < 1.0) {
            return Err(Error::Config(format!(
                "thresholds must satisfy 0 < tau_regenerate < tau_proceed < 1, \
                 got tau_regenerate={tau_regenerate}, tau_proceed={tau_proceed}"
            )));
        }
        Ok(Thresholds {
            tau_proceed,
            tau_regenerate,
        })
    }

    pub fn tau_proceed(&self) -> f64 {
        self.tau_proceed
    }

    pub fn tau_regenerate(&self) -> f64 {
        self.tau_regenerate
    }
}

impl Default for Thresholds {
    fn default() -> Thresholds {
        Thresholds {
            tau_proceed: 0.80,
            tau_regenerate: 0.65,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ThresholdsWire {
    tau_proceed: f64,
    tau_regenerate: f64,
}

impl TryFrom<ThresholdsWire> for Thresholds {
    type Error = Error;

    fn try_from(wire: ThresholdsWire) -> crate::Result<Thresholds> {
        Thresholds::new(wire.tau_proceed, wire.tau_regenerate)
    }
}

impl From<Thresholds> for ThresholdsWire {
    fn from(t: Thresholds) -> ThresholdsWire {
        ThresholdsWire {
            tau_proceed: t.tau_proceed,
            tau_regenerate: t.tau_regenerate,
        }
    }
}

/// Full scoring and loop configuration.
///
/// `rho` discounts contradicted weight in the score denominator, `k_max`
/// bounds replans per investigation, and `empty_partition_score` is the
/// neutral score assigned when the partition carries no weight at all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigWire", into = "ConfigWire")]
pub struct GsarConfig {
    weights: WeightMap,
    rho: f64,
    thresholds: Thresholds,
    k_max: u32,
    empty_partition_score: f64,
}

impl GsarConfig {
    pub fn new(
        weights: WeightMap,
        rho: f64,
        thresholds: Thresholds,
        k_max: u32,
        empty_partition_score: f64,
    ) -> crate::Result<GsarConfig> {
        check_unit_interval(rho, "rho")?;
        check_unit_interval(empty_partition_score, "empty_partition_score")?;
        Ok(GsarConfig {
            weights,
            rho,
            thresholds,
            k_max,
            empty_partition_score,
        })
    }

    pub fn weights(&self) -> &WeightMap {
        &self.weights
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn empty_partition_score(&self) -> f64 {
        self.empty_partition_score
    }

    /// Copy with a different rho.
    pub fn with_rho(&self, rho: f64) -> crate::Result<GsarConfig> {
        GsarConfig::new(
            self.weights.clone(),
            rho,
            self.thresholds,
            self.k_max,
            self.empty_partition_score,
        )
    }

    /// Copy with a different weight map.
    pub fn with_weights(&self, weights: WeightMap) -> GsarConfig {
        GsarConfig {
            weights,
            ..self.clone()
        }
    }

    /// Copy with different thresholds.
    pub fn with_thresholds(&self, thresholds: Thresholds) -> GsarConfig {
        GsarConfig {
            thresholds,
            ..self.clone()
        }
    }

    /// Copy with a different replan budget.
    pub fn with_k_max(&self, k_max: u32) -> GsarConfig {
        GsarConfig {
            k_max,
            ..self.clone()
        }
    }

    /// Parses a flat key/value configuration document. Keys are
    /// `weights.<type>`, `default_weight`, `rho`, `tau_proceed`,
    /// `tau_regenerate`, `k_max`, and `empty_partition_score`; absent keys
    /// keep their defaults and unknown keys are rejected.
    pub fn from_flat_json(doc: &str) -> crate::Result<GsarConfig> {
        let value: Value =
            serde_json::from_str(doc).map_err(|e| Error::Config(format!("not valid JSON: {e}")))?;
        let map = value
            .as_object()
            .ok_or_else(|| Error::Config("top level must be a JSON object".into()))?;

        let mut weights = WeightMap::default();
        let mut rho = 0.5f64;
        let mut tau_proceed = Thresholds::default().tau_proceed;
        let mut tau_regenerate = Thresholds::default().tau_regenerate;
        let mut k_max = 2u32;
        let mut empty_partition_score = 0.5f64;

        for (key, value) in map {
            if let Some(label) = key.strip_prefix("weights.") {
                weights.set(EvidenceType::from_label(label), number(key, value)?)?;
                continue;
            }
            match key.as_str() {
                "default_weight" => {
                    let w = number(key, value)?;
                    check_unit_interval(w, "default_weight")?;
                    weights.default_weight = w;
                }
                "rho" => rho = number(key, value)?,
                "tau_proceed" => tau_proceed = number(key, value)?,
                "tau_regenerate" => tau_regenerate = number(key, value)?,
                "k_max" => {
                    k_max = value
                        .as_u64()
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| {
                            Error::Config(format!(
                                "k_max must be a non-negative integer, got {value}"
                            ))
                        })?;
                }
                "empty_partition_score" => empty_partition_score = number(key, value)?,
                other => {
                    return Err(Error::Config(format!("unknown key {other:?}")));
                }
            }
        }

        GsarConfig::new(
            weights,
            rho,
            Thresholds::new(tau_proceed, tau_regenerate)?,
            k_max,
            empty_partition_score,
        )
    }

    /// Loads a flat configuration file; a missing path yields the defaults.
    pub fn load(path: Option<&Path>) -> crate::Result<GsarConfig> {
        match path {
            None => Ok(GsarConfig::default()),
            Some(path) => {
                let doc = std::fs::read_to_string(path)
                    .map_err(|e| Error::io(path.display().to_string(), e))?;
                GsarConfig::from_flat_json(&doc)
            }
        }
    }
}

impl Default for GsarConfig {
    fn default() -> GsarConfig {
        GsarConfig {
            weights: WeightMap::default(),
            rho: 0.5,
            thresholds: Thresholds::default(),
            k_max: 2,
            empty_partition_score: 0.5,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigWire {
    weights: WeightMapWire,
    rho: f64,
    thresholds: ThresholdsWire,
    k_max: u32,
    empty_partition_score: f64,
}

#[derive(Serialize, Deserialize)]
struct WeightMapWire {
    entries: BTreeMap<String, f64>,
    default_weight: f64,
}

impl TryFrom<ConfigWire> for GsarConfig {
    type Error = Error;

    fn try_from(wire: ConfigWire) -> crate::Result<GsarConfig> {
        let entries = wire
            .weights
            .entries
            .into_iter()
            .map(|(label, w)| (EvidenceType::from_label(&label), w))
            .collect();
        GsarConfig::new(
            WeightMap::new(entries, wire.weights.default_weight)?,
            wire.rho,
            Thresholds::try_from(wire.thresholds)?,
            wire.k_max,
            wire.empty_partition_score,
        )
    }
}

impl From<GsarConfig> for ConfigWire {
    fn from(config: GsarConfig) -> ConfigWire {
        ConfigWire {
            weights: WeightMapWire {
                entries: config
                    .weights
                    .entries
                    .iter()
                    .map(|(ty, w)| (ty.label().to_string(), *w))
                    .collect(),
                default_weight: config.weights.default_weight,
            },
            rho: config.rho,
            thresholds: config.thresholds.into(),
            k_max: config.k_max,
            empty_partition_score: config.empty_partition_score,
        }
    }
}

fn number(key: &str, value: &Value) -> crate::Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::Config(format!("{key} must be a number, got {value}")))
}

fn check_unit_interval(value: f64, what: &str) -> crate::Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Config(format!(
            "{what} must be in [0, 1], got {value}"
        )));
    }
    Ok(())
}
