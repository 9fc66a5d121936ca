//! Permutation attributions: effects `phi`, the score function (singleton
//! effect or pairwise interaction excess), per-model attribution sets and the
//! attribution space across a set of models.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::data::{
    derangements, model_loss, permuted_loss_full_capped, permuted_losses, Dataset, LossKind,
    McEstimate, SubsetIndex, FULL_PAIRS_ROW_CAP,
};
use crate::error::{Error, Result};
use crate::models::{Predictor, QuadraticOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AttributionEstimator {
    /// Every ordered row pair; exact but quadratic in n.
    FullPairs { cap: usize },
    /// `repeats` shared whole-column shuffles.
    MonteCarlo { repeats: usize, seed: u64 },
}

impl Default for AttributionEstimator {
    fn default() -> Self {
        AttributionEstimator::MonteCarlo {
            repeats: 100,
            seed: 0,
        }
    }
}

impl AttributionEstimator {
    pub fn full_pairs() -> Self {
        AttributionEstimator::FullPairs {
            cap: FULL_PAIRS_ROW_CAP,
        }
    }
}

/// One model's scores over a subset family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionSet {
    pub model_id: String,
    pub scores: BTreeMap<SubsetIndex, f64>,
    /// Standard errors of the scores (all zero for the full-pairs
    /// estimator).
    pub std_errors: BTreeMap<SubsetIndex, f64>,
}

impl AttributionSet {
    pub fn from_scores(model_id: impl Into<String>, scores: impl IntoIterator<Item = (SubsetIndex, f64)>) -> Self {
        let scores: BTreeMap<_, _> = scores.into_iter().collect();
        let std_errors = scores.keys().map(|k| (k.clone(), 0.0)).collect();
        Self {
            model_id: model_id.into(),
            scores,
            std_errors,
        }
    }

    pub fn get(&self, s: &SubsetIndex) -> Option<f64> {
        self.scores.get(s).copied()
    }

    pub fn same_keys(&self, other: &AttributionSet) -> bool {
        self.scores.len() == other.scores.len() && self.scores.keys().eq(other.scores.keys())
    }
}

/// Evaluates attributions on one dataset with one estimator.
///
/// Monte Carlo permutations are drawn once from the seed and shared by every
/// subset and every model, so differences between models are not blurred by
/// independent shuffle noise.
pub struct Attributor<'d> {
    data: &'d Dataset,
    kind: LossKind,
    estimator: AttributionEstimator,
    perms: Vec<Vec<usize>>,
}

impl<'d> Attributor<'d> {
    pub fn new(data: &'d Dataset, kind: LossKind, estimator: AttributionEstimator) -> Result<Self> {
        if data.n_rows() < 2 {
            return Err(Error::Dataset("attribution needs at least 2 rows".into()));
        }
        let perms = match estimator {
            AttributionEstimator::FullPairs { cap } => {
                if data.n_rows() > cap {
                    return Err(Error::TooManyRows {
                        rows: data.n_rows(),
                        cap,
                    });
                }
                Vec::new()
            }
            AttributionEstimator::MonteCarlo { repeats, seed } => {
                if repeats < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "Monte Carlo estimator needs at least 2 repeats, got {repeats}"
                    )));
                }
                derangements(data.n_rows(), repeats, seed)
            }
        };
        Ok(Self {
            data,
            kind,
            estimator,
            perms,
        })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn loss_kind(&self) -> LossKind {
        self.kind
    }

    pub fn estimator(&self) -> AttributionEstimator {
        self.estimator
    }

    /// Permuted loss per repeat (a single value for full pairs).
    fn permuted(&self, f: &dyn Predictor, s: &SubsetIndex) -> Result<Vec<f64>> {
        match self.estimator {
            AttributionEstimator::FullPairs { cap } => {
                Ok(vec![permuted_loss_full_capped(f, self.data, s, self.kind, cap)?])
            }
            AttributionEstimator::MonteCarlo { .. } => {
                permuted_losses(f, self.data, s, self.kind, &self.perms)
            }
        }
    }

    pub fn phi(&self, f: &dyn Predictor, s: &SubsetIndex) -> Result<McEstimate> {
        let base = model_loss(f, self.data, self.kind)?;
        let effects: Vec<f64> = self.permuted(f, s)?.into_iter().map(|l| l - base).collect();
        Ok(McEstimate::from_samples(&effects))
    }

    pub fn score(&self, f: &dyn Predictor, s: &SubsetIndex) -> Result<McEstimate> {
        let set = self.attribution_set(f, "", std::slice::from_ref(s))?;
        Ok(McEstimate {
            mean: set.scores[s],
            std_error: set.std_errors[s],
        })
    }

    /// Scores for each subset. Pair scores reuse the singleton effects, and
    /// their standard errors come from per-repeat differences.
    pub fn attribution_set(
        &self,
        f: &dyn Predictor,
        model_id: &str,
        subsets: &[SubsetIndex],
    ) -> Result<AttributionSet> {
        if subsets.is_empty() {
            return Err(Error::InvalidArgument("no subsets to attribute".into()));
        }
        let mut sorted = subsets.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate subsets".into()));
        }
        let base = model_loss(f, self.data, self.kind)?;
        let mut effects: HashMap<SubsetIndex, Vec<f64>> = HashMap::new();
        let mut effect = |s: &SubsetIndex| -> Result<Vec<f64>> {
            if let Some(e) = effects.get(s) {
                return Ok(e.clone());
            }
            let e: Vec<f64> = self.permuted(f, s)?.into_iter().map(|l| l - base).collect();
            effects.insert(s.clone(), e.clone());
            Ok(e)
        };

        let mut scores = BTreeMap::new();
        let mut std_errors = BTreeMap::new();
        for s in &sorted {
            let mut per_repeat = effect(s)?;
            if s.order() == 2 {
                for &i in s.indices() {
                    let single = effect(&SubsetIndex::single(i))?;
                    for (v, e) in per_repeat.iter_mut().zip(single) {
                        *v -= e;
                    }
                }
            }
            let est = McEstimate::from_samples(&per_repeat);
            if !est.mean.is_finite() {
                return Err(Error::NonFinite(format!("score for subset {s}")));
            }
            scores.insert(s.clone(), est.mean);
            std_errors.insert(s.clone(), est.std_error);
        }
        Ok(AttributionSet {
            model_id: model_id.to_string(),
            scores,
            std_errors,
        })
    }
}

pub fn phi(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
    est: AttributionEstimator,
) -> Result<McEstimate> {
    Attributor::new(d, kind, est)?.phi(f, s)
}

pub fn score(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
    est: AttributionEstimator,
) -> Result<McEstimate> {
    Attributor::new(d, kind, est)?.score(f, s)
}

pub fn attribution_set(
    f: &dyn Predictor,
    d: &Dataset,
    subsets: &[SubsetIndex],
    kind: LossKind,
    est: AttributionEstimator,
) -> Result<AttributionSet> {
    Attributor::new(d, kind, est)?.attribution_set(f, "model", subsets)
}

/// Scores of one subset across every model in a set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSpread {
    pub scores: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub reference: f64,
}

impl SubsetSpread {
    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, value: f64) -> bool {
        self.min <= value && value <= self.max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionSpace {
    pub model_ids: Vec<String>,
    pub reference_id: String,
    pub subsets: BTreeMap<SubsetIndex, SubsetSpread>,
}

pub fn attribution_space(sets: &[AttributionSet], reference_id: &str) -> Result<AttributionSpace> {
    let reference = sets
        .iter()
        .find(|s| s.model_id == reference_id)
        .ok_or_else(|| Error::InvalidArgument(format!("reference '{reference_id}' is not among the sets")))?;
    if let Some(bad) = sets.iter().find(|s| !s.same_keys(reference)) {
        return Err(Error::InvalidArgument(format!(
            "attribution set '{}' covers different subsets than the reference",
            bad.model_id
        )));
    }
    let subsets = reference
        .scores
        .iter()
        .map(|(key, &reference_score)| {
            let scores: Vec<f64> = sets.iter().map(|s| s.scores[key]).collect();
            let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (
                key.clone(),
                SubsetSpread {
                    scores,
                    min,
                    max,
                    reference: reference_score,
                },
            )
        })
        .collect();
    Ok(AttributionSpace {
        model_ids: sets.iter().map(|s| s.model_id.clone()).collect(),
        reference_id: reference_id.to_string(),
        subsets,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthRow {
    pub subset: SubsetIndex,
    pub label: String,
    pub mean: f64,
    pub std_error: f64,
}

/// The oracle's singleton effects and pairwise interaction scores
/// (all six rows for the three-feature quadratic task).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthTable {
    pub repeats: usize,
    pub seed: u64,
    pub rows: Vec<GroundTruthRow>,
}

impl GroundTruthTable {
    pub fn get(&self, s: &SubsetIndex) -> Option<&GroundTruthRow> {
        self.rows.iter().find(|r| &r.subset == s)
    }
}

pub fn ground_truth_table(
    oracle: &QuadraticOracle,
    d: &Dataset,
    repeats: usize,
    seed: u64,
) -> Result<GroundTruthTable> {
    if d.n_features() != oracle.input_dim() || d.n_targets() != oracle.output_dim() {
        return Err(Error::Shape(format!(
            "oracle maps {} features to {} outputs; dataset has {} and {}",
            oracle.input_dim(),
            oracle.output_dim(),
            d.n_features(),
            d.n_targets()
        )));
    }
    let attributor = Attributor::new(
        d,
        LossKind::MeanSquaredError,
        AttributionEstimator::MonteCarlo { repeats, seed },
    )?;
    let subsets = SubsetIndex::family(d.n_features(), 2);
    let set = attributor.attribution_set(oracle, "oracle", &subsets)?;
    let rows = subsets
        .iter()
        .map(|s| GroundTruthRow {
            subset: s.clone(),
            label: s.label(d.feature_names()),
            mean: set.scores[s],
            std_error: set.std_errors[s],
        })
        .collect();
    Ok(GroundTruthTable { repeats, seed, rows })
}
