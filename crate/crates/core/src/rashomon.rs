//! Rashomon boundary, membership test and the admitted-model container.

use std::fmt;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::attribution::AttributionSet;
use crate::data::{LossKind, Perturbation, SubsetIndex};
use crate::error::{Error, Result};
use crate::metrics::chebyshev_distance;
use crate::models::{InputActivated, Model, ModelBundle, Predictor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Loss may exceed the reference by `epsilon * ref_loss`.
    Multiplicative,
    /// Loss may exceed the reference by `epsilon`.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RashomonConfig {
    pub epsilon_hat: f64,
    pub boundary: Boundary,
    pub loss_kind: LossKind,
    /// Candidates closer than this (Chebyshev distance between attribution
    /// sets) to an existing member are redundant.
    pub sparsity_tolerance: f64,
}

impl Default for RashomonConfig {
    fn default() -> Self {
        Self {
            epsilon_hat: 0.1,
            boundary: Boundary::Multiplicative,
            loss_kind: LossKind::MeanSquaredError,
            sparsity_tolerance: 1e-9,
        }
    }
}

impl RashomonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_hat >= 0.0 && self.epsilon_hat.is_finite()) {
            return Err(Error::config("rashomon.epsilon", format!("must be >= 0, got {}", self.epsilon_hat)));
        }
        if !(self.sparsity_tolerance >= 0.0 && self.sparsity_tolerance.is_finite()) {
            return Err(Error::config(
                "rashomon.sparsity_tolerance",
                format!("must be >= 0, got {}", self.sparsity_tolerance),
            ));
        }
        Ok(())
    }

    pub fn with_epsilon(&self, epsilon_hat: f64) -> Self {
        Self { epsilon_hat, ..*self }
    }

    /// Absolute loss budget above the reference.
    pub fn threshold(&self, ref_loss: f64) -> f64 {
        match self.boundary {
            Boundary::Multiplicative => self.epsilon_hat * ref_loss,
            Boundary::Additive => self.epsilon_hat,
        }
    }

    /// Largest admissible loss. Every boundary comparison goes through this
    /// so the sampler and the membership test agree to the last bit.
    pub fn boundary_loss(&self, ref_loss: f64) -> f64 {
        ref_loss + self.threshold(ref_loss)
    }

    pub fn is_member(&self, candidate_loss: f64, ref_loss: f64) -> bool {
        candidate_loss <= self.boundary_loss(ref_loss)
    }

    /// A zero reference loss collapses the multiplicative boundary to a
    /// point; fall back to the additive form.
    pub fn effective(&self, ref_loss: f64) -> Self {
        if self.boundary == Boundary::Multiplicative && ref_loss == 0.0 && self.epsilon_hat > 0.0 {
            log::warn!("reference loss is 0; using the additive boundary");
            Self {
                boundary: Boundary::Additive,
                ..*self
            }
        } else {
            *self
        }
    }
}

pub fn rashomon_threshold(config: &RashomonConfig, ref_loss: f64) -> f64 {
    config.threshold(ref_loss)
}

pub fn is_member(candidate_loss: f64, ref_loss: f64, config: &RashomonConfig) -> bool {
    config.is_member(candidate_loss, ref_loss)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// How a member was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSource {
    Reference,
    Grs {
        direction: SubsetIndex,
        sign: Sign,
        /// 1-based level in the tolerance schedule.
        level: usize,
        /// Sub-step within the level, 1-based.
        step: usize,
        epsilon: f64,
    },
    RandomInput {
        index: usize,
    },
    RandomWeights {
        index: usize,
    },
}

impl ModelSource {
    /// Stable identifier used in reports and attribution tables.
    pub fn id(&self) -> String {
        match self {
            ModelSource::Reference => "ref".into(),
            ModelSource::Grs {
                direction,
                sign,
                level,
                step,
                ..
            } => {
                let sign = match sign {
                    Sign::Plus => "p",
                    Sign::Minus => "m",
                };
                if *step == 1 {
                    format!("grs-{direction}-{sign}-L{level}")
                } else {
                    format!("grs-{direction}-{sign}-L{level}.{step}")
                }
            }
            ModelSource::RandomInput { index } => format!("rin-{index}"),
            ModelSource::RandomWeights { index } => format!("rwt-{index}"),
        }
    }
}

/// One model of a sampled set: the reference seen through an input
/// transformation, or (for the weight-noise baseline) a separate network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledModel {
    pub perturbation: Perturbation,
    pub source: ModelSource,
    /// Loss under the set's loss kind on the evaluation split.
    pub loss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<ModelBundle>,
}

impl SampledModel {
    pub fn reference(n_features: usize, loss: f64) -> Self {
        Self {
            perturbation: Perturbation::identity(n_features),
            source: ModelSource::Reference,
            loss,
            weights: None,
        }
    }

    pub fn id(&self) -> String {
        self.source.id()
    }

    /// The member as a predictor, given the reference it was derived from.
    pub fn predictor<'a>(&'a self, reference: &'a dyn Predictor) -> Result<MemberPredictor<'a>> {
        match &self.weights {
            Some(bundle) => Ok(MemberPredictor::Weights(bundle.to_model()?)),
            None => Ok(MemberPredictor::Input(InputActivated {
                base: reference,
                perturbation: &self.perturbation,
            })),
        }
    }
}

pub enum MemberPredictor<'a> {
    Input(InputActivated<'a>),
    Weights(Model),
}

impl Predictor for MemberPredictor<'_> {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        match self {
            MemberPredictor::Input(p) => p.predict(x),
            MemberPredictor::Weights(m) => m.predict(x),
        }
    }

    fn input_dim(&self) -> usize {
        match self {
            MemberPredictor::Input(p) => p.input_dim(),
            MemberPredictor::Weights(m) => m.input_dim(),
        }
    }

    fn output_dim(&self) -> usize {
        match self {
            MemberPredictor::Input(p) => p.output_dim(),
            MemberPredictor::Weights(m) => m.output_dim(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Boundary,
    Redundant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    Rejected(RejectReason),
}

/// The sampled set. The reference is always the first member; every other
/// member passed the boundary test and sits farther than the sparsity
/// tolerance from all earlier members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RashomonSubset {
    config: RashomonConfig,
    ref_loss: f64,
    members: Vec<SampledModel>,
    attributions: Vec<AttributionSet>,
    rejected_boundary: usize,
    rejected_redundant: usize,
}

impl RashomonSubset {
    pub fn new(config: RashomonConfig, reference: SampledModel, reference_attr: AttributionSet) -> Result<Self> {
        config.validate()?;
        if reference.source != ModelSource::Reference || !reference.perturbation.is_identity() {
            return Err(Error::InvalidArgument("the first member must be the unperturbed reference".into()));
        }
        if !(reference.loss >= 0.0 && reference.loss.is_finite()) {
            return Err(Error::NonFinite(format!("reference loss {}", reference.loss)));
        }
        Ok(Self {
            config,
            ref_loss: reference.loss,
            members: vec![reference],
            attributions: vec![reference_attr],
            rejected_boundary: 0,
            rejected_redundant: 0,
        })
    }

    pub fn config(&self) -> &RashomonConfig {
        &self.config
    }

    pub fn ref_loss(&self) -> f64 {
        self.ref_loss
    }

    pub fn members(&self) -> &[SampledModel] {
        &self.members
    }

    pub fn attributions(&self) -> &[AttributionSet] {
        &self.attributions
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rejected_boundary(&self) -> usize {
        self.rejected_boundary
    }

    pub fn rejected_redundant(&self) -> usize {
        self.rejected_redundant
    }

    pub fn rejected_count(&self) -> usize {
        self.rejected_boundary + self.rejected_redundant
    }

    /// Models that were tested against the boundary: members plus boundary
    /// rejections. Redundant candidates were inside the set and are not
    /// counted as failed searches.
    pub fn n_searched(&self) -> usize {
        self.members.len() + self.rejected_boundary
    }

    pub fn admit(&mut self, candidate: SampledModel, attribution: AttributionSet) -> Result<Admission> {
        self.admit_with(candidate, || Ok(attribution))
    }

    /// Like [`RashomonSubset::admit`], computing the attribution set only
    /// for candidates inside the boundary.
    pub fn admit_with(
        &mut self,
        candidate: SampledModel,
        attribution: impl FnOnce() -> Result<AttributionSet>,
    ) -> Result<Admission> {
        if !self.config.is_member(candidate.loss, self.ref_loss) {
            self.rejected_boundary += 1;
            return Ok(Admission::Rejected(RejectReason::Boundary));
        }
        let attribution = attribution()?;
        for existing in &self.attributions {
            if chebyshev_distance(&attribution, existing)? <= self.config.sparsity_tolerance {
                self.rejected_redundant += 1;
                return Ok(Admission::Rejected(RejectReason::Redundant));
            }
        }
        self.members.push(candidate);
        self.attributions.push(attribution);
        Ok(Admission::Admitted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(eps: f64, boundary: Boundary) -> RashomonConfig {
        RashomonConfig {
            epsilon_hat: eps,
            boundary,
            ..RashomonConfig::default()
        }
    }

    fn attr(id: &str, v: &[f64]) -> AttributionSet {
        AttributionSet::from_scores(id, v.iter().enumerate().map(|(i, &x)| (SubsetIndex::single(i), x)))
    }

    fn candidate(loss: f64, index: usize) -> SampledModel {
        SampledModel {
            perturbation: Perturbation::scaling(vec![1.1, 1.0]),
            source: ModelSource::RandomInput { index },
            loss,
            weights: None,
        }
    }

    #[test]
    fn thresholds() {
        assert!((cfg(0.1, Boundary::Multiplicative).threshold(0.5) - 0.05).abs() < 1e-16);
        assert_eq!(cfg(0.1, Boundary::Additive).threshold(0.0), 0.1);
        assert_eq!(cfg(0.0, Boundary::Multiplicative).threshold(3.0), 0.0);
        assert_eq!(cfg(0.0, Boundary::Additive).threshold(3.0), 0.0);
    }

    #[test]
    fn membership_is_inclusive() {
        let c = cfg(0.1, Boundary::Multiplicative);
        assert!(c.is_member(1.05, 1.0));
        assert!(c.is_member(c.boundary_loss(1.0), 1.0));
        assert!(is_member(1.1, 1.0, &c));
        assert!(!c.is_member(1.2, 1.0));
    }

    #[test]
    fn zero_reference_loss_switches_to_additive() {
        let c = cfg(0.1, Boundary::Multiplicative).effective(0.0);
        assert_eq!(c.boundary, Boundary::Additive);
        assert_eq!(cfg(0.1, Boundary::Multiplicative).effective(0.5).boundary, Boundary::Multiplicative);
    }

    #[test]
    fn admit_rejects_duplicate_of_reference() {
        let mut set = RashomonSubset::new(cfg(0.1, Boundary::Multiplicative), SampledModel::reference(2, 1.0), attr("ref", &[0.3, 0.1])).unwrap();
        let out = set.admit(candidate(1.0, 0), attr("c", &[0.3, 0.1])).unwrap();
        assert_eq!(out, Admission::Rejected(RejectReason::Redundant));
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn admit_rejects_outside_boundary() {
        let mut set = RashomonSubset::new(cfg(0.1, Boundary::Multiplicative), SampledModel::reference(2, 1.0), attr("ref", &[0.3, 0.1])).unwrap();
        let out = set.admit_with(candidate(1.5, 0), || panic!("not needed")).unwrap();
        assert_eq!(out, Admission::Rejected(RejectReason::Boundary));
        assert_eq!((set.rejected_count(), set.n_searched()), (1, 2));
    }

    #[test]
    fn candidates_two_tolerances_apart_are_both_admitted() {
        let tol = 0.01;
        let mut c = cfg(0.1, Boundary::Multiplicative);
        c.sparsity_tolerance = tol;
        let mut set = RashomonSubset::new(c, SampledModel::reference(2, 1.0), attr("ref", &[0.0, 0.0])).unwrap();
        assert_eq!(set.admit(candidate(1.01, 0), attr("a", &[1.0, 0.5])).unwrap(), Admission::Admitted);
        assert_eq!(set.admit(candidate(1.02, 1), attr("b", &[1.0 + 2.0 * tol, 0.5])).unwrap(), Admission::Admitted);
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn admit_rejects_key_mismatch() {
        let mut set = RashomonSubset::new(cfg(0.1, Boundary::Multiplicative), SampledModel::reference(2, 1.0), attr("ref", &[0.3, 0.1])).unwrap();
        assert!(set.admit(candidate(1.0, 0), attr("c", &[0.3])).is_err());
    }

    #[test]
    fn reference_must_be_identity() {
        let mut r = SampledModel::reference(2, 1.0);
        r.perturbation = Perturbation::scaling(vec![2.0, 1.0]);
        assert!(RashomonSubset::new(RashomonConfig::default(), r, attr("ref", &[0.0])).is_err());
    }

    proptest! {
        #[test]
        fn membership_is_monotone_in_epsilon(
            ref_loss in 0.0f64..10.0,
            candidate in 0.0f64..20.0,
            e1 in 0.0f64..1.0,
            extra in 0.0f64..1.0,
            additive in proptest::bool::ANY,
        ) {
            let b = if additive { Boundary::Additive } else { Boundary::Multiplicative };
            if cfg(e1, b).is_member(candidate, ref_loss) {
                prop_assert!(cfg(e1 + extra, b).is_member(candidate, ref_loss));
            }
        }

        #[test]
        fn container_stays_separated(
            scores in proptest::collection::vec((0.9f64..1.3, proptest::collection::vec(-1.0f64..1.0, 2)), 1..30),
            tol in 0.0f64..0.3,
        ) {
            let mut c = cfg(0.2, Boundary::Multiplicative);
            c.sparsity_tolerance = tol;
            let mut set = RashomonSubset::new(c, SampledModel::reference(2, 1.0), attr("ref", &[0.0, 0.0])).unwrap();
            for (i, (loss, s)) in scores.iter().enumerate() {
                set.admit(candidate(*loss, i), attr(&i.to_string(), s)).unwrap();
            }
            for m in set.members() {
                prop_assert!(c.is_member(m.loss, 1.0));
            }
            let a = set.attributions();
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    prop_assert!(chebyshev_distance(&a[i], &a[j]).unwrap() > tol);
                }
            }
        }
    }
}
