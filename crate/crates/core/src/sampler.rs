//! Sampling members of the Rashomon set.
//!
//! The main sampler walks each feature direction outward from the reference
//! by scaling the direction's columns by `1 + sign * lambda`, stopping at one
//! point per tolerance level. Two random baselines (input scaling and weight
//! noise) produce comparison sets.

use std::collections::HashMap;

use ndarray::ArrayView2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::attribution::AttributionSet;
use crate::data::{empirical_loss, model_loss, perturb_columns, Dataset, Perturbation, SubsetIndex};
use crate::error::{Error, Result};
use crate::models::{BundleMetadata, Model, ModelBundle, Predictor};
use crate::rashomon::{ModelSource, RashomonConfig, RashomonSubset, SampledModel, Sign};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Schedule {
    /// `eps_i = i * eps_hat / K`.
    Linear,
    /// `eps_1 = epsilon_start`, `eps_i = min(gamma * eps_{i-1}, eps_hat)`.
    Geometric { gamma: f64, epsilon_start: f64 },
    /// A given increasing list ending at the tolerance.
    Explicit { epsilons: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignSet {
    Plus,
    Minus,
    Both,
}

impl SignSet {
    pub fn signs(self) -> &'static [Sign] {
        match self {
            SignSet::Plus => &[Sign::Plus],
            SignSet::Minus => &[Sign::Minus],
            SignSet::Both => &[Sign::Plus, Sign::Minus],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LineSearchParams {
    pub initial_step: f64,
    pub growth: f64,
    pub max_doublings: usize,
    /// Bisection stops once the loss is within `tolerance * L_ref` below
    /// the target.
    pub tolerance: f64,
    pub max_bisections: usize,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        Self {
            initial_step: 1e-3,
            growth: 2.0,
            max_doublings: 40,
            tolerance: 1e-6,
            max_bisections: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub levels: usize,
    pub schedule: Schedule,
    /// Explicit directions; `None` walks every subset up to `order`.
    pub directions: Option<Vec<SubsetIndex>>,
    pub order: usize,
    pub signs: SignSet,
    pub line_search: LineSearchParams,
    pub samples_per_level: usize,
    /// Cap on set size, reference included.
    pub max_models: Option<usize>,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            levels: 5,
            schedule: Schedule::Linear,
            directions: None,
            order: 2,
            signs: SignSet::Both,
            line_search: LineSearchParams::default(),
            samples_per_level: 1,
            max_models: None,
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::config("sampler.levels", "must be >= 1"));
        }
        if !(1..=2).contains(&self.order) {
            return Err(Error::config("sampler.order", format!("must be 1 or 2, got {}", self.order)));
        }
        if self.samples_per_level == 0 {
            return Err(Error::config("sampler.samples_per_level", "must be >= 1"));
        }
        if self.max_models == Some(0) {
            return Err(Error::config("sampler.max_models", "must be >= 1"));
        }
        let ls = &self.line_search;
        if !(ls.initial_step > 0.0 && ls.initial_step.is_finite()) {
            return Err(Error::config("sampler.initial_step", "must be > 0"));
        }
        if !(ls.growth > 1.0 && ls.growth.is_finite()) {
            return Err(Error::config("sampler.growth", "must be > 1"));
        }
        if !(ls.tolerance > 0.0 && ls.tolerance.is_finite()) {
            return Err(Error::config("sampler.tolerance", "must be > 0"));
        }
        if let Schedule::Geometric { gamma, epsilon_start } = self.schedule {
            if !(gamma > 1.0 && gamma.is_finite()) {
                return Err(Error::config("sampler.gamma", format!("must be > 1, got {gamma}")));
            }
            if !(epsilon_start > 0.0 && epsilon_start.is_finite()) {
                return Err(Error::config(
                    "sampler.epsilon_start",
                    format!("must be > 0, got {epsilon_start}"),
                ));
            }
        }
        Ok(())
    }

    pub fn directions_for(&self, n_features: usize) -> Result<Vec<SubsetIndex>> {
        match &self.directions {
            Some(dirs) => {
                for d in dirs {
                    SubsetIndex::new(d.indices().to_vec(), n_features)?;
                }
                let mut dirs = dirs.clone();
                dirs.sort();
                dirs.dedup();
                Ok(dirs)
            }
            None => Ok(SubsetIndex::family(n_features, self.order)),
        }
    }
}

/// Tolerance levels walked by the sampler; the last equals `epsilon_hat`.
pub fn epsilon_schedule(config: &SamplerConfig, epsilon_hat: f64) -> Result<Vec<f64>> {
    if !(epsilon_hat >= 0.0 && epsilon_hat.is_finite()) {
        return Err(Error::config("rashomon.epsilon", format!("must be >= 0, got {epsilon_hat}")));
    }
    match &config.schedule {
        Schedule::Linear => {
            let k = config.levels;
            if k == 0 {
                return Err(Error::config("sampler.levels", "must be >= 1"));
            }
            if epsilon_hat == 0.0 && k > 1 {
                return Err(Error::config("sampler.levels", "a zero tolerance admits a single level only"));
            }
            let step = epsilon_hat / k as f64;
            let mut out: Vec<f64> = (1..=k).map(|i| i as f64 * step).collect();
            out[k - 1] = epsilon_hat;
            Ok(out)
        }
        Schedule::Geometric { gamma, epsilon_start } => {
            if !(*epsilon_start > 0.0) {
                return Err(Error::config(
                    "sampler.epsilon_start",
                    format!("must be > 0, got {epsilon_start}"),
                ));
            }
            if !(*gamma > 1.0) {
                return Err(Error::config("sampler.gamma", format!("must be > 1, got {gamma}")));
            }
            let mut out = vec![epsilon_start.min(epsilon_hat)];
            while *out.last().expect("non-empty") < epsilon_hat {
                let next = (gamma * out.last().expect("non-empty")).min(epsilon_hat);
                out.push(next);
            }
            Ok(out)
        }
        Schedule::Explicit { epsilons } => {
            if epsilons.is_empty() {
                return Err(Error::config("rashomon.epsilon", "empty tolerance list"));
            }
            if epsilons.windows(2).any(|w| w[1] <= w[0]) || epsilons[0] < 0.0 {
                return Err(Error::config("rashomon.epsilon", "tolerances must be non-negative and strictly increasing"));
            }
            if *epsilons.last().expect("non-empty") != epsilon_hat {
                return Err(Error::config("rashomon.epsilon", "the last scheduled tolerance must equal the set tolerance"));
            }
            Ok(epsilons.clone())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum LineSearchOutcome {
    /// A point with loss in the band, or (when the band is narrower than the
    /// tolerance allows) the closest point found below it.
    Step { lambda: f64, loss: f64 },
    /// The loss never reached the band within the bracketing budget.
    Flat,
    /// No progress beyond the starting point was possible.
    Stalled,
}

/// One-dimensional search for `lambda > start` with `loss_at(lambda)` in
/// `[band.0, band.1]`: geometric bracketing from `start`, then bisection.
/// `tol_abs` is the accepted shortfall below the band.
pub fn line_search(
    mut loss_at: impl FnMut(f64) -> Result<f64>,
    start: f64,
    start_loss: f64,
    band: (f64, f64),
    tol_abs: f64,
    params: &LineSearchParams,
) -> Result<LineSearchOutcome> {
    let (lo, hi) = band;
    if !(lo <= hi) {
        return Err(Error::InvalidArgument(format!("empty target band [{lo}, {hi}]")));
    }
    if start_loss >= lo {
        return Ok(LineSearchOutcome::Stalled);
    }
    let mut check = |lambda: f64| -> Result<f64> {
        let loss = loss_at(lambda)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite(format!("loss {loss} at step {lambda}")));
        }
        Ok(loss)
    };

    let (mut a, mut la) = (start, start_loss);
    let mut upper = None;
    let mut step = params.initial_step;
    for _ in 0..=params.max_doublings {
        let lambda = start + step;
        let loss = check(lambda)?;
        if loss >= lo {
            if loss <= hi {
                return Ok(LineSearchOutcome::Step { lambda, loss });
            }
            upper = Some(lambda);
            break;
        }
        (a, la) = (lambda, loss);
        step *= params.growth;
    }
    let Some(mut b) = upper else {
        return Ok(LineSearchOutcome::Flat);
    };

    for _ in 0..params.max_bisections {
        if lo - la <= tol_abs {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let loss = check(mid)?;
        if (lo..=hi).contains(&loss) {
            return Ok(LineSearchOutcome::Step { lambda: mid, loss });
        }
        if loss < lo {
            (a, la) = (mid, loss);
        } else {
            b = mid;
        }
    }
    if a == start {
        Ok(LineSearchOutcome::Stalled)
    } else {
        Ok(LineSearchOutcome::Step { lambda: a, loss: la })
    }
}

/// Scale factors that stretch `direction`'s columns by `1 + sign * lambda`.
pub fn direction_perturbation(n_features: usize, direction: &SubsetIndex, sign: Sign, lambda: f64) -> Perturbation {
    let mut tau = vec![1.0; n_features];
    for &i in direction.indices() {
        tau[i] = 1.0 + sign.factor() * lambda;
    }
    Perturbation::scaling(tau)
}

/// Loss of the reference after stretching along `direction` by `lambda`.
pub fn direction_loss(
    f: &dyn Predictor,
    d: &Dataset,
    kind: crate::data::LossKind,
    direction: &SubsetIndex,
    sign: Sign,
    lambda: f64,
) -> Result<f64> {
    perturbed_loss(f, d.x(), d, kind, &direction_perturbation(d.n_features(), direction, sign, lambda))
}

fn perturbed_loss(
    f: &dyn Predictor,
    x: ArrayView2<'_, f64>,
    d: &Dataset,
    kind: crate::data::LossKind,
    pert: &Perturbation,
) -> Result<f64> {
    let z = perturb_columns(x, pert)?;
    let predictions = f.predict(z.view())?;
    empirical_loss(predictions.view(), d.y(), kind)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub level: usize,
    pub step: usize,
    pub epsilon: f64,
    /// Cumulative step from the reference.
    pub lambda: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkStatus {
    Completed,
    /// The loss never moved enough to reach the first level.
    Flat,
    /// Reached some levels, then could not progress.
    Stopped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub direction: SubsetIndex,
    pub sign: Sign,
    pub status: WalkStatus,
    pub points: Vec<TrajectoryPoint>,
}

/// Everything the sampler explored, before admission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrsRun {
    pub config: RashomonConfig,
    pub ref_loss: f64,
    pub schedule: Vec<f64>,
    pub trajectories: Vec<Trajectory>,
    /// Candidates in canonical order: level, step, direction, sign.
    pub candidates: Vec<SampledModel>,
}

impl GrsRun {
    /// Candidates belonging to the first `levels` schedule levels.
    pub fn candidates_up_to(&self, levels: usize) -> &[SampledModel] {
        let end = self
            .candidates
            .iter()
            .position(|c| matches!(c.source, ModelSource::Grs { level, .. } if level > levels))
            .unwrap_or(self.candidates.len());
        &self.candidates[..end]
    }
}

/// Walks every direction and sign through the schedule. `config` should
/// already be the effective configuration for `ref_loss`.
pub fn grs_explore(
    f_ref: &dyn Predictor,
    eval: &Dataset,
    config: &RashomonConfig,
    ref_loss: f64,
    sconfig: &SamplerConfig,
) -> Result<GrsRun> {
    sconfig.validate()?;
    config.validate()?;
    let schedule = if config.epsilon_hat == 0.0 {
        Vec::new()
    } else {
        epsilon_schedule(sconfig, config.epsilon_hat)?
    };
    let p = eval.n_features();
    let directions = sconfig.directions_for(p)?;

    // (level, step, epsilon, target loss), strictly increasing targets
    let mut targets = Vec::new();
    let mut prev = ref_loss;
    for (i, &eps) in schedule.iter().enumerate() {
        let level_target = config.with_epsilon(eps).boundary_loss(ref_loss);
        let q = sconfig.samples_per_level;
        for j in 1..=q {
            let t = if j == q {
                level_target
            } else {
                prev + (level_target - prev) * j as f64 / q as f64
            };
            targets.push((i + 1, j, eps, t));
        }
        prev = level_target;
    }
    let scale = if ref_loss > 0.0 {
        ref_loss
    } else {
        config.threshold(ref_loss).max(f64::MIN_POSITIVE)
    };
    let tol_abs = sconfig.line_search.tolerance * scale;

    let x = eval.x();
    let mut trajectories = Vec::new();
    let mut candidates = Vec::new();
    for direction in &directions {
        for &sign in sconfig.signs.signs() {
            let mut points = Vec::new();
            let mut status = WalkStatus::Completed;
            let (mut lambda, mut loss) = (0.0, ref_loss);
            for &(level, step, epsilon, target) in &targets {
                let outcome = line_search(
                    |l| perturbed_loss(f_ref, x, eval, config.loss_kind, &direction_perturbation(p, direction, sign, l)),
                    lambda,
                    loss,
                    (target, target),
                    tol_abs,
                    &sconfig.line_search,
                )
                .map_err(|e| match e {
                    Error::NonFinite(msg) => Error::NonFinite(format!("direction {direction}{sign}: {msg}")),
                    other => other,
                })?;
                match outcome {
                    LineSearchOutcome::Step { lambda: l, loss: v } => {
                        (lambda, loss) = (l, v);
                        points.push(TrajectoryPoint {
                            level,
                            step,
                            epsilon,
                            lambda,
                            loss,
                        });
                        candidates.push(SampledModel {
                            perturbation: direction_perturbation(p, direction, sign, lambda),
                            source: ModelSource::Grs {
                                direction: direction.clone(),
                                sign,
                                level,
                                step,
                                epsilon,
                            },
                            loss,
                            weights: None,
                        });
                    }
                    LineSearchOutcome::Flat | LineSearchOutcome::Stalled => {
                        status = if points.is_empty() && outcome == LineSearchOutcome::Flat {
                            WalkStatus::Flat
                        } else {
                            WalkStatus::Stopped
                        };
                        break;
                    }
                }
            }
            log::debug!("direction {direction}{sign}: {status:?} after {} points", points.len());
            trajectories.push(Trajectory {
                direction: direction.clone(),
                sign,
                status,
                points,
            });
        }
    }

    candidates.sort_by_key(grs_key);
    Ok(GrsRun {
        config: *config,
        ref_loss,
        schedule,
        trajectories,
        candidates,
    })
}

fn grs_key(m: &SampledModel) -> (usize, usize, SubsetIndex, Sign) {
    match &m.source {
        ModelSource::Grs {
            direction,
            sign,
            level,
            step,
            ..
        } => (*level, *step, direction.clone(), *sign),
        _ => (0, 0, SubsetIndex::single(0), Sign::Plus),
    }
}

/// Admits `candidates` in order into a set seeded with the reference,
/// stopping once `max_models` members are reached. `attribution(i)` is only
/// called for candidates inside the boundary.
pub fn assemble_subset(
    config: RashomonConfig,
    ref_loss: f64,
    n_features: usize,
    reference_attr: AttributionSet,
    candidates: &[SampledModel],
    max_models: Option<usize>,
    mut attribution: impl FnMut(usize, &SampledModel) -> Result<AttributionSet>,
) -> Result<RashomonSubset> {
    let mut set = RashomonSubset::new(config, SampledModel::reference(n_features, ref_loss), reference_attr)?;
    for (i, c) in candidates.iter().enumerate() {
        if max_models.is_some_and(|cap| set.len() >= cap) {
            break;
        }
        set.admit_with(c.clone(), || attribution(i, c))?;
    }
    Ok(set)
}

/// Attribution sets cached by candidate index, for re-admitting the same
/// pool at several tolerances.
#[derive(Default)]
pub struct AttributionCache {
    sets: HashMap<usize, AttributionSet>,
}

impl AttributionCache {
    pub fn get_or_compute(
        &mut self,
        index: usize,
        compute: impl FnOnce() -> Result<AttributionSet>,
    ) -> Result<AttributionSet> {
        if let Some(s) = self.sets.get(&index) {
            return Ok(s.clone());
        }
        let s = compute()?;
        self.sets.insert(index, s.clone());
        Ok(s)
    }
}

/// Attribution of one member; shared by every sampler.
pub type MemberAttribution<'a> = dyn FnMut(&SampledModel) -> Result<AttributionSet> + 'a;

/// Output of [`grs_sample`].
#[derive(Debug, Clone)]
pub struct GrsOutput {
    pub subset: RashomonSubset,
    pub run: GrsRun,
}

/// Samples the set at `rconfig.epsilon_hat`: explore, then admit in
/// canonical order.
pub fn grs_sample(
    f_ref: &dyn Predictor,
    eval: &Dataset,
    rconfig: &RashomonConfig,
    sconfig: &SamplerConfig,
    attribution: &mut MemberAttribution<'_>,
) -> Result<GrsOutput> {
    let ref_loss = model_loss(f_ref, eval, rconfig.loss_kind)?;
    let config = rconfig.effective(ref_loss);
    let run = grs_explore(f_ref, eval, &config, ref_loss, sconfig)?;
    let reference = SampledModel::reference(eval.n_features(), ref_loss);
    let ref_attr = attribution(&reference)?;
    let subset = assemble_subset(
        config,
        ref_loss,
        eval.n_features(),
        ref_attr,
        &run.candidates,
        sconfig.max_models,
        |_, c| attribution(c),
    )?;
    Ok(GrsOutput { subset, run })
}

/// Random column scalings `tau_i = 1 + U(-scale, scale)` with their losses.
pub fn random_input_candidates(
    f_ref: &dyn Predictor,
    eval: &Dataset,
    loss_kind: crate::data::LossKind,
    n_candidates: usize,
    scale: f64,
    seed: u64,
) -> Result<Vec<SampledModel>> {
    if n_candidates == 0 {
        return Err(Error::config("baselines.candidates", "must be >= 1"));
    }
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::config("baselines.input_scale", format!("must be >= 0, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = eval.n_features();
    (0..n_candidates)
        .map(|index| {
            let tau: Vec<f64> = (0..p)
                .map(|_| if scale > 0.0 { 1.0 + rng.random_range(-scale..scale) } else { 1.0 })
                .collect();
            let perturbation = Perturbation::scaling(tau);
            let loss = perturbed_loss(f_ref, eval.x(), eval, loss_kind, &perturbation)?;
            Ok(SampledModel {
                perturbation,
                source: ModelSource::RandomInput { index },
                loss,
                weights: None,
            })
        })
        .collect()
}

/// Copies of an MLP reference with Gaussian noise of standard deviation
/// `scale` added to every parameter.
pub fn random_weight_candidates(
    f_ref: &Model,
    eval: &Dataset,
    loss_kind: crate::data::LossKind,
    n_candidates: usize,
    scale: f64,
    seed: u64,
) -> Result<Vec<SampledModel>> {
    let Model::Mlp(mlp) = f_ref else {
        return Err(Error::InvalidArgument(format!(
            "the random-weight baseline needs an MLP reference, got {}",
            f_ref.kind()
        )));
    };
    if n_candidates == 0 {
        return Err(Error::config("baselines.candidates", "must be >= 1"));
    }
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::config("baselines.weight_scale", format!("must be >= 0, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, scale).expect("finite scale");
    let base = mlp.params();
    (0..n_candidates)
        .map(|index| {
            let params: Vec<f64> = base.iter().map(|w| w + noise.sample(&mut rng)).collect();
            let model = Model::Mlp(mlp.with_params(&params)?);
            let loss = model_loss(&model, eval, loss_kind)?;
            Ok(SampledModel {
                perturbation: Perturbation::identity(eval.n_features()),
                source: ModelSource::RandomWeights { index },
                loss,
                weights: Some(ModelBundle::from_model(&model, BundleMetadata::default())),
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn baseline_random_input(
    f_ref: &dyn Predictor,
    eval: &Dataset,
    rconfig: &RashomonConfig,
    n_candidates: usize,
    scale: f64,
    seed: u64,
    max_models: Option<usize>,
    attribution: &mut MemberAttribution<'_>,
) -> Result<RashomonSubset> {
    let ref_loss = model_loss(f_ref, eval, rconfig.loss_kind)?;
    let config = rconfig.effective(ref_loss);
    let candidates = random_input_candidates(f_ref, eval, config.loss_kind, n_candidates, scale, seed)?;
    let ref_attr = attribution(&SampledModel::reference(eval.n_features(), ref_loss))?;
    assemble_subset(config, ref_loss, eval.n_features(), ref_attr, &candidates, max_models, |_, c| attribution(c))
}

#[allow(clippy::too_many_arguments)]
pub fn baseline_random_weights(
    f_ref: &Model,
    eval: &Dataset,
    rconfig: &RashomonConfig,
    n_candidates: usize,
    scale: f64,
    seed: u64,
    max_models: Option<usize>,
    attribution: &mut MemberAttribution<'_>,
) -> Result<RashomonSubset> {
    let ref_loss = model_loss(f_ref, eval, rconfig.loss_kind)?;
    let config = rconfig.effective(ref_loss);
    let candidates = random_weight_candidates(f_ref, eval, config.loss_kind, n_candidates, scale, seed)?;
    let ref_attr = attribution(&SampledModel::reference(eval.n_features(), ref_loss))?;
    assemble_subset(config, ref_loss, eval.n_features(), ref_attr, &candidates, max_models, |_, c| attribution(c))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionGap {
    pub direction: SubsetIndex,
    pub sign: Sign,
    pub final_loss: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub boundary_loss: f64,
    pub directions: Vec<DirectionGap>,
    /// Directions along which the loss never moved.
    pub flat: Vec<(SubsetIndex, Sign)>,
    /// Directions with a recorded loss outside `[ref_loss, boundary]`.
    pub violations: Vec<(SubsetIndex, Sign)>,
    pub max_gap: Option<f64>,
}

/// Distance between each walk's final loss and the boundary.
pub fn convergence_report(run: &GrsRun) -> ConvergenceReport {
    let boundary = run.config.boundary_loss(run.ref_loss);
    let mut directions = Vec::new();
    let mut flat = Vec::new();
    let mut violations = Vec::new();
    for t in &run.trajectories {
        if t.points.iter().any(|p| p.loss > boundary || p.loss < run.ref_loss) {
            violations.push((t.direction.clone(), t.sign));
        }
        match t.points.last() {
            Some(last) => directions.push(DirectionGap {
                direction: t.direction.clone(),
                sign: t.sign,
                final_loss: last.loss,
                gap: (last.loss - boundary).abs(),
            }),
            None => flat.push((t.direction.clone(), t.sign)),
        }
    }
    let max_gap = directions.iter().map(|d| d.gap).reduce(f64::max);
    ConvergenceReport {
        boundary_loss: boundary,
        directions,
        flat,
        violations,
        max_gap,
    }
}
