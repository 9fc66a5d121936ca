//! Run configuration: a TOML file, flag overrides and validation.
//!
//! Precedence, lowest to highest: built-in defaults, the top-level `seed` key
//! (default for every per-section seed), per-section keys in the file, then
//! command-line flags. A `--seed` flag replaces every seed.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::attribution::AttributionEstimator;
use crate::data::{LossKind, SplitFractions, SubsetIndex, FULL_PAIRS_ROW_CAP};
use crate::error::{Error, Result};
use crate::models::{MlpHyper, RootSign};
use crate::rashomon::{Boundary, RashomonConfig};
use crate::sampler::{LineSearchParams, SamplerConfig, Schedule, SignSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum DataSource {
    SyntheticQuadratic { n: usize, seed: u64 },
    Csv { path: PathBuf, targets: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitName {
    Train,
    Test,
    Validation,
}

impl SplitName {
    pub const ALL: [SplitName; 3] = [SplitName::Train, SplitName::Test, SplitName::Validation];

    pub fn name(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Test => "test",
            SplitName::Validation => "validation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    #[serde(flatten)]
    pub source: DataSource,
    pub fractions: SplitFractions,
    pub split_seed: u64,
    /// Partition used for sampling and attribution.
    pub eval: SplitName,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReferenceConfig {
    TrainLinear { l2: f64 },
    TrainMlp { mlp: MlpHyper },
    LoadBundle { path: PathBuf },
    QuadraticOracle { root_sign: RootSign },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RashomonSection {
    /// Tolerances to report, increasing.
    pub epsilons: Vec<f64>,
    pub boundary: Boundary,
    pub loss: LossKind,
    pub sparsity_tolerance: f64,
}

impl RashomonSection {
    pub fn epsilon_max(&self) -> f64 {
        *self.epsilons.last().expect("validated non-empty")
    }

    pub fn at(&self, epsilon_hat: f64) -> RashomonConfig {
        RashomonConfig {
            epsilon_hat,
            boundary: self.boundary,
            loss_kind: self.loss,
            sparsity_tolerance: self.sparsity_tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionConfig {
    pub estimator: AttributionEstimator,
    /// Largest subset order attributed.
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    RandomInput,
    RandomWeight,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::RandomInput => "random-input",
            Baseline::RandomWeight => "random-weight",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-input" => Ok(Baseline::RandomInput),
            "random-weight" => Ok(Baseline::RandomWeight),
            other => Err(Error::config(
                "baselines.methods",
                format!("unknown baseline '{other}' (expected random-input or random-weight)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub methods: Vec<Baseline>,
    pub candidates: usize,
    /// Half-width of the uniform column scale noise.
    pub input_scale: f64,
    /// Standard deviation of the weight noise.
    pub weight_scale: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub data: DataConfig,
    pub reference: ReferenceConfig,
    pub rashomon: RashomonSection,
    pub sampler: SamplerConfig,
    pub attribution: AttributionConfig,
    pub baselines: BaselineConfig,
    pub output: OutputConfig,
}

/// Command-line values that replace file values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub epsilons: Vec<f64>,
    pub levels: Option<usize>,
    pub loss: Option<LossKind>,
    pub order: Option<usize>,
    pub seed: Option<u64>,
    pub baselines: Option<Vec<Baseline>>,
    pub max_models: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    #[serde(default)]
    data: FileData,
    #[serde(default)]
    reference: FileReference,
    #[serde(default)]
    rashomon: FileRashomon,
    #[serde(default)]
    sampler: FileSampler,
    #[serde(default)]
    attribution: FileAttribution,
    #[serde(default)]
    baselines: FileBaselines,
    #[serde(default)]
    output: FileOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileData {
    source: Option<String>,
    n: Option<usize>,
    seed: Option<u64>,
    path: Option<PathBuf>,
    targets: Option<Vec<String>>,
    split: Option<Vec<f64>>,
    split_seed: Option<u64>,
    eval: Option<SplitName>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileReference {
    kind: Option<String>,
    l2: Option<f64>,
    path: Option<PathBuf>,
    root_sign: Option<RootSign>,
    mlp: Option<toml::Table>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRashomon {
    epsilon: Option<OneOrMany>,
    boundary: Option<Boundary>,
    loss: Option<LossKind>,
    sparsity_tolerance: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSampler {
    levels: Option<usize>,
    schedule: Option<String>,
    gamma: Option<f64>,
    epsilon_start: Option<f64>,
    epsilons: Option<Vec<f64>>,
    order: Option<usize>,
    signs: Option<SignSet>,
    directions: Option<Vec<String>>,
    samples_per_level: Option<usize>,
    max_models: Option<usize>,
    seed: Option<u64>,
    initial_step: Option<f64>,
    growth: Option<f64>,
    max_doublings: Option<usize>,
    tolerance: Option<f64>,
    max_bisections: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileAttribution {
    estimator: Option<String>,
    repeats: Option<usize>,
    seed: Option<u64>,
    cap: Option<usize>,
    order: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBaselines {
    methods: Option<Vec<String>>,
    candidates: Option<usize>,
    input_scale: Option<f64>,
    weight_scale: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    dir: Option<PathBuf>,
}

impl FileConfig {
    fn apply(&mut self, o: &Overrides) {
        if !o.epsilons.is_empty() {
            self.rashomon.epsilon = Some(OneOrMany::Many(o.epsilons.clone()));
        }
        if let Some(levels) = o.levels {
            self.sampler.levels = Some(levels);
        }
        if let Some(loss) = o.loss {
            self.rashomon.loss = Some(loss);
        }
        if let Some(order) = o.order {
            self.sampler.order = Some(order);
            self.attribution.order = Some(order);
        }
        if let Some(seed) = o.seed {
            self.seed = Some(seed);
            self.data.seed = Some(seed);
            self.data.split_seed = Some(seed);
            self.sampler.seed = Some(seed);
            self.attribution.seed = Some(seed);
            self.baselines.seed = Some(seed);
            if let Some(mlp) = self.reference.mlp.as_mut() {
                mlp.insert("seed".into(), toml::Value::Integer(seed as i64));
            }
        }
        if let Some(methods) = &o.baselines {
            self.baselines.methods = Some(methods.iter().map(|b| b.name().to_string()).collect());
        }
        if let Some(cap) = o.max_models {
            self.sampler.max_models = Some(cap);
        }
        if let Some(out) = &o.out {
            self.output.dir = Some(out.clone());
        }
    }

    fn resolve(self) -> Result<RunConfig> {
        let seed = self.seed.unwrap_or(0);
        let data = resolve_data(self.data, seed)?;
        let reference = resolve_reference(self.reference, seed)?;
        let rashomon = resolve_rashomon(self.rashomon)?;
        let sampler = resolve_sampler(self.sampler, seed, &rashomon)?;
        let attribution = resolve_attribution(self.attribution, seed)?;
        let baselines = resolve_baselines(self.baselines, seed)?;
        let output = OutputConfig {
            dir: self.output.dir.unwrap_or_else(|| PathBuf::from("out")),
        };
        let config = RunConfig {
            data,
            reference,
            rashomon,
            sampler,
            attribution,
            baselines,
            output,
        };
        config.validate()?;
        Ok(config)
    }
}

fn resolve_data(f: FileData, seed: u64) -> Result<DataConfig> {
    let source = match f.source.as_deref().unwrap_or("synthetic-quadratic") {
        "synthetic-quadratic" => {
            if f.path.is_some() || f.targets.is_some() {
                return Err(Error::config("data.path", "only valid with source = \"csv\""));
            }
            DataSource::SyntheticQuadratic {
                n: f.n.unwrap_or(12000),
                seed: f.seed.unwrap_or(seed),
            }
        }
        "csv" => {
            if f.n.is_some() {
                return Err(Error::config("data.n", "only valid with source = \"synthetic-quadratic\""));
            }
            let path = f.path.ok_or_else(|| Error::config("data.path", "required with source = \"csv\""))?;
            let targets = f
                .targets
                .ok_or_else(|| Error::config("data.targets", "required with source = \"csv\""))?;
            DataSource::Csv { path, targets }
        }
        other => {
            return Err(Error::config(
                "data.source",
                format!("unknown source '{other}' (expected synthetic-quadratic or csv)"),
            ))
        }
    };
    let fractions = match f.split {
        None => SplitFractions::default(),
        Some(v) if v.len() == 3 => SplitFractions {
            train: v[0],
            test: v[1],
            validation: v[2],
        },
        Some(v) => {
            return Err(Error::config(
                "data.split",
                format!("expected [train, test, validation], got {} values", v.len()),
            ))
        }
    };
    Ok(DataConfig {
        source,
        fractions,
        split_seed: f.split_seed.unwrap_or(seed),
        eval: f.eval.unwrap_or(SplitName::Test),
    })
}

fn resolve_reference(f: FileReference, seed: u64) -> Result<ReferenceConfig> {
    let kind = f.kind.as_deref().unwrap_or("train-mlp");
    let reject = |field: &str, present: bool| -> Result<()> {
        if present {
            Err(Error::config(format!("reference.{field}"), format!("not used by kind = \"{kind}\"")))
        } else {
            Ok(())
        }
    };
    match kind {
        "train-linear" => {
            reject("path", f.path.is_some())?;
            reject("root_sign", f.root_sign.is_some())?;
            reject("mlp", f.mlp.is_some())?;
            Ok(ReferenceConfig::TrainLinear { l2: f.l2.unwrap_or(0.0) })
        }
        "train-mlp" => {
            reject("l2", f.l2.is_some())?;
            reject("path", f.path.is_some())?;
            reject("root_sign", f.root_sign.is_some())?;
            let mlp = match f.mlp {
                None => MlpHyper {
                    seed,
                    ..MlpHyper::default()
                },
                Some(table) => {
                    let explicit_seed = table.contains_key("seed");
                    let mut hyper: MlpHyper = table
                        .try_into()
                        .map_err(|e: toml::de::Error| Error::config("reference.mlp", e.message().to_string()))?;
                    if !explicit_seed {
                        hyper.seed = seed;
                    }
                    hyper
                }
            };
            Ok(ReferenceConfig::TrainMlp { mlp })
        }
        "load-bundle" => {
            reject("l2", f.l2.is_some())?;
            reject("root_sign", f.root_sign.is_some())?;
            reject("mlp", f.mlp.is_some())?;
            let path = f
                .path
                .ok_or_else(|| Error::config("reference.path", "required with kind = \"load-bundle\""))?;
            Ok(ReferenceConfig::LoadBundle { path })
        }
        "quadratic-oracle" => {
            reject("l2", f.l2.is_some())?;
            reject("path", f.path.is_some())?;
            reject("mlp", f.mlp.is_some())?;
            Ok(ReferenceConfig::QuadraticOracle {
                root_sign: f.root_sign.unwrap_or(RootSign::Both),
            })
        }
        other => Err(Error::config(
            "reference.kind",
            format!("unknown kind '{other}' (expected train-linear, train-mlp, load-bundle or quadratic-oracle)"),
        )),
    }
}

fn resolve_rashomon(f: FileRashomon) -> Result<RashomonSection> {
    let mut epsilons = match f.epsilon {
        None => vec![0.1],
        Some(OneOrMany::One(e)) => vec![e],
        Some(OneOrMany::Many(v)) => v,
    };
    if epsilons.is_empty() {
        return Err(Error::config("rashomon.epsilon", "the tolerance list is empty"));
    }
    if let Some(bad) = epsilons.iter().find(|e| !(**e >= 0.0 && e.is_finite())) {
        return Err(Error::config("rashomon.epsilon", format!("must be >= 0, got {bad}")));
    }
    epsilons.sort_by(f64::total_cmp);
    epsilons.dedup();
    Ok(RashomonSection {
        epsilons,
        boundary: f.boundary.unwrap_or(Boundary::Multiplicative),
        loss: f.loss.unwrap_or(LossKind::MeanSquaredError),
        sparsity_tolerance: f.sparsity_tolerance.unwrap_or(1e-9),
    })
}

fn resolve_sampler(f: FileSampler, seed: u64, rashomon: &RashomonSection) -> Result<SamplerConfig> {
    let defaults = SamplerConfig::default();
    let schedule_name = f.schedule.as_deref().unwrap_or("linear");
    let misplaced = |field: &str, present: bool| -> Result<()> {
        if present {
            Err(Error::config(
                format!("sampler.{field}"),
                format!("not used by schedule = \"{schedule_name}\""),
            ))
        } else {
            Ok(())
        }
    };
    let schedule = match schedule_name {
        "linear" => {
            misplaced("gamma", f.gamma.is_some())?;
            misplaced("epsilon_start", f.epsilon_start.is_some())?;
            misplaced("epsilons", f.epsilons.is_some())?;
            Schedule::Linear
        }
        "geometric" => {
            misplaced("epsilons", f.epsilons.is_some())?;
            Schedule::Geometric {
                gamma: f.gamma.unwrap_or(2.0),
                epsilon_start: f.epsilon_start.unwrap_or(rashomon.epsilon_max() / 16.0),
            }
        }
        "explicit" => {
            misplaced("gamma", f.gamma.is_some())?;
            misplaced("epsilon_start", f.epsilon_start.is_some())?;
            let epsilons = f
                .epsilons
                .ok_or_else(|| Error::config("sampler.epsilons", "required with schedule = \"explicit\""))?;
            Schedule::Explicit { epsilons }
        }
        other => {
            return Err(Error::config(
                "sampler.schedule",
                format!("unknown schedule '{other}' (expected linear, geometric or explicit)"),
            ))
        }
    };
    if rashomon.epsilons.len() > 1 && schedule != Schedule::Linear {
        return Err(Error::config(
            "sampler.schedule",
            "a list of tolerances is itself the schedule; drop the schedule keys",
        ));
    }
    let directions = f
        .directions
        .map(|dirs| {
            dirs.iter()
                .map(|d| {
                    d.parse::<SubsetIndex>()
                        .map_err(|e| Error::config("sampler.directions", e.to_string()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let ls = LineSearchParams::default();
    Ok(SamplerConfig {
        levels: f.levels.unwrap_or(defaults.levels),
        schedule,
        directions,
        order: f.order.unwrap_or(defaults.order),
        signs: f.signs.unwrap_or(defaults.signs),
        line_search: LineSearchParams {
            initial_step: f.initial_step.unwrap_or(ls.initial_step),
            growth: f.growth.unwrap_or(ls.growth),
            max_doublings: f.max_doublings.unwrap_or(ls.max_doublings),
            tolerance: f.tolerance.unwrap_or(ls.tolerance),
            max_bisections: f.max_bisections.unwrap_or(ls.max_bisections),
        },
        samples_per_level: f.samples_per_level.unwrap_or(defaults.samples_per_level),
        max_models: f.max_models,
        seed: f.seed.unwrap_or(seed),
    })
}

fn resolve_attribution(f: FileAttribution, seed: u64) -> Result<AttributionConfig> {
    let estimator = match f.estimator.as_deref().unwrap_or("monte-carlo") {
        "monte-carlo" => {
            if f.cap.is_some() {
                return Err(Error::config("attribution.cap", "only valid with estimator = \"full-pairs\""));
            }
            AttributionEstimator::MonteCarlo {
                repeats: f.repeats.unwrap_or(100),
                seed: f.seed.unwrap_or(seed),
            }
        }
        "full-pairs" => {
            if f.repeats.is_some() {
                return Err(Error::config(
                    "attribution.repeats",
                    "only valid with estimator = \"monte-carlo\"",
                ));
            }
            AttributionEstimator::FullPairs {
                cap: f.cap.unwrap_or(FULL_PAIRS_ROW_CAP),
            }
        }
        other => {
            return Err(Error::config(
                "attribution.estimator",
                format!("unknown estimator '{other}' (expected monte-carlo or full-pairs)"),
            ))
        }
    };
    Ok(AttributionConfig {
        estimator,
        order: f.order.unwrap_or(2),
    })
}

fn resolve_baselines(f: FileBaselines, seed: u64) -> Result<BaselineConfig> {
    let mut methods = f
        .methods
        .unwrap_or_default()
        .iter()
        .map(|m| m.parse())
        .collect::<Result<Vec<Baseline>>>()?;
    methods.sort();
    methods.dedup();
    Ok(BaselineConfig {
        methods,
        candidates: f.candidates.unwrap_or(100),
        input_scale: f.input_scale.unwrap_or(0.5),
        weight_scale: f.weight_scale.unwrap_or(0.05),
        seed: f.seed.unwrap_or(seed),
    })
}

impl RunConfig {
    /// Parses and validates config text; unknown keys are errors.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with(text, &Overrides::default())
    }

    pub fn from_toml_with(text: &str, overrides: &Overrides) -> Result<Self> {
        let mut file: FileConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        file.apply(overrides);
        file.resolve()
    }

    /// Defaults, then the file (if any), then `overrides`.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::ConfigParse(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml_with(&text, overrides)
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.data.fractions;
        if [f.train, f.test, f.validation].iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::config("data.split", "fractions must be positive"));
        }
        if ((f.train + f.test + f.validation) - 1.0).abs() > 1e-9 {
            return Err(Error::config("data.split", "fractions must sum to 1"));
        }
        match &self.data.source {
            DataSource::SyntheticQuadratic { n, .. } if *n < 2 => {
                return Err(Error::config("data.n", format!("must be >= 2, got {n}")));
            }
            DataSource::Csv { targets, .. } if targets.is_empty() => {
                return Err(Error::config("data.targets", "at least one target column is required"));
            }
            _ => {}
        }
        match &self.reference {
            ReferenceConfig::TrainLinear { l2 } if !(*l2 >= 0.0 && l2.is_finite()) => {
                return Err(Error::config("reference.l2", format!("must be >= 0, got {l2}")));
            }
            ReferenceConfig::TrainMlp { mlp } => {
                if mlp.hidden.contains(&0) {
                    return Err(Error::config("reference.mlp.hidden", "layer widths must be >= 1"));
                }
                if !(mlp.learning_rate > 0.0 && mlp.learning_rate.is_finite()) {
                    return Err(Error::config("reference.mlp.learning_rate", "must be > 0"));
                }
                if mlp.batch_size == 0 {
                    return Err(Error::config("reference.mlp.batch_size", "must be >= 1"));
                }
                if !matches!(mlp.loss, LossKind::MeanSquaredError | LossKind::LogisticLoss) {
                    return Err(Error::config("reference.mlp.loss", "training supports mse and logloss"));
                }
            }
            _ => {}
        }
        for &eps in &self.rashomon.epsilons {
            self.rashomon.at(eps).validate()?;
        }
        self.sampler.validate()?;
        if self.rashomon.epsilon_max() == 0.0 && self.sampler.schedule == Schedule::Linear {
            // a zero tolerance has nothing to schedule
        } else if self.rashomon.epsilons.len() == 1 {
            crate::sampler::epsilon_schedule(&self.sampler, self.rashomon.epsilon_max())?;
        }
        if !(1..=2).contains(&self.attribution.order) {
            return Err(Error::config(
                "attribution.order",
                format!("must be 1 or 2, got {}", self.attribution.order),
            ));
        }
        match self.attribution.estimator {
            AttributionEstimator::MonteCarlo { repeats, .. } if repeats < 2 => {
                return Err(Error::config("attribution.repeats", format!("must be >= 2, got {repeats}")));
            }
            AttributionEstimator::FullPairs { cap: 0 } => {
                return Err(Error::config("attribution.cap", "must be >= 1"));
            }
            _ => {}
        }
        let b = &self.baselines;
        if b.methods.contains(&Baseline::RandomWeight)
            && matches!(
                self.reference,
                ReferenceConfig::TrainLinear { .. } | ReferenceConfig::QuadraticOracle { .. }
            )
        {
            return Err(Error::config("baselines.methods", "random-weight needs an MLP reference"));
        }
        if !b.methods.is_empty() && b.candidates == 0 {
            return Err(Error::config("baselines.candidates", "must be >= 1"));
        }
        if !(b.input_scale >= 0.0 && b.input_scale.is_finite()) {
            return Err(Error::config("baselines.input_scale", format!("must be >= 0, got {}", b.input_scale)));
        }
        if !(b.weight_scale >= 0.0 && b.weight_scale.is_finite()) {
            return Err(Error::config("baselines.weight_scale", format!("must be >= 0, got {}", b.weight_scale)));
        }
        Ok(())
    }

    /// The sampler schedule actually walked: a list of several tolerances
    /// replaces the configured schedule so every reported tolerance is a
    /// level of one nested run.
    pub fn master_sampler(&self) -> SamplerConfig {
        let positive: Vec<f64> = self.rashomon.epsilons.iter().copied().filter(|e| *e > 0.0).collect();
        if self.rashomon.epsilons.len() > 1 && !positive.is_empty() {
            SamplerConfig {
                levels: positive.len(),
                schedule: Schedule::Explicit { epsilons: positive },
                ..self.sampler.clone()
            }
        } else {
            self.sampler.clone()
        }
    }
}

/// Parses config text into a fully defaulted, validated configuration.
pub fn validate_config(text: &str) -> Result<RunConfig> {
    RunConfig::from_toml_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(err: Error) -> String {
        match err {
            Error::Config { field, .. } => field,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn minimal_config_is_defaulted() {
        let c = validate_config(
            r#"
[reference]
kind = "quadratic-oracle"
[rashomon]
epsilon = 0.1
"#,
        )
        .unwrap();
        assert_eq!(c.sampler.levels, 5);
        assert_eq!(c.sampler.schedule, Schedule::Linear);
        assert_eq!(c.sampler.signs, SignSet::Both);
        assert_eq!(c.rashomon.epsilons, vec![0.1]);
        assert_eq!(
            c.data.source,
            DataSource::SyntheticQuadratic { n: 12000, seed: 0 }
        );
        assert_eq!(c.reference, ReferenceConfig::QuadraticOracle { root_sign: RootSign::Both });
    }

    #[test]
    fn empty_text_is_a_valid_config() {
        let c = validate_config("").unwrap();
        assert!(matches!(c.reference, ReferenceConfig::TrainMlp { .. }));
        assert_eq!(c.output.dir, PathBuf::from("out"));
    }

    #[test]
    fn negative_epsilon_names_the_field() {
        let err = validate_config("[rashomon]\nepsilon = -0.1\n").unwrap_err();
        assert!(err.is_config_error());
        assert_eq!(field_of(err), "rashomon.epsilon");
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = validate_config("[rashomon]\nepsilonn = 0.1\n").unwrap_err();
        assert!(err.is_config_error());
        let msg = err.to_string();
        assert!(msg.contains("epsilonn"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn parse_errors_report_the_line() {
        let msg = validate_config("[sampler]\nlevels = = 3\n").unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn epsilon_list_is_sorted_and_drives_the_schedule() {
        let c = validate_config("[rashomon]\nepsilon = [0.15, 0.01, 0.05, 0.03, 0.1]\n").unwrap();
        assert_eq!(c.rashomon.epsilons, vec![0.01, 0.03, 0.05, 0.1, 0.15]);
        let master = c.master_sampler();
        assert_eq!(
            master.schedule,
            Schedule::Explicit {
                epsilons: vec![0.01, 0.03, 0.05, 0.1, 0.15]
            }
        );
        assert_eq!(master.levels, 5);
    }

    #[test]
    fn epsilon_list_conflicts_with_explicit_schedule_keys() {
        let err = validate_config(
            "[rashomon]\nepsilon = [0.05, 0.1]\n[sampler]\nschedule = \"geometric\"\n",
        )
        .unwrap_err();
        assert_eq!(field_of(err), "sampler.schedule");
    }

    #[test]
    fn flags_override_file_values() {
        let text = "seed = 3\n[rashomon]\nepsilon = 0.2\nloss = \"mae\"\n[sampler]\nlevels = 4\nseed = 9\n";
        let c = RunConfig::from_toml_with(text, &Overrides::default()).unwrap();
        assert_eq!(c.sampler.seed, 9);
        assert_eq!(c.baselines.seed, 3);
        assert_eq!(c.data.split_seed, 3);
        let o = Overrides {
            epsilons: vec![0.05],
            levels: Some(2),
            loss: Some(LossKind::MeanSquaredError),
            order: Some(1),
            seed: Some(11),
            baselines: Some(vec![Baseline::RandomInput]),
            max_models: Some(7),
            out: Some(PathBuf::from("elsewhere")),
        };
        let c = RunConfig::from_toml_with(text, &o).unwrap();
        assert_eq!(c.rashomon.epsilons, vec![0.05]);
        let with_mlp = format!("{text}[reference.mlp]\nepochs = 3\n");
        let c0 = RunConfig::from_toml_with(&with_mlp, &Overrides::default()).unwrap();
        assert!(matches!(&c0.reference, ReferenceConfig::TrainMlp { mlp } if mlp.seed == 3 && mlp.epochs == 3));
        assert_eq!(c.rashomon.loss, LossKind::MeanSquaredError);
        assert_eq!(c.sampler.levels, 2);
        assert_eq!((c.sampler.order, c.attribution.order), (1, 1));
        assert_eq!(c.sampler.seed, 11);
        assert_eq!(c.baselines.methods, vec![Baseline::RandomInput]);
        assert_eq!(c.sampler.max_models, Some(7));
        assert_eq!(c.output.dir, PathBuf::from("elsewhere"));
        match c.reference {
            ReferenceConfig::TrainMlp { mlp } => assert_eq!(mlp.seed, 11),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constraint_violations_name_their_field() {
        let cases = [
            ("[data]\nsplit = [0.5, 0.5, 0.5]\n", "data.split"),
            ("[data]\nsource = \"csv\"\n", "data.path"),
            ("[data]\nsource = \"csv\"\npath = \"x.csv\"\n", "data.targets"),
            ("[data]\nn = 1\n", "data.n"),
            ("[reference]\nkind = \"forest\"\n", "reference.kind"),
            ("[reference]\nkind = \"train-linear\"\nl2 = -1.0\n", "reference.l2"),
            ("[reference]\nkind = \"load-bundle\"\n", "reference.path"),
            ("[sampler]\nlevels = 0\n", "sampler.levels"),
            ("[sampler]\norder = 3\n", "sampler.order"),
            ("[sampler]\ndirections = [\"0:0\"]\n", "sampler.directions"),
            ("[attribution]\nrepeats = 1\n", "attribution.repeats"),
            ("[attribution]\norder = 0\n", "attribution.order"),
            ("[baselines]\nmethods = [\"dropout\"]\n", "baselines.methods"),
            ("[baselines]\ninput_scale = -2.0\n", "baselines.input_scale"),
            ("[reference.mlp]\nhiden = [4]\n", "reference.mlp"),
            (
                "[reference]\nkind = \"train-linear\"\n[baselines]\nmethods = [\"random-weight\"]\n",
                "baselines.methods",
            ),
            ("[rashomon]\nepsilon = []\n", "rashomon.epsilon"),
            ("[rashomon]\nsparsity_tolerance = -1.0\n", "rashomon.sparsity_tolerance"),
        ];
        for (text, field) in cases {
            let err = validate_config(text).unwrap_err();
            assert_eq!(field_of(err), field, "{text}");
        }
    }

    #[test]
    fn zero_tolerance_needs_no_schedule() {
        let c = validate_config("[rashomon]\nepsilon = 0.0\n").unwrap();
        assert_eq!(c.rashomon.epsilons, vec![0.0]);
    }

    #[test]
    fn config_echo_round_trips() {
        let c = validate_config("[reference]\nkind = \"train-linear\"\n[baselines]\nmethods = [\"random-input\"]\n").unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
