//! End-to-end run: dataset, reference, sampling at every tolerance,
//! attribution spaces, metrics and the report files.
//!
//! Each stage has a serializable artifact so the command-line tool can run
//! the stages one at a time. Nothing is written to the output directory
//! until the whole report is assembled.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::attribution::{attribution_space, AttributionSet, AttributionSpace, Attributor};
use crate::config::{Baseline, DataSource, ReferenceConfig, RunConfig, SplitName};
use crate::data::{load_csv, model_loss, split_dataset, Dataset, LossKind, Split, SubsetIndex};
use crate::error::{Error, Result};
use crate::metrics::MetricsReport;
use crate::models::{
    fit_quality, gen_quadratic, load_bundle, train_linear, train_mlp, BundleMetadata, FitQuality, Model, Predictor,
    QuadraticOracle,
};
use crate::rashomon::{Boundary, ModelSource, RashomonSubset, SampledModel};
use crate::sampler::{
    assemble_subset, convergence_report, grs_explore, random_input_candidates, random_weight_candidates,
    AttributionCache, ConvergenceReport, Trajectory,
};

pub const REPORT_VERSION: u32 = 1;
pub const GRS: &str = "grs";

/// Key of one (method, tolerance) pair, e.g. `grs@0.1`.
pub fn run_key(method: &str, epsilon: f64) -> String {
    format!("{method}@{epsilon}")
}

pub fn split_by_name(split: &Split, name: SplitName) -> &Dataset {
    match name {
        SplitName::Train => &split.train,
        SplitName::Test => &split.test,
        SplitName::Validation => &split.validation,
    }
}

/// The configured dataset, before splitting.
pub fn load_dataset(config: &RunConfig) -> Result<Dataset> {
    match &config.data.source {
        DataSource::SyntheticQuadratic { n, seed } => Ok(gen_quadratic(*n, *seed)),
        DataSource::Csv { path, targets } => load_csv(path, targets),
    }
}

pub fn prepare_data(config: &RunConfig) -> Result<Split> {
    let inner = || {
        let d = load_dataset(config)?;
        split_dataset(&d, config.data.fractions, config.data.split_seed)
    };
    inner().map_err(|e| e.in_stage("data"))
}

/// Trains, loads or constructs the reference on the training partition.
pub fn reference_model(config: &RunConfig, split: &Split) -> Result<Model> {
    let inner = || -> Result<Model> {
        let model = match &config.reference {
            ReferenceConfig::TrainLinear { l2 } => Model::Linear(train_linear(&split.train, *l2)?),
            ReferenceConfig::TrainMlp { mlp } => Model::Mlp(train_mlp(&split.train, mlp)?),
            ReferenceConfig::LoadBundle { path } => load_bundle(path)?.0,
            ReferenceConfig::QuadraticOracle { root_sign } => Model::Quadratic(QuadraticOracle::new(*root_sign)),
        };
        if model.input_dim() != split.train.n_features() || model.output_dim() != split.train.n_targets() {
            return Err(Error::Shape(format!(
                "reference maps {} features to {} outputs; the data has {} and {}",
                model.input_dim(),
                model.output_dim(),
                split.train.n_features(),
                split.train.n_targets()
            )));
        }
        Ok(model)
    };
    inner().map_err(|e| e.in_stage("reference"))
}

/// Bundle metadata describing how `model` was obtained.
pub fn reference_metadata(config: &RunConfig, split: &Split, model: &Model) -> Result<BundleMetadata> {
    let mut meta = BundleMetadata {
        loss: Some(config.rashomon.loss),
        final_loss: Some(model_loss(model, &split.train, config.rashomon.loss)?),
        feature_names: split.train.feature_names().to_vec(),
        target_names: split.train.target_names().to_vec(),
        ..BundleMetadata::default()
    };
    match &config.reference {
        ReferenceConfig::TrainMlp { mlp } => meta.seed = Some(mlp.seed),
        ReferenceConfig::QuadraticOracle { root_sign } => meta.root_sign = Some(*root_sign),
        _ => {}
    }
    Ok(meta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSummary {
    pub kind: String,
    pub loss_kind: LossKind,
    /// Reference loss on each partition.
    pub losses: BTreeMap<String, f64>,
    pub eval_split: SplitName,
    pub n_eval_rows: usize,
    /// Fit on the evaluation partition, when defined.
    pub fit: Option<FitQuality>,
}

pub fn reference_summary(config: &RunConfig, split: &Split, model: &Model) -> Result<ReferenceSummary> {
    let mut losses = BTreeMap::new();
    for name in SplitName::ALL {
        losses.insert(
            name.name().to_string(),
            model_loss(model, split_by_name(split, name), config.rashomon.loss)?,
        );
    }
    let eval = split_by_name(split, config.data.eval);
    let fit = fit_quality(model.predict(eval.x())?.view(), eval.y())
        .ok()
        .filter(|f| f.r2.is_finite() && f.mae.is_finite());
    Ok(ReferenceSummary {
        kind: model.kind().to_string(),
        loss_kind: config.rashomon.loss,
        losses,
        eval_split: config.data.eval,
        n_eval_rows: eval.n_rows(),
        fit,
    })
}

/// One sampled set at one tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRun {
    pub method: String,
    pub epsilon: f64,
    pub subset: RashomonSubset,
    /// Walks up to this tolerance (GRS only).
    pub trajectories: Vec<Trajectory>,
    /// Boundary gaps of the full walk, on the largest tolerance only.
    pub convergence: Option<ConvergenceReport>,
}

/// Output of the sampling stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleArtifact {
    pub version: u32,
    pub config: RunConfig,
    pub feature_names: Vec<String>,
    pub reference: ReferenceSummary,
    pub subsets: Vec<SubsetIndex>,
    /// Every walk of the nested GRS run.
    pub trajectories: Vec<Trajectory>,
    pub runs: Vec<MethodRun>,
}

fn trajectories_up_to(all: &[Trajectory], levels: usize) -> Vec<Trajectory> {
    all.iter()
        .map(|t| Trajectory {
            points: t.points.iter().filter(|p| p.level <= levels).cloned().collect(),
            ..t.clone()
        })
        .collect()
}

/// Runs GRS and every configured baseline at each configured tolerance.
/// One GRS walk covers all tolerances; the set at a tolerance is built
/// from the candidates of the levels up to it, so sets are nested.
pub fn sample_stage(config: &RunConfig, split: &Split, reference: &Model) -> Result<SampleArtifact> {
    sample_inner(config, split, reference).map_err(|e| e.in_stage("sample"))
}

fn sample_inner(config: &RunConfig, split: &Split, reference: &Model) -> Result<SampleArtifact> {
    let eval = split_by_name(split, config.data.eval);
    let loss = config.rashomon.loss;
    let summary = reference_summary(config, split, reference)?;
    let ref_loss = summary.losses[config.data.eval.name()];
    let subsets = SubsetIndex::family(eval.n_features(), config.attribution.order);
    let attributor = Attributor::new(eval, loss, config.attribution.estimator)?;
    let attribute = |m: &SampledModel| -> Result<AttributionSet> {
        let predictor = m.predictor(reference)?;
        attributor.attribution_set(&predictor, &m.id(), &subsets)
    };
    let p = eval.n_features();
    let ref_attr = attribute(&SampledModel::reference(p, ref_loss))?;
    let eps_max = config.rashomon.epsilon_max();
    let master = config.master_sampler();
    let top = config.rashomon.at(eps_max).effective(ref_loss);
    log::info!("exploring {} tolerance level(s) up to {eps_max}", config.rashomon.epsilons.len());
    let grs = grs_explore(reference, eval, &top, ref_loss, &master)?;
    let convergence = convergence_report(&grs);

    let mut runs = Vec::new();
    let mut cache = AttributionCache::default();
    for &eps in &config.rashomon.epsilons {
        let levels = grs.schedule.iter().filter(|&&s| s <= eps).count();
        let rc = config.rashomon.at(eps).effective(ref_loss);
        let subset = assemble_subset(
            rc,
            ref_loss,
            p,
            ref_attr.clone(),
            grs.candidates_up_to(levels),
            master.max_models,
            |i, c| cache.get_or_compute(i, || attribute(c)),
        )?;
        log::info!("grs@{eps}: {} members", subset.len());
        runs.push(MethodRun {
            method: GRS.to_string(),
            epsilon: eps,
            subset,
            trajectories: trajectories_up_to(&grs.trajectories, levels),
            convergence: (eps == eps_max).then(|| convergence.clone()),
        });
    }

    let b = &config.baselines;
    for &method in &b.methods {
        let candidates = match method {
            Baseline::RandomInput => random_input_candidates(reference, eval, loss, b.candidates, b.input_scale, b.seed)?,
            Baseline::RandomWeight => random_weight_candidates(reference, eval, loss, b.candidates, b.weight_scale, b.seed)?,
        };
        let mut cache = AttributionCache::default();
        for &eps in &config.rashomon.epsilons {
            let rc = config.rashomon.at(eps).effective(ref_loss);
            let subset = assemble_subset(
                rc,
                ref_loss,
                p,
                ref_attr.clone(),
                &candidates,
                master.max_models,
                |i, c| cache.get_or_compute(i, || attribute(c)),
            )?;
            log::info!("{method}@{eps}: {} members of {} candidates", subset.len(), candidates.len());
            runs.push(MethodRun {
                method: method.name().to_string(),
                epsilon: eps,
                subset,
                trajectories: Vec::new(),
                convergence: None,
            });
        }
    }
    Ok(SampleArtifact {
        version: REPORT_VERSION,
        config: config.clone(),
        feature_names: eval.feature_names().to_vec(),
        reference: summary,
        subsets,
        trajectories: grs.trajectories,
        runs,
    })
}

/// Output of the attribution stage: one space per (method, tolerance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionArtifact {
    pub version: u32,
    pub spaces: BTreeMap<String, AttributionSpace>,
}

pub fn attribute_stage(samples: &SampleArtifact) -> Result<AttributionArtifact> {
    let inner = || -> Result<AttributionArtifact> {
        let mut spaces = BTreeMap::new();
        for run in &samples.runs {
            let space = attribution_space(run.subset.attributions(), &SampledModel::reference(0, 0.0).id())?;
            spaces.insert(run_key(&run.method, run.epsilon), space);
        }
        Ok(AttributionArtifact {
            version: REPORT_VERSION,
            spaces,
        })
    };
    inner().map_err(|e| e.in_stage("attribute"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRow {
    pub id: String,
    pub source: ModelSource,
    pub tau: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<f64>>,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub epsilon: f64,
    /// Boundary form in effect (additive when the reference loss is 0).
    pub boundary: Boundary,
    pub ref_loss: f64,
    pub threshold: f64,
    pub boundary_loss: f64,
    pub n_members: usize,
    pub rejected_boundary: usize,
    pub rejected_redundant: usize,
    pub n_searched: usize,
    pub ser: f64,
    pub members: Vec<MemberRow>,
    pub trajectories: Vec<Trajectory>,
    pub convergence: Option<ConvergenceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub method: String,
    pub epsilon: f64,
    #[serde(flatten)]
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub config: RunConfig,
    pub reference: ReferenceSummary,
    pub methods: Vec<MethodSummary>,
    pub attribution_spaces: BTreeMap<String, AttributionSpace>,
    pub metrics: Vec<MetricsRow>,
    /// The only field that differs between identical runs.
    pub timestamp: String,
    #[serde(skip)]
    pub feature_names: Vec<String>,
    #[serde(skip)]
    pub attributions: BTreeMap<String, Vec<AttributionSet>>,
    #[serde(skip)]
    pub all_trajectories: Vec<Trajectory>,
}

pub fn build_report(samples: &SampleArtifact, spaces: &AttributionArtifact, timestamp: String) -> Result<RunReport> {
    let inner = || -> Result<RunReport> {
        let mut methods = Vec::new();
        let mut metrics = Vec::new();
        let mut attributions = BTreeMap::new();
        for run in &samples.runs {
            let key = run_key(&run.method, run.epsilon);
            let space = spaces
                .spaces
                .get(&key)
                .ok_or_else(|| Error::InvalidArgument(format!("no attribution space for {key}")))?;
            let s = &run.subset;
            let report = MetricsReport::compute(space, s.attributions(), s.len(), s.n_searched())?;
            methods.push(MethodSummary {
                method: run.method.clone(),
                epsilon: run.epsilon,
                boundary: s.config().boundary,
                ref_loss: s.ref_loss(),
                threshold: s.config().threshold(s.ref_loss()),
                boundary_loss: s.config().boundary_loss(s.ref_loss()),
                n_members: s.len(),
                rejected_boundary: s.rejected_boundary(),
                rejected_redundant: s.rejected_redundant(),
                n_searched: s.n_searched(),
                ser: report.ser,
                members: s
                    .members()
                    .iter()
                    .map(|m| MemberRow {
                        id: m.id(),
                        source: m.source.clone(),
                        tau: m.perturbation.tau.clone(),
                        zeta: m.perturbation.zeta.clone(),
                        loss: m.loss,
                    })
                    .collect(),
                trajectories: run.trajectories.clone(),
                convergence: run.convergence.clone(),
            });
            metrics.push(MetricsRow {
                method: run.method.clone(),
                epsilon: run.epsilon,
                metrics: report,
            });
            attributions.insert(key, s.attributions().to_vec());
        }
        let report = RunReport {
            version: REPORT_VERSION,
            config: samples.config.clone(),
            reference: samples.reference.clone(),
            methods,
            attribution_spaces: spaces.spaces.clone(),
            metrics,
            timestamp,
            feature_names: samples.feature_names.clone(),
            attributions,
            all_trajectories: samples.trajectories.clone(),
        };
        verify_report(&report)?;
        Ok(report)
    };
    inner().map_err(|e| e.in_stage("report"))
}

fn check_finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} = {v}")))
    }
}

/// Re-checks every emitted member against its boundary and every number
/// for finiteness.
pub fn verify_report(report: &RunReport) -> Result<()> {
    if report.version != REPORT_VERSION {
        return Err(Error::InvalidArgument(format!(
            "report version {} (expected {REPORT_VERSION})",
            report.version
        )));
    }
    for (split, &l) in &report.reference.losses {
        check_finite(&format!("reference loss on {split}"), l)?;
    }
    for m in &report.methods {
        let key = run_key(&m.method, m.epsilon);
        let threshold = match m.boundary {
            Boundary::Multiplicative => m.epsilon * m.ref_loss,
            Boundary::Additive => m.epsilon,
        };
        if threshold != m.threshold || m.ref_loss + threshold != m.boundary_loss {
            return Err(Error::InvalidArgument(format!("{key}: inconsistent boundary")));
        }
        for row in &m.members {
            check_finite(&format!("{key} loss of {}", row.id), row.loss)?;
            if !(row.loss <= m.boundary_loss) {
                return Err(Error::InvalidArgument(format!(
                    "{key}: member {} has loss {} above the boundary {}",
                    row.id, row.loss, m.boundary_loss
                )));
            }
            for v in row.tau.iter().chain(row.zeta.iter().flatten()) {
                check_finite(&format!("{key} perturbation of {}", row.id), *v)?;
            }
        }
        for t in &m.trajectories {
            for p in &t.points {
                check_finite(&format!("{key} trajectory loss"), p.loss)?;
                check_finite(&format!("{key} trajectory step"), p.lambda)?;
                if p.loss > m.boundary_loss {
                    return Err(Error::InvalidArgument(format!(
                        "{key}: trajectory {}{} exceeds the boundary",
                        t.direction, t.sign
                    )));
                }
            }
        }
    }
    for (key, space) in &report.attribution_spaces {
        for (s, spread) in &space.subsets {
            for v in spread.scores.iter().chain([&spread.min, &spread.max, &spread.reference]) {
                check_finite(&format!("{key} score of {s}"), *v)?;
            }
        }
    }
    for row in &report.metrics {
        let m = &row.metrics;
        for (what, v) in [
            ("ser", m.ser),
            ("fer_first_order", m.fer_first_order),
            ("fer_second_order", m.fer_second_order),
        ] {
            check_finite(&format!("{} {what}", run_key(&row.method, row.epsilon)), v)?;
        }
    }
    Ok(())
}

/// Parses a report and re-verifies it.
pub fn load_report(path: impl AsRef<Path>) -> Result<RunReport> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let report: RunReport = serde_json::from_str(&text)?;
    verify_report(&report)?;
    Ok(report)
}

pub const REPORT_FILES: [&str; 4] = ["report.json", "fer.csv", "attributions.csv", "trajectories.csv"];

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut write = |rec: &[String]| w.write_record(rec).map_err(|e| Error::InvalidArgument(e.to_string()));
    write(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>())?;
    for row in rows {
        write(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// File names and contents of the report files.
pub fn render_report(report: &RunReport) -> Result<Vec<(&'static str, String)>> {
    let json = serde_json::to_string_pretty(report)? + "\n";

    let mut fer_rows = Vec::new();
    for row in &report.metrics {
        let m = &row.metrics;
        for (order, fer) in [(1, m.fer_first_order), (2, m.fer_second_order)] {
            fer_rows.push(vec![
                row.method.clone(),
                row.epsilon.to_string(),
                order.to_string(),
                fer.to_string(),
                m.ser.to_string(),
                m.n_members.to_string(),
            ]);
        }
    }
    let fer = csv_text(&["method", "epsilon", "order", "fer", "ser", "n_members"], fer_rows)?;

    let names = &report.feature_names;
    let label = |s: &SubsetIndex| {
        if names.is_empty() {
            s.to_string()
        } else {
            s.label(names)
        }
    };
    let mut attr_rows = Vec::new();
    for m in &report.methods {
        let key = run_key(&m.method, m.epsilon);
        for set in report.attributions.get(&key).into_iter().flatten() {
            for (s, score) in &set.scores {
                attr_rows.push(vec![
                    m.method.clone(),
                    m.epsilon.to_string(),
                    set.model_id.clone(),
                    label(s),
                    score.to_string(),
                ]);
            }
        }
    }
    let attributions = csv_text(&["method", "epsilon", "model_id", "subset", "score"], attr_rows)?;

    let mut traj_rows = Vec::new();
    for t in &report.all_trajectories {
        for p in &t.points {
            traj_rows.push(vec![
                label(&t.direction),
                t.sign.to_string(),
                p.level.to_string(),
                p.epsilon.to_string(),
                p.lambda.to_string(),
                p.loss.to_string(),
            ]);
        }
    }
    let trajectories = csv_text(&["direction", "sign", "level", "epsilon", "lambda", "loss"], traj_rows)?;

    Ok(vec![
        (REPORT_FILES[0], json),
        (REPORT_FILES[1], fer),
        (REPORT_FILES[2], attributions),
        (REPORT_FILES[3], trajectories),
    ])
}

/// Writes the report files into `dir`. If any write fails, the files
/// already written are removed.
pub fn emit_report(report: &RunReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let files = render_report(report)?;
    write_all(dir, &files)
}

pub(crate) fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, text) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(Error::io(path, e));
        }
        written.push(path);
    }
    Ok(written)
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Every stage in memory, then the report files. A failure in any stage
/// leaves the output directory untouched.
pub fn run_pipeline(config: &RunConfig) -> Result<RunReport> {
    let report = run_in_memory(config)?;
    emit_report(&report, &config.output.dir).map_err(|e| e.in_stage("emit"))?;
    Ok(report)
}

/// [`run_pipeline`] without writing anything.
pub fn run_in_memory(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let split = prepare_data(config)?;
    let reference = reference_model(config, &split)?;
    let samples = sample_stage(config, &split, &reference)?;
    let spaces = attribute_stage(&samples)?;
    build_report(&samples, &spaces, timestamp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;

    fn small(extra: &str) -> RunConfig {
        validate_config(&format!(
            r#"
[data]
n = 60
[reference]
kind = "train-linear"
[attribution]
estimator = "full-pairs"
{extra}
"#
        ))
        .unwrap()
    }

    #[test]
    fn run_keys_use_plain_float_formatting() {
        assert_eq!(run_key("grs", 0.1), "grs@0.1");
        assert_eq!(run_key("random-input", 0.05), "random-input@0.05");
    }

    #[test]
    fn zero_tolerance_keeps_only_the_reference() {
        let config = small("[rashomon]\nepsilon = 0.0\n");
        let report = run_in_memory(&config).unwrap();
        assert_eq!(report.methods.len(), 1);
        assert_eq!(report.methods[0].n_members, 1);
        let m = &report.metrics[0].metrics;
        assert_eq!((m.fer_first_order, m.fer_second_order), (0.0, 0.0));
    }

    #[test]
    fn nested_sets_grow_with_the_tolerance() {
        let config = small("[rashomon]\nepsilon = [0.05, 0.1]\n");
        let report = run_in_memory(&config).unwrap();
        let ids: Vec<Vec<String>> = report
            .methods
            .iter()
            .map(|m| m.members.iter().map(|r| r.id.clone()).collect())
            .collect();
        assert!(ids[1].starts_with(&ids[0]));
        assert!(ids[1].len() > ids[0].len());
        assert!(report.metrics[0].metrics.fer_first_order <= report.metrics[1].metrics.fer_first_order);
    }

    #[test]
    fn verify_rejects_a_member_outside_the_boundary() {
        let config = small("");
        let mut report = run_in_memory(&config).unwrap();
        let bound = report.methods[0].boundary_loss;
        report.methods[0].members[1].loss = bound * 1.01 + 1e-9;
        assert!(verify_report(&report).is_err());
    }

    #[test]
    fn stage_errors_carry_the_stage_name() {
        let mut config = small("");
        config.data.source = DataSource::Csv {
            path: PathBuf::from("/nonexistent/data.csv"),
            targets: vec!["y".into()],
        };
        let err = run_in_memory(&config).unwrap_err();
        assert!(err.to_string().starts_with("data stage failed"), "{err}");
        assert!(!err.is_config_error());
    }

    #[test]
    fn fer_csv_has_two_rows_per_method_and_tolerance() {
        let config = small("[rashomon]\nepsilon = [0.05, 0.1]\n[baselines]\nmethods = [\"random-input\"]\ncandidates = 5\n");
        let report = run_in_memory(&config).unwrap();
        let files = render_report(&report).unwrap();
        let fer = &files.iter().find(|(n, _)| *n == "fer.csv").unwrap().1;
        assert_eq!(fer.lines().count(), 1 + 2 * 2 * 2);
    }
}
