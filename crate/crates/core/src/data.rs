//! Datasets, losses, permutation-loss estimators and column perturbation.
//!
//! Everything here is a pure function of its inputs (and of the seed, for
//! the Monte Carlo estimator). Matrices are row-major `ndarray` arrays with
//! one observation per row.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndarray::{s, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::models::Predictor;

/// Largest dataset the all-pairs permutation estimator accepts by default.
pub const FULL_PAIRS_ROW_CAP: usize = 512;

/// Rows per prediction call when the all-pairs estimator batches its
/// substituted rows.
const FULL_PAIRS_CHUNK_ROWS: usize = 16_384;

/// Feature matrix `X` (n x p) and target matrix `Y` (n x m) with names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Array2<f64>,
    y: Array2<f64>,
    feature_names: Vec<String>,
    target_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        x: Array2<f64>,
        y: Array2<f64>,
        feature_names: Vec<String>,
        target_names: Vec<String>,
    ) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::Dataset("no rows".into()));
        }
        if x.ncols() == 0 {
            return Err(Error::Dataset("no feature columns".into()));
        }
        if y.ncols() == 0 {
            return Err(Error::Dataset("no target columns".into()));
        }
        if x.nrows() != y.nrows() {
            return Err(Error::Dataset(format!(
                "X has {} rows but Y has {}",
                x.nrows(),
                y.nrows()
            )));
        }
        if feature_names.len() != x.ncols() || target_names.len() != y.ncols() {
            return Err(Error::Dataset(format!(
                "{} feature names and {} target names for a {}x{} / {}x{} dataset",
                feature_names.len(),
                target_names.len(),
                x.nrows(),
                x.ncols(),
                y.nrows(),
                y.ncols()
            )));
        }
        if let Some(((r, c), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!("X[{r}, {c}]")));
        }
        if let Some(((r, c), _)) = y.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!("Y[{r}, {c}]")));
        }
        Ok(Self {
            x,
            y,
            feature_names,
            target_names,
        })
    }

    /// Dataset with generated names `x0..` and `y0..`.
    pub fn unnamed(x: Array2<f64>, y: Array2<f64>) -> Result<Self> {
        let features = (0..x.ncols()).map(|i| format!("x{i}")).collect();
        let targets = (0..y.ncols()).map(|i| format!("y{i}")).collect();
        Self::new(x, y, features, targets)
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView2<'_, f64> {
        self.y.view()
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_targets(&self) -> usize {
        self.y.ncols()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    /// Copy of the listed rows, in the order given.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            x: self.x.select(Axis(0), rows),
            y: self.y.select(Axis(0), rows),
            feature_names: self.feature_names.clone(),
            target_names: self.target_names.clone(),
        }
    }

    /// Same targets and names over a replacement feature matrix.
    pub fn with_features(&self, x: Array2<f64>) -> Result<Dataset> {
        if x.dim() != self.x.dim() {
            return Err(Error::Shape(format!(
                "replacement X is {:?}, expected {:?}",
                x.dim(),
                self.x.dim()
            )));
        }
        Dataset::new(
            x,
            self.y.clone(),
            self.feature_names.clone(),
            self.target_names.clone(),
        )
    }
}

/// Per-row loss summed over output components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LossKind {
    #[serde(rename = "mse")]
    MeanSquaredError,
    #[serde(rename = "mae")]
    MeanAbsoluteError,
    #[serde(rename = "logloss")]
    LogisticLoss,
    #[serde(rename = "zero-one")]
    ZeroOne,
}

impl LossKind {
    pub const ALL: [LossKind; 4] = [
        LossKind::MeanSquaredError,
        LossKind::MeanAbsoluteError,
        LossKind::LogisticLoss,
        LossKind::ZeroOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::MeanSquaredError => "mse",
            LossKind::MeanAbsoluteError => "mae",
            LossKind::LogisticLoss => "logloss",
            LossKind::ZeroOne => "zero-one",
        }
    }

    pub fn needs_binary_targets(self) -> bool {
        matches!(self, LossKind::LogisticLoss | LossKind::ZeroOne)
    }

    /// Loss of one row. Binary losses read predictions as probabilities of
    /// class 1.
    pub fn row_loss(self, prediction: ArrayView1<'_, f64>, target: ArrayView1<'_, f64>) -> f64 {
        const CLIP: f64 = 1e-15;
        let pairs = prediction.iter().zip(target.iter());
        match self {
            LossKind::MeanSquaredError => pairs.map(|(p, y)| (p - y) * (p - y)).sum(),
            LossKind::MeanAbsoluteError => pairs.map(|(p, y)| (p - y).abs()).sum(),
            LossKind::LogisticLoss => pairs
                .map(|(p, y)| {
                    // Clip inside each log so an exact prediction scores 0.
                    let p = p.clamp(0.0, 1.0);
                    -(y * p.max(CLIP).ln() + (1.0 - y) * (1.0 - p).max(CLIP).ln())
                })
                .sum(),
            LossKind::ZeroOne => pairs
                .map(|(p, y)| {
                    let class = if *p >= 0.5 { 1.0 } else { 0.0 };
                    if class == *y {
                        0.0
                    } else {
                        1.0
                    }
                })
                .sum(),
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mse" => Ok(LossKind::MeanSquaredError),
            "mae" => Ok(LossKind::MeanAbsoluteError),
            "logloss" => Ok(LossKind::LogisticLoss),
            "zero-one" => Ok(LossKind::ZeroOne),
            other => Err(Error::InvalidArgument(format!(
                "unknown loss '{other}' (expected mse, mae, logloss or zero-one)"
            ))),
        }
    }
}

/// A set of one or two feature indices, kept sorted.
///
/// Ordered by size first and lexicographically within a size, so a family
/// lists every singleton before any pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    pub const MAX_ORDER: usize = 2;

    /// Canonicalizes `indices` and checks them against `n_features`.
    pub fn new(indices: impl Into<Vec<usize>>, n_features: usize) -> Result<Self> {
        let subset = Self::canonical(indices.into())?;
        if let Some(&i) = subset.0.iter().find(|&&i| i >= n_features) {
            return Err(Error::InvalidArgument(format!(
                "feature index {i} out of range for {n_features} features"
            )));
        }
        Ok(subset)
    }

    fn canonical(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.is_empty() || indices.len() > Self::MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "subsets must have 1 or 2 features, got {}",
                indices.len()
            )));
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!(
                "repeated feature index in subset {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn single(i: usize) -> Self {
        Self(vec![i])
    }

    /// Panics if `i == j`.
    pub fn pair(i: usize, j: usize) -> Self {
        assert_ne!(i, j, "a pair needs two distinct features");
        Self(vec![i.min(j), i.max(j)])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, feature: usize) -> bool {
        self.0.contains(&feature)
    }

    /// All singletons, then (if `max_order` is 2) all pairs.
    pub fn family(n_features: usize, max_order: usize) -> Vec<SubsetIndex> {
        let mut out: Vec<_> = (0..n_features).map(Self::single).collect();
        if max_order >= 2 {
            for i in 0..n_features {
                for j in i + 1..n_features {
                    out.push(Self::pair(i, j));
                }
            }
        }
        out
    }

    /// Human-readable label using feature names, e.g. `a:b`.
    pub fn label(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|&i| names.get(i).cloned().unwrap_or_else(|| i.to_string()))
            .collect::<Vec<_>>()
            .join(":")
    }
}

impl Ord for SubsetIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SubsetIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(":"))
    }
}

impl FromStr for SubsetIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .split(':')
            .map(|part| {
                part.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidArgument(format!("bad subset '{s}' (expected e.g. 0 or 0:2)"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::canonical(indices)
    }
}

impl Serialize for SubsetIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubsetIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Column-wise affine map `z_i = tau_i * x_i + zeta_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub tau: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<f64>>,
}

impl Perturbation {
    pub fn identity(n_features: usize) -> Self {
        Self {
            tau: vec![1.0; n_features],
            zeta: None,
        }
    }

    pub fn scaling(tau: Vec<f64>) -> Self {
        Self { tau, zeta: None }
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    pub fn is_identity(&self) -> bool {
        self.tau.iter().all(|&t| t == 1.0)
            && self
                .zeta
                .as_ref()
                .is_none_or(|z| z.iter().all(|&v| v == 0.0))
    }

    /// The perturbation equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &Perturbation) -> Result<Perturbation> {
        if self.dim() != next.dim() {
            return Err(Error::Shape(format!(
                "cannot compose perturbations of dimension {} and {}",
                self.dim(),
                next.dim()
            )));
        }
        let tau = self.tau.iter().zip(&next.tau).map(|(a, b)| b * a).collect();
        let zeta = match (&self.zeta, &next.zeta) {
            (None, None) => None,
            (first, second) => Some(
                (0..self.dim())
                    .map(|i| {
                        let z1 = first.as_ref().map_or(0.0, |z| z[i]);
                        let z2 = second.as_ref().map_or(0.0, |z| z[i]);
                        next.tau[i] * z1 + z2
                    })
                    .collect(),
            ),
        };
        Ok(Perturbation { tau, zeta })
    }

    fn validate(&self, n_features: usize) -> Result<()> {
        if self.tau.len() != n_features {
            return Err(Error::Shape(format!(
                "perturbation has {} scale factors for {} features",
                self.tau.len(),
                n_features
            )));
        }
        if let Some(zeta) = &self.zeta {
            if zeta.len() != n_features {
                return Err(Error::Shape(format!(
                    "perturbation has {} shifts for {} features",
                    zeta.len(),
                    n_features
                )));
            }
        }
        let finite = self.tau.iter().all(|v| v.is_finite())
            && self.zeta.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("perturbation parameter".into()));
        }
        Ok(())
    }
}

/// Applies `pert` column-wise; the input is left untouched.
pub fn perturb_columns(x: ArrayView2<'_, f64>, pert: &Perturbation) -> Result<Array2<f64>> {
    pert.validate(x.ncols())?;
    let mut z = x.to_owned();
    for (i, mut column) in z.columns_mut().into_iter().enumerate() {
        let tau = pert.tau[i];
        let zeta = pert.zeta.as_ref().map_or(0.0, |z| z[i]);
        if tau == 1.0 && zeta == 0.0 {
            continue;
        }
        column.mapv_inplace(|v| tau * v + zeta);
    }
    Ok(z)
}

fn check_targets(targets: ArrayView2<'_, f64>, kind: LossKind) -> Result<()> {
    if kind.needs_binary_targets() {
        if let Some(((r, c), v)) = targets
            .indexed_iter()
            .find(|(_, &v)| v != 0.0 && v != 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "{kind} needs targets in {{0, 1}}; Y[{r}, {c}] = {v}"
            )));
        }
    }
    Ok(())
}

fn row_losses_unchecked(
    predictions: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    kind: LossKind,
) -> Vec<f64> {
    predictions
        .outer_iter()
        .zip(targets.outer_iter())
        .map(|(p, y)| kind.row_loss(p, y))
        .collect()
}

fn check_predictions(predictions: ArrayView2<'_, f64>, targets: ArrayView2<'_, f64>) -> Result<()> {
    if predictions.dim() != targets.dim() {
        return Err(Error::Shape(format!(
            "predictions are {:?} but targets are {:?}",
            predictions.dim(),
            targets.dim()
        )));
    }
    if let Some(((r, c), v)) = predictions.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite(format!("prediction[{r}, {c}] = {v}")));
    }
    Ok(())
}

/// Plain mean; every estimator in this module averages rows through it so
/// identical per-row losses give bit-identical results.
fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Mean over rows of the per-row loss (summed over output components).
pub fn empirical_loss(
    predictions: ArrayView2<'_, f64>,
    targets: ArrayView2<'_, f64>,
    kind: LossKind,
) -> Result<f64> {
    check_predictions(predictions, targets)?;
    check_targets(targets, kind)?;
    if targets.nrows() == 0 {
        return Err(Error::Dataset("no rows".into()));
    }
    Ok(mean(&row_losses_unchecked(predictions, targets, kind)))
}

/// Empirical loss of `f` on `d`.
pub fn model_loss(f: &dyn Predictor, d: &Dataset, kind: LossKind) -> Result<f64> {
    let predictions = f.predict(d.x())?;
    empirical_loss(predictions.view(), d.y(), kind)
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl McEstimate {
    /// Running (Welford) mean and sample standard deviation over
    /// `sqrt(len)`. A constant sample returns its value exactly and a zero
    /// error.
    pub fn from_samples(values: &[f64]) -> Self {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (k, &v) in values.iter().enumerate() {
            let delta = v - mean;
            mean += delta / (k + 1) as f64;
            m2 += delta * (v - mean);
        }
        let n = values.len();
        let std_error = if n > 1 {
            (m2 / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, std_error }
    }
}

fn check_subset(d: &Dataset, s: &SubsetIndex) -> Result<()> {
    if let Some(&i) = s.indices().iter().find(|&&i| i >= d.n_features()) {
        return Err(Error::InvalidArgument(format!(
            "feature index {i} out of range for {} features",
            d.n_features()
        )));
    }
    if d.n_rows() < 2 {
        return Err(Error::Dataset(
            "permutation estimators need at least 2 rows".into(),
        ));
    }
    Ok(())
}

fn subset_is_constant(d: &Dataset, s: &SubsetIndex) -> bool {
    let x = d.x();
    s.indices().iter().all(|&c| {
        let column = x.column(c);
        let first = column[0];
        column.iter().all(|&v| v == first)
    })
}

/// All-pairs permutation loss with the default row cap.
pub fn permuted_loss_full(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
) -> Result<f64> {
    permuted_loss_full_capped(f, d, s, kind, FULL_PAIRS_ROW_CAP)
}

/// `1/(n(n-1)) sum_i sum_{j != i} L(f(x_i with columns s taken from x_j), y_i)`.
///
/// Costs n(n-1) predictions, hence the cap.
pub fn permuted_loss_full_capped(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
    cap: usize,
) -> Result<f64> {
    check_subset(d, s)?;
    let n = d.n_rows();
    if n > cap {
        return Err(Error::TooManyRows { rows: n, cap });
    }
    check_targets(d.y(), kind)?;
    if subset_is_constant(d, s) {
        return model_loss(f, d, kind);
    }

    let x = d.x();
    let y = d.y();
    let p = d.n_features();
    let per_target = n - 1;
    let targets_per_chunk = (FULL_PAIRS_CHUNK_ROWS / per_target).max(1);
    let mut per_row = Vec::with_capacity(n);

    let mut start = 0;
    while start < n {
        let end = (start + targets_per_chunk).min(n);
        let mut z = Array2::<f64>::zeros(((end - start) * per_target, p));
        let mut r = 0;
        for i in start..end {
            for j in (0..n).filter(|&j| j != i) {
                let mut row = z.row_mut(r);
                row.assign(&x.row(i));
                for &c in s.indices() {
                    row[c] = x[[j, c]];
                }
                r += 1;
            }
        }
        let predictions = f.predict(z.view())?;
        if predictions.dim() != (z.nrows(), d.n_targets()) {
            return Err(Error::Shape(format!(
                "predictor returned {:?} for {} rows, expected {} outputs",
                predictions.dim(),
                z.nrows(),
                d.n_targets()
            )));
        }
        if let Some(v) = predictions.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("prediction {v}")));
        }
        for (k, i) in (start..end).enumerate() {
            let block = predictions.slice(s![k * per_target..(k + 1) * per_target, ..]);
            let target = y.row(i);
            let losses: Vec<f64> = block
                .outer_iter()
                .map(|pred| kind.row_loss(pred, target))
                .collect();
            per_row.push(McEstimate::from_samples(&losses).mean);
        }
        start = end;
    }
    Ok(mean(&per_row))
}

/// `count` uniformly random derangements of `0..n`.
///
/// Derangements give every row a partner other than itself with equal
/// probability, so the shuffle estimator is unbiased for the all-pairs one.
pub fn derangements(n: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    assert!(n >= 2, "derangements need n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut perm: Vec<usize> = (0..n).collect();
    while out.len() < count {
        perm.shuffle(&mut rng);
        if perm.iter().enumerate().all(|(i, &j)| i != j) {
            out.push(perm.clone());
        }
    }
    out
}

/// Loss after substituting the columns in `s` by `perm` (row `i` receives
/// row `perm[i]`'s values), once per permutation.
pub(crate) fn permuted_losses(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
    perms: &[Vec<usize>],
) -> Result<Vec<f64>> {
    check_subset(d, s)?;
    check_targets(d.y(), kind)?;
    if subset_is_constant(d, s) {
        let base = model_loss(f, d, kind)?;
        return Ok(vec![base; perms.len()]);
    }
    let x = d.x();
    let mut z = x.to_owned();
    let mut out = Vec::with_capacity(perms.len());
    for perm in perms {
        if perm.len() != d.n_rows() {
            return Err(Error::Shape(format!(
                "permutation of length {} for {} rows",
                perm.len(),
                d.n_rows()
            )));
        }
        for &c in s.indices() {
            for (i, &j) in perm.iter().enumerate() {
                z[[i, c]] = x[[j, c]];
            }
        }
        let predictions = f.predict(z.view())?;
        check_predictions(predictions.view(), d.y())?;
        out.push(mean(&row_losses_unchecked(predictions.view(), d.y(), kind)));
    }
    Ok(out)
}

/// Repeated whole-column shuffles of the columns in `s` (one shared
/// permutation per repeat).
pub fn permuted_loss_mc(
    f: &dyn Predictor,
    d: &Dataset,
    s: &SubsetIndex,
    kind: LossKind,
    repeats: usize,
    seed: u64,
) -> Result<McEstimate> {
    if repeats < 2 {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo estimator needs at least 2 repeats, got {repeats}"
        )));
    }
    check_subset(d, s)?;
    let perms = derangements(d.n_rows(), repeats, seed);
    let losses = permuted_losses(f, d, s, kind, &perms)?;
    Ok(McEstimate::from_samples(&losses))
}

/// Fractions of a train/test/validation split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFractions {
    pub train: f64,
    pub test: f64,
    pub validation: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        Self {
            train: 0.8,
            test: 0.1,
            validation: 0.1,
        }
    }
}

/// Train, test and validation partitions.
#[derive(Debug, Clone)]
pub struct Split {
    pub train: Dataset,
    pub test: Dataset,
    pub validation: Dataset,
}

/// Seeded row partition. Test and validation get `floor(n * fraction)` rows;
/// train gets the rest.
pub fn split_dataset(d: &Dataset, fractions: SplitFractions, seed: u64) -> Result<Split> {
    let SplitFractions {
        train,
        test,
        validation,
    } = fractions;
    if !(train > 0.0 && test > 0.0 && validation > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "split fractions must be positive, got ({train}, {test}, {validation})"
        )));
    }
    if (train + test + validation - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "split fractions must sum to 1, got {}",
            train + test + validation
        )));
    }
    let n = d.n_rows();
    // The epsilon keeps e.g. 10 * 0.3 from flooring to 2.
    let floor = |fraction: f64| (n as f64 * fraction + 1e-9).floor() as usize;
    let n_test = floor(test);
    let n_validation = floor(validation);
    let n_train = n.saturating_sub(n_test + n_validation);
    if n_train == 0 || n_test == 0 || n_validation == 0 {
        return Err(Error::Dataset(format!(
            "split of {n} rows leaves an empty partition ({n_train}/{n_test}/{n_validation})"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let take = |count: usize, offset: usize| {
        let mut rows = order[offset..offset + count].to_vec();
        rows.sort_unstable();
        d.select_rows(&rows)
    };
    Ok(Split {
        train: take(n_train, 0),
        test: take(n_test, n_train),
        validation: take(n_validation, n_train + n_test),
    })
}

/// Reads a headed CSV; `target_columns` become `Y`, every other column `X`
/// (both in header order).
pub fn load_csv(path: impl AsRef<Path>, target_columns: &[impl AsRef<str>]) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let csv_error = |line: u64, column: &str, message: String| Error::Csv {
        path: path.to_path_buf(),
        line,
        column: column.to_string(),
        message,
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(1, "", e.to_string()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if target_columns.is_empty() {
        return Err(Error::InvalidArgument("no target columns given".into()));
    }
    let mut target_idx = Vec::with_capacity(target_columns.len());
    for name in target_columns {
        let name = name.as_ref();
        match header.iter().position(|h| h == name) {
            Some(i) => target_idx.push(i),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "unknown target column '{name}' in {}",
                    path.display()
                )))
            }
        }
    }
    let feature_idx: Vec<usize> = (0..header.len())
        .filter(|i| !target_idx.contains(i))
        .collect();

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            csv_error(line, "", e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("").trim();
            if raw.is_empty() {
                return Err(csv_error(line, &header[i], "empty cell".into()));
            }
            let value: f64 = raw
                .parse()
                .map_err(|_| csv_error(line, &header[i], format!("cannot parse '{raw}' as a number")))?;
            if !value.is_finite() {
                return Err(csv_error(line, &header[i], format!("non-finite value '{raw}'")));
            }
            Ok(value)
        };
        for &i in &feature_idx {
            xs.push(cell(i)?);
        }
        for &i in &target_idx {
            ys.push(cell(i)?);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Dataset(format!("{} has no data rows", path.display())));
    }
    let x = Array2::from_shape_vec((rows, feature_idx.len()), xs)
        .map_err(|e| Error::Shape(e.to_string()))?;
    let y = Array2::from_shape_vec((rows, target_idx.len()), ys)
        .map_err(|e| Error::Shape(e.to_string()))?;
    Dataset::new(
        x,
        y,
        feature_idx.iter().map(|&i| header[i].clone()).collect(),
        target_idx.iter().map(|&i| header[i].clone()).collect(),
    )
}

/// Writes features then targets under one header. Values use Rust's
/// shortest round-trip formatting, so `load_csv` reads them back exactly.
pub fn write_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidArgument(format!("{other:?}")),
    })?;
    let io_err = |e: csv::Error| Error::InvalidArgument(format!("{}: {e}", path.display()));
    writer
        .write_record(d.feature_names().iter().chain(d.target_names()))
        .map_err(io_err)?;
    for (x, y) in d.x().outer_iter().zip(d.y().outer_iter()) {
        writer
            .write_record(x.iter().chain(y.iter()).map(|v| v.to_string()))
            .map_err(io_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
