use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_input, Predictor};
use crate::data::{Dataset, LossKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activation {
    Relu,
    Identity,
    Sigmoid,
}

impl Activation {
    fn apply(self, z: &mut Array2<f64>) {
        match self {
            Activation::Relu => z.mapv_inplace(|v| v.max(0.0)),
            Activation::Identity => {}
            Activation::Sigmoid => z.mapv_inplace(|v| 1.0 / (1.0 + (-v).exp())),
        }
    }
}

/// Dense layer `a = act(x W + b)` with `W` of shape in x out.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
    pub activation: Activation,
}

/// Feed-forward network: rectifier hidden layers and an identity (or
/// logistic, for binary targets) output layer.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layers: Vec<Layer>,
}

impl MlpModel {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Shape("network has no layers".into()));
        }
        for (k, layer) in layers.iter().enumerate() {
            if layer.weights.ncols() != layer.bias.len() || layer.weights.is_empty() {
                return Err(Error::Shape(format!(
                    "layer {k}: weights {:?} with {} biases",
                    layer.weights.dim(),
                    layer.bias.len()
                )));
            }
            if k > 0 && layers[k - 1].weights.ncols() != layer.weights.nrows() {
                return Err(Error::Shape(format!(
                    "layer {k} takes {} inputs but layer {} emits {}",
                    layer.weights.nrows(),
                    k - 1,
                    layers[k - 1].weights.ncols()
                )));
            }
            if layer.weights.iter().chain(layer.bias.iter()).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("layer {k} parameter")));
            }
        }
        Ok(Self { layers })
    }

    /// Weights and biases uniform on `±1/sqrt(fan_in)`. `sizes` lists every width from
    /// input to output.
    pub fn init(sizes: &[usize], output: Activation, seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "layer sizes must be >= 1 and include input and output, got {sizes:?}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = sizes.len() - 2;
        let layers = sizes
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let bound = 1.0 / (w[0] as f64).sqrt();
                Layer {
                    weights: Array2::from_shape_simple_fn((w[0], w[1]), || rng.random_range(-bound..bound)),
                    bias: Array1::from_shape_simple_fn(w[1], || rng.random_range(-bound..bound)),
                    activation: if k == last { output } else { Activation::Relu },
                }
            })
            .collect();
        Self::new(layers)
    }

    /// Rebuilds a network from widths, per-layer activations and the
    /// flattened parameters (each layer's weights row-major, then its bias).
    pub fn from_parts(sizes: &[usize], activations: &[Activation], params: &[f64]) -> Result<Self> {
        if sizes.len() < 2 || activations.len() != sizes.len() - 1 {
            return Err(Error::Shape(format!(
                "{} widths and {} activations",
                sizes.len(),
                activations.len()
            )));
        }
        let expected: usize = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        if params.len() != expected {
            return Err(Error::Shape(format!(
                "{} parameters for widths {sizes:?}, expected {expected}",
                params.len()
            )));
        }
        let mut offset = 0;
        let mut layers = Vec::with_capacity(activations.len());
        for (w, &activation) in sizes.windows(2).zip(activations) {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = Array2::from_shape_vec((n_in, n_out), params[offset..offset + n_in * n_out].to_vec())
                .map_err(|e| Error::Shape(e.to_string()))?;
            offset += n_in * n_out;
            let bias = Array1::from(params[offset..offset + n_out].to_vec());
            offset += n_out;
            layers.push(Layer {
                weights,
                bias,
                activation,
            });
        }
        Self::new(layers)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn sizes(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].weights.nrows())
            .chain(self.layers.iter().map(|l| l.weights.ncols()))
            .collect()
    }

    pub fn activations(&self) -> Vec<Activation> {
        self.layers.iter().map(|l| l.activation).collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            out.extend(layer.weights.iter());
            out.extend(layer.bias.iter());
        }
        out
    }

    /// Same architecture with replacement parameters.
    pub fn with_params(&self, params: &[f64]) -> Result<Self> {
        Self::from_parts(&self.sizes(), &self.activations(), params)
    }

    fn forward(&self, x: ArrayView2<'_, f64>) -> Vec<Array2<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(x.to_owned());
        for layer in &self.layers {
            let mut z = acts.last().expect("input pushed").dot(&layer.weights) + &layer.bias;
            layer.activation.apply(&mut z);
            acts.push(z);
        }
        acts
    }

    /// Batch loss and its gradient, flattened in the order of
    /// [`MlpModel::params`]. MSE pairs with an identity output and log-loss
    /// with a logistic output.
    pub fn batch_gradient(
        &self,
        x: ArrayView2<'_, f64>,
        y: ArrayView2<'_, f64>,
        loss: LossKind,
    ) -> Result<(f64, Vec<f64>)> {
        check_input(x, self.input_dim())?;
        let (value, grads) = self.loss_and_grads(x, y, loss)?;
        let mut flat = Vec::with_capacity(self.param_count());
        for (gw, gb) in &grads {
            flat.extend(gw.iter());
            flat.extend(gb.iter());
        }
        Ok((value, flat))
    }

    fn loss_and_grads(
        &self,
        x: ArrayView2<'_, f64>,
        y: ArrayView2<'_, f64>,
        loss: LossKind,
    ) -> Result<(f64, Vec<(Array2<f64>, Array1<f64>)>)> {
        let output = self.layers.last().expect("non-empty").activation;
        match (loss, output) {
            (LossKind::MeanSquaredError, Activation::Identity)
            | (LossKind::LogisticLoss, Activation::Sigmoid) => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "cannot train a {output:?} output layer with {loss}"
                )))
            }
        }
        if y.dim() != (x.nrows(), self.output_dim()) {
            return Err(Error::Shape(format!(
                "targets are {:?}, expected ({}, {})",
                y.dim(),
                x.nrows(),
                self.output_dim()
            )));
        }
        let acts = self.forward(x);
        let out = acts.last().expect("output");
        let rows = x.nrows() as f64;
        let value = out
            .outer_iter()
            .zip(y.outer_iter())
            .map(|(p, t)| loss.row_loss(p, t))
            .sum::<f64>()
            / rows;

        let mut delta = out - &y;
        if loss == LossKind::MeanSquaredError {
            delta *= 2.0;
        }
        delta /= rows;

        let mut grads = Vec::with_capacity(self.layers.len());
        for k in (0..self.layers.len()).rev() {
            let input = &acts[k];
            let gw = input.t().dot(&delta);
            let gb = delta.sum_axis(Axis(0));
            if k > 0 {
                let mut next = delta.dot(&self.layers[k].weights.t());
                // every hidden layer is a rectifier
                next.zip_mut_with(input, |d, &a| {
                    if a <= 0.0 {
                        *d = 0.0;
                    }
                });
                delta = next;
            }
            grads.push((gw, gb));
        }
        grads.reverse();
        Ok((value, grads))
    }
}

impl Predictor for MlpModel {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        check_input(x, self.input_dim())?;
        Ok(self.forward(x).pop().expect("output"))
    }

    fn input_dim(&self) -> usize {
        self.layers[0].weights.nrows()
    }

    fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").weights.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    Adam,
    Sgd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LrSchedule {
    Constant,
    /// Half-cosine decay from the base rate to zero over the run.
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MlpHyper {
    pub hidden: Vec<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Rows per update; anything >= n trains full-batch.
    pub batch_size: usize,
    pub seed: u64,
    pub loss: LossKind,
    pub optimizer: Optimizer,
    pub schedule: LrSchedule,
    /// Train on standardized inputs (and outputs, for MSE) and fold the
    /// affine maps back into the first and last layers afterwards.
    pub standardize: bool,
}

impl Default for MlpHyper {
    fn default() -> Self {
        Self {
            hidden: vec![128, 128, 128],
            epochs: 300,
            learning_rate: 1e-3,
            batch_size: 128,
            seed: 0,
            loss: LossKind::MeanSquaredError,
            optimizer: Optimizer::Adam,
            schedule: LrSchedule::Cosine,
            standardize: true,
        }
    }
}

impl MlpHyper {
    pub fn validate(&self) -> Result<()> {
        if self.hidden.contains(&0) {
            return Err(Error::InvalidArgument("hidden layer widths must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !matches!(self.loss, LossKind::MeanSquaredError | LossKind::LogisticLoss) {
            return Err(Error::InvalidArgument(format!(
                "an MLP trains on mse or logloss, not {}",
                self.loss
            )));
        }
        Ok(())
    }

    fn output_activation(&self) -> Activation {
        match self.loss {
            LossKind::LogisticLoss => Activation::Sigmoid,
            _ => Activation::Identity,
        }
    }
}

/// A trained network and its per-epoch training loss.
#[derive(Debug, Clone)]
pub struct MlpTraining {
    pub model: MlpModel,
    /// Row-weighted mean of the batch losses seen during each epoch (in
    /// standardized units when standardizing).
    pub loss_history: Vec<f64>,
}

pub fn train_mlp(d: &Dataset, hyper: &MlpHyper) -> Result<MlpModel> {
    fit_mlp(d, hyper).map(|t| t.model)
}

struct Standardizer {
    mean: Array1<f64>,
    std: Array1<f64>,
}

impl Standardizer {
    fn fit(a: ArrayView2<'_, f64>) -> Self {
        let mean = a.mean_axis(Axis(0)).expect("rows");
        let std = a.std_axis(Axis(0), 0.0).mapv(|s| if s > 0.0 { s } else { 1.0 });
        Self { mean, std }
    }

    fn identity(width: usize) -> Self {
        Self {
            mean: Array1::zeros(width),
            std: Array1::ones(width),
        }
    }

    fn apply(&self, a: ArrayView2<'_, f64>) -> Array2<f64> {
        (&a - &self.mean) / &self.std
    }
}

pub fn fit_mlp(d: &Dataset, hyper: &MlpHyper) -> Result<MlpTraining> {
    hyper.validate()?;
    if hyper.loss == LossKind::LogisticLoss {
        if let Some(v) = d.y().iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(Error::InvalidArgument(format!(
                "logloss needs targets in {{0, 1}}, found {v}"
            )));
        }
    }
    let (p, m, n) = (d.n_features(), d.n_targets(), d.n_rows());
    let x_scale = if hyper.standardize {
        Standardizer::fit(d.x())
    } else {
        Standardizer::identity(p)
    };
    let y_scale = if hyper.standardize && hyper.loss == LossKind::MeanSquaredError {
        Standardizer::fit(d.y())
    } else {
        Standardizer::identity(m)
    };
    let xs = x_scale.apply(d.x());
    let ys = y_scale.apply(d.y());

    let mut sizes = vec![p];
    sizes.extend(&hyper.hidden);
    sizes.push(m);
    let mut net = MlpModel::init(&sizes, hyper.output_activation(), hyper.seed)?;

    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    shuffle_rng.set_stream(1);
    let mut adam = AdamState::new(&net);
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(hyper.epochs);
    let full_batch = hyper.batch_size >= n;

    for epoch in 0..hyper.epochs {
        let lr = match hyper.schedule {
            LrSchedule::Constant => hyper.learning_rate,
            LrSchedule::Cosine => {
                let progress = epoch as f64 / hyper.epochs as f64;
                hyper.learning_rate * 0.5 * (1.0 + (std::f64::consts::PI * progress).cos())
            }
        };
        if !full_batch {
            order.shuffle(&mut shuffle_rng);
        }
        let mut total = 0.0;
        for rows in order.chunks(hyper.batch_size) {
            let (loss, grads) = if full_batch {
                net.loss_and_grads(xs.view(), ys.view(), hyper.loss)?
            } else {
                let xb = xs.select(Axis(0), rows);
                let yb = ys.select(Axis(0), rows);
                net.loss_and_grads(xb.view(), yb.view(), hyper.loss)?
            };
            if !loss.is_finite() {
                return Err(Error::Diverged { epoch, loss });
            }
            total += loss * rows.len() as f64;
            match hyper.optimizer {
                Optimizer::Sgd => {
                    for (layer, (gw, gb)) in net.layers.iter_mut().zip(&grads) {
                        layer.weights.scaled_add(-lr, gw);
                        layer.bias.scaled_add(-lr, gb);
                    }
                }
                Optimizer::Adam => adam.step(&mut net, &grads, lr),
            }
        }
        let epoch_loss = total / n as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Diverged {
                epoch,
                loss: epoch_loss,
            });
        }
        if epoch % 50 == 0 || epoch + 1 == hyper.epochs {
            log::debug!("epoch {epoch}: training loss {epoch_loss:.6}");
        }
        history.push(epoch_loss);
    }

    if net.params().iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged {
            epoch: hyper.epochs,
            loss: f64::NAN,
        });
    }
    if hyper.standardize {
        fold_standardization(&mut net, &x_scale, &y_scale);
    }
    Ok(MlpTraining {
        model: net,
        loss_history: history,
    })
}

/// Rewrites the network so it accepts raw inputs and emits raw outputs.
fn fold_standardization(net: &mut MlpModel, x: &Standardizer, y: &Standardizer) {
    let first = &mut net.layers[0];
    for (i, mut row) in first.weights.rows_mut().into_iter().enumerate() {
        row /= x.std[i];
    }
    let shift = x.mean.dot(&first.weights);
    first.bias -= &shift;

    let last = net.layers.last_mut().expect("non-empty");
    if last.activation == Activation::Identity {
        for (k, mut column) in last.weights.columns_mut().into_iter().enumerate() {
            column *= y.std[k];
        }
        last.bias = &last.bias * &y.std + &y.mean;
    }
}

struct AdamState {
    t: i32,
    m: Vec<(Array2<f64>, Array1<f64>)>,
    v: Vec<(Array2<f64>, Array1<f64>)>,
}

impl AdamState {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(net: &MlpModel) -> Self {
        let zeros: Vec<_> = net
            .layers
            .iter()
            .map(|l| (Array2::zeros(l.weights.dim()), Array1::zeros(l.bias.len())))
            .collect();
        Self {
            t: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    fn step(&mut self, net: &mut MlpModel, grads: &[(Array2<f64>, Array1<f64>)], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        let update = |param: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
            *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
            *param -= lr * (*m / c1) / ((*v / c2).sqrt() + Self::EPS);
        };
        for (k, layer) in net.layers.iter_mut().enumerate() {
            let (gw, gb) = &grads[k];
            let (mw, mb) = &mut self.m[k];
            let (vw, vb) = &mut self.v[k];
            ndarray::Zip::from(&mut layer.weights)
                .and(gw)
                .and(mw)
                .and(vw)
                .for_each(|p, &g, m, v| update(p, g, m, v));
            ndarray::Zip::from(&mut layer.bias)
                .and(gb)
                .and(mb)
                .and(vb)
                .for_each(|p, &g, m, v| update(p, g, m, v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::gen_quadratic;
    use ndarray::array;

    fn small_net(output: Activation) -> MlpModel {
        MlpModel::init(&[3, 5, 4, 2], output, 7).unwrap()
    }

    #[test]
    fn params_round_trip() {
        let net = small_net(Activation::Identity);
        assert_eq!(net.param_count(), 3 * 5 + 5 + 5 * 4 + 4 + 4 * 2 + 2);
        let again = net.with_params(&net.params()).unwrap();
        assert_eq!(again, net);
        assert!(net.with_params(&[0.0; 3]).is_err());
    }

    #[test]
    fn mismatched_layers_are_rejected() {
        let a = Layer {
            weights: Array2::zeros((2, 3)),
            bias: Array1::zeros(3),
            activation: Activation::Relu,
        };
        let b = Layer {
            weights: Array2::zeros((4, 1)),
            bias: Array1::zeros(1),
            activation: Activation::Identity,
        };
        assert!(matches!(MlpModel::new(vec![a, b]), Err(Error::Shape(_))));
    }

    fn check_gradient(net: &MlpModel, x: ArrayView2<'_, f64>, y: ArrayView2<'_, f64>, loss: LossKind) {
        let (_, grad) = net.batch_gradient(x, y, loss).unwrap();
        let params = net.params();
        let h = 1e-6;
        for k in 0..params.len() {
            let mut plus = params.clone();
            plus[k] += h;
            let mut minus = params.clone();
            minus[k] -= h;
            let lp = net.with_params(&plus).unwrap().batch_gradient(x, y, loss).unwrap().0;
            let lm = net.with_params(&minus).unwrap().batch_gradient(x, y, loss).unwrap().0;
            let fd = (lp - lm) / (2.0 * h);
            let scale = fd.abs().max(grad[k].abs()).max(1e-4);
            assert!(
                (fd - grad[k]).abs() / scale < 1e-5,
                "param {k}: analytic {} vs numeric {fd}",
                grad[k]
            );
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let x = array![
            [0.5, -0.2, 0.9],
            [0.1, 0.7, -0.4],
            [0.8, -0.6, 0.3],
            [0.2, 0.4, -0.9],
            [0.95, 0.05, 0.6]
        ];
        let y = array![[0.3, -0.1], [1.2, 0.0], [-0.5, 0.4], [0.0, 0.8], [0.7, -0.7]];
        check_gradient(&small_net(Activation::Identity), x.view(), y.view(), LossKind::MeanSquaredError);
        let labels = array![[1.0, 0.0], [0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
        check_gradient(&small_net(Activation::Sigmoid), x.view(), labels.view(), LossKind::LogisticLoss);
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let d = gen_quadratic(50, 3);
        let hyper = MlpHyper {
            hidden: vec![8, 8],
            epochs: 0,
            standardize: false,
            seed: 9,
            ..MlpHyper::default()
        };
        let trained = train_mlp(&d, &hyper).unwrap();
        let init = MlpModel::init(&[3, 8, 8, 4], Activation::Identity, 9).unwrap();
        assert_eq!(trained, init);
    }

    #[test]
    fn standardization_folding_preserves_predictions() {
        let d = gen_quadratic(200, 4);
        let hyper = MlpHyper {
            hidden: vec![16],
            epochs: 3,
            seed: 2,
            ..MlpHyper::default()
        };
        // Train on standardized data by hand, then compare with the folded model.
        let folded = train_mlp(&d, &hyper).unwrap();
        let x_scale = Standardizer::fit(d.x());
        let y_scale = Standardizer::fit(d.y());
        let mut unfolded = train_mlp(
            &Dataset::unnamed(x_scale.apply(d.x()), y_scale.apply(d.y())).unwrap(),
            &MlpHyper {
                standardize: false,
                ..hyper.clone()
            },
        )
        .unwrap();
        fold_standardization(&mut unfolded, &x_scale, &y_scale);
        let a = folded.predict(d.x()).unwrap();
        let b = unfolded.predict(d.x()).unwrap();
        for (u, v) in a.iter().zip(b.iter()) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn full_batch_gd_loss_is_non_increasing() {
        let d = gen_quadratic(400, 5);
        let hyper = MlpHyper {
            hidden: vec![16, 16],
            epochs: 60,
            learning_rate: 1e-3,
            batch_size: usize::MAX,
            optimizer: Optimizer::Sgd,
            schedule: LrSchedule::Constant,
            seed: 1,
            ..MlpHyper::default()
        };
        let history = fit_mlp(&d, &hyper).unwrap().loss_history;
        assert_eq!(history.len(), 60);
        for w in history.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "{} then {}", w[0], w[1]);
        }
        assert!(history[59] < history[0]);
    }

    #[test]
    fn divergence_reports_epoch() {
        let d = gen_quadratic(100, 5);
        let hyper = MlpHyper {
            hidden: vec![32, 32],
            epochs: 200,
            learning_rate: 1e6,
            batch_size: usize::MAX,
            optimizer: Optimizer::Sgd,
            schedule: LrSchedule::Constant,
            ..MlpHyper::default()
        };
        match train_mlp(&d, &hyper) {
            Err(Error::Diverged { epoch, .. }) => assert!(epoch < 200),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn training_is_seeded() {
        let d = gen_quadratic(300, 6);
        let hyper = MlpHyper {
            hidden: vec![8],
            epochs: 4,
            batch_size: 32,
            ..MlpHyper::default()
        };
        assert_eq!(train_mlp(&d, &hyper).unwrap(), train_mlp(&d, &hyper).unwrap());
    }

    #[test]
    fn rejects_bad_hyper() {
        let d = gen_quadratic(20, 1);
        for hyper in [
            MlpHyper { batch_size: 0, ..MlpHyper::default() },
            MlpHyper { learning_rate: -1.0, ..MlpHyper::default() },
            MlpHyper { loss: LossKind::MeanAbsoluteError, ..MlpHyper::default() },
            MlpHyper { hidden: vec![0], ..MlpHyper::default() },
        ] {
            assert!(matches!(train_mlp(&d, &hyper), Err(Error::InvalidArgument(_))));
        }
    }
}
