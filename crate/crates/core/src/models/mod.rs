//! Predictors behind one interface, their trainers, the quadratic-root
//! oracle and the weight-bundle format.

mod bundle;
mod linear;
mod mlp;
mod quadratic;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::data::{perturb_columns, Perturbation};
use crate::error::{Error, Result};

pub use bundle::{load_bundle, save_bundle, BundleMetadata, ModelBundle, BUNDLE_FORMAT, BUNDLE_VERSION};
pub use linear::{train_linear, LinearModel};
pub use mlp::{fit_mlp, train_mlp, Activation, Layer, LrSchedule, MlpHyper, MlpModel, MlpTraining, Optimizer};
pub use quadratic::{gen_quadratic, QuadraticOracle, RootSign};

/// A deterministic map from an n x p feature matrix to an n x m output
/// matrix.
pub trait Predictor: Send + Sync {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>>;
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
}

pub(crate) fn check_input(x: ArrayView2<'_, f64>, p: usize) -> Result<()> {
    if x.ncols() != p {
        return Err(Error::Shape(format!(
            "model expects {p} features, got {}",
            x.ncols()
        )));
    }
    if let Some(((r, c), v)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite(format!("input[{r}, {c}] = {v}")));
    }
    Ok(())
}

/// Any of the native predictors.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Mlp(MlpModel),
    Quadratic(QuadraticOracle),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Linear(_) => "linear",
            Model::Mlp(_) => "mlp",
            Model::Quadratic(_) => "quadratic",
        }
    }

    fn inner(&self) -> &dyn Predictor {
        match self {
            Model::Linear(m) => m,
            Model::Mlp(m) => m,
            Model::Quadratic(m) => m,
        }
    }
}

impl Predictor for Model {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        self.inner().predict(x)
    }

    fn input_dim(&self) -> usize {
        self.inner().input_dim()
    }

    fn output_dim(&self) -> usize {
        self.inner().output_dim()
    }
}

impl From<LinearModel> for Model {
    fn from(m: LinearModel) -> Self {
        Model::Linear(m)
    }
}

impl From<MlpModel> for Model {
    fn from(m: MlpModel) -> Self {
        Model::Mlp(m)
    }
}

impl From<QuadraticOracle> for Model {
    fn from(m: QuadraticOracle) -> Self {
        Model::Quadratic(m)
    }
}

/// `f(tau * X + zeta)`: a reference model seen through an input
/// transformation.
pub struct InputActivated<'a> {
    pub base: &'a dyn Predictor,
    pub perturbation: &'a Perturbation,
}

impl Predictor for InputActivated<'_> {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if self.perturbation.is_identity() {
            return self.base.predict(x);
        }
        let z = perturb_columns(x, self.perturbation)?;
        self.base.predict(z.view())
    }

    fn input_dim(&self) -> usize {
        self.base.input_dim()
    }

    fn output_dim(&self) -> usize {
        self.base.output_dim()
    }
}

/// Goodness of fit on a held-out split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitQuality {
    /// Coefficient of determination averaged uniformly over output columns.
    pub r2: f64,
    /// Mean absolute error over every entry.
    pub mae: f64,
}

pub fn fit_quality(predictions: ArrayView2<'_, f64>, targets: ArrayView2<'_, f64>) -> Result<FitQuality> {
    if predictions.dim() != targets.dim() || targets.nrows() == 0 {
        return Err(Error::Shape(format!(
            "predictions are {:?} but targets are {:?}",
            predictions.dim(),
            targets.dim()
        )));
    }
    let mut r2_sum = 0.0;
    for (p, y) in predictions.columns().into_iter().zip(targets.columns()) {
        let mean = y.mean().unwrap_or(0.0);
        let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        let ss_res: f64 = p.iter().zip(y.iter()).map(|(a, b)| (a - b).powi(2)).sum();
        r2_sum += if ss_tot > 0.0 {
            1.0 - ss_res / ss_tot
        } else if ss_res == 0.0 {
            1.0
        } else {
            0.0
        };
    }
    let mae = predictions
        .iter()
        .zip(targets.iter())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / predictions.len() as f64;
    Ok(FitQuality {
        r2: r2_sum / targets.ncols() as f64,
        mae,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn fit_quality_perfect_and_mean_predictor() {
        let y = array![[1.0, 0.0], [2.0, 1.0], [3.0, 5.0]];
        let q = fit_quality(y.view(), y.view()).unwrap();
        assert_eq!((q.r2, q.mae), (1.0, 0.0));
        let mean = array![[2.0, 2.0], [2.0, 2.0], [2.0, 2.0]];
        let q = fit_quality(mean.view(), y.view()).unwrap();
        assert!(q.r2.abs() < 1e-12);
        assert!((q.mae - (1.0 + 0.0 + 1.0 + 2.0 + 1.0 + 3.0) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn input_activated_scales_before_predicting() {
        let base = LinearModel::new(array![[1.0], [1.0]], ndarray::Array1::from(vec![0.0])).unwrap();
        let pert = Perturbation::scaling(vec![2.0, 1.0]);
        let f = InputActivated {
            base: &base,
            perturbation: &pert,
        };
        let out = f.predict(array![[1.0, 1.0], [3.0, -1.0]].view()).unwrap();
        assert_eq!(out, array![[3.0], [5.0]]);
    }
}
