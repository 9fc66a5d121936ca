use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::{check_input, Predictor};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// `f(X) = X W + b` with `W` of shape p x m.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Array2<f64>,
    bias: Array1<f64>,
}

impl LinearModel {
    pub fn new(weights: Array2<f64>, bias: Array1<f64>) -> Result<Self> {
        if weights.ncols() != bias.len() {
            return Err(Error::Shape(format!(
                "weights are {:?} but bias has {} entries",
                weights.dim(),
                bias.len()
            )));
        }
        if weights.nrows() == 0 || weights.ncols() == 0 {
            return Err(Error::Shape("linear model needs p >= 1 and m >= 1".into()));
        }
        if weights.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("linear model parameter".into()));
        }
        Ok(Self { weights, bias })
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn bias(&self) -> &Array1<f64> {
        &self.bias
    }
}

impl Predictor for LinearModel {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        check_input(x, self.weights.nrows())?;
        Ok(x.dot(&self.weights) + &self.bias)
    }

    fn input_dim(&self) -> usize {
        self.weights.nrows()
    }

    fn output_dim(&self) -> usize {
        self.weights.ncols()
    }
}

/// Ridge least squares with an unpenalized intercept.
pub fn train_linear(d: &Dataset, l2: f64) -> Result<LinearModel> {
    if !(l2 >= 0.0 && l2.is_finite()) {
        return Err(Error::InvalidArgument(format!("l2 must be >= 0, got {l2}")));
    }
    let x_mean = d.x().mean_axis(Axis(0)).expect("dataset has rows");
    let y_mean = d.y().mean_axis(Axis(0)).expect("dataset has rows");
    let xc = &d.x() - &x_mean;
    let yc = &d.y() - &y_mean;

    let mut gram = xc.t().dot(&xc);
    for i in 0..gram.nrows() {
        gram[[i, i]] += l2;
    }
    let rhs = xc.t().dot(&yc);
    let weights = cholesky_solve(gram, rhs)?;
    let bias = &y_mean - &x_mean.dot(&weights);
    LinearModel::new(weights, bias)
}

/// Solves `A W = B` for symmetric positive definite `A`.
fn cholesky_solve(a: Array2<f64>, b: Array2<f64>) -> Result<Array2<f64>> {
    let p = a.nrows();
    let scale = (0..p).map(|i| a[[i, i]].abs()).fold(0.0, f64::max);
    let mut l = Array2::<f64>::zeros((p, p));
    for j in 0..p {
        let mut diag = a[[j, j]];
        for k in 0..j {
            diag -= l[[j, k]] * l[[j, k]];
        }
        if !(diag > 1e-12 * scale) || scale == 0.0 {
            return Err(Error::Singular);
        }
        let ljj = diag.sqrt();
        l[[j, j]] = ljj;
        for i in j + 1..p {
            let mut v = a[[i, j]];
            for k in 0..j {
                v -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = v / ljj;
        }
    }
    let mut w = b;
    for mut column in w.columns_mut() {
        // forward: L z = b
        for i in 0..p {
            let mut v = column[i];
            for k in 0..i {
                v -= l[[i, k]] * column[k];
            }
            column[i] = v / l[[i, i]];
        }
        // backward: L^T w = z
        for i in (0..p).rev() {
            let mut v = column[i];
            for k in i + 1..p {
                v -= l[[k, i]] * column[k];
            }
            column[i] = v / l[[i, i]];
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{empirical_loss, LossKind};
    use ndarray::array;

    #[test]
    fn zero_model_predicts_zero() {
        let m = LinearModel::new(Array2::zeros((3, 2)), Array1::zeros(2)).unwrap();
        let out = m.predict(array![[1.0, 2.0, 3.0], [-4.0, 0.5, 9.0]].view()).unwrap();
        assert_eq!(out, Array2::<f64>::zeros((2, 2)));
    }

    #[test]
    fn predict_rejects_wrong_width() {
        let m = LinearModel::new(Array2::zeros((3, 1)), Array1::zeros(1)).unwrap();
        assert!(matches!(m.predict(Array2::zeros((2, 2)).view()), Err(Error::Shape(_))));
    }

    #[test]
    fn exact_linear_data_is_recovered() {
        let x = array![[0.0, 1.0], [1.0, 0.5], [2.0, -1.0], [3.0, 4.0], [-1.0, 2.0]];
        let w = array![[2.0, -1.0], [0.5, 3.0]];
        let y = x.dot(&w) + &array![1.0, -2.0];
        let d = Dataset::unnamed(x, y).unwrap();
        let m = train_linear(&d, 0.0).unwrap();
        let pred = m.predict(d.x()).unwrap();
        assert!(empirical_loss(pred.view(), d.y(), LossKind::MeanSquaredError).unwrap() <= 1e-10);
    }

    #[test]
    fn three_point_fit_matches_normal_equations() {
        // y = 2x through the origin, so the centred normal equations give 2.
        let d = Dataset::unnamed(array![[1.0], [2.0], [3.0]], array![[2.0], [4.0], [6.0]]).unwrap();
        let m = train_linear(&d, 0.0).unwrap();
        assert!((m.weights()[[0, 0]] - 2.0).abs() < 1e-8);
        assert!(m.bias()[0].abs() < 1e-8);
    }

    #[test]
    fn large_penalty_shrinks_to_zero() {
        let d = Dataset::unnamed(array![[1.0], [2.0], [3.0]], array![[2.0], [4.0], [6.0]]).unwrap();
        let m = train_linear(&d, 1e12).unwrap();
        assert!(m.weights()[[0, 0]].abs() < 1e-10);
    }

    #[test]
    fn constant_column_without_penalty_is_singular() {
        let d = Dataset::unnamed(array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]], array![[1.0], [2.0], [3.0]]).unwrap();
        assert!(matches!(train_linear(&d, 0.0), Err(Error::Singular)));
        assert!(train_linear(&d, 1e-3).is_ok());
    }
}
