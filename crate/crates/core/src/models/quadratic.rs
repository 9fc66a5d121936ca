use ndarray::{Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_input, Predictor};
use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootSign {
    Plus,
    Minus,
    Both,
}

/// Exact roots of `a x^2 + b x + c` for feature rows `(a, b, c)`.
///
/// Each root is emitted as a (real, imaginary) pair; with [`RootSign::Both`]
/// the `+` root comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticOracle {
    pub root_sign: RootSign,
}

impl QuadraticOracle {
    pub fn new(root_sign: RootSign) -> Self {
        Self { root_sign }
    }

    /// `((re+, im+), (re-, im-))` for one equation.
    pub fn roots(a: f64, b: f64, c: f64) -> ((f64, f64), (f64, f64)) {
        let disc = b * b - 4.0 * a * c;
        let denom = 2.0 * a;
        if disc >= 0.0 {
            let s = disc.sqrt();
            (((-b + s) / denom, 0.0), ((-b - s) / denom, 0.0))
        } else {
            let re = -b / denom;
            let im = (-disc).sqrt() / denom;
            ((re, im), (re, -im))
        }
    }
}

impl Default for QuadraticOracle {
    fn default() -> Self {
        Self::new(RootSign::Both)
    }
}

impl Predictor for QuadraticOracle {
    fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        check_input(x, 3)?;
        let mut out = Array2::zeros((x.nrows(), self.output_dim()));
        for (r, row) in x.outer_iter().enumerate() {
            let (a, b, c) = (row[0], row[1], row[2]);
            if a == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "row {r} has a = 0; the quadratic oracle needs a != 0"
                )));
            }
            let (plus, minus) = Self::roots(a, b, c);
            let values: &[f64] = match self.root_sign {
                RootSign::Plus => &[plus.0, plus.1],
                RootSign::Minus => &[minus.0, minus.1],
                RootSign::Both => &[plus.0, plus.1, minus.0, minus.1],
            };
            for (k, &v) in values.iter().enumerate() {
                out[[r, k]] = v;
            }
        }
        Ok(out)
    }

    fn input_dim(&self) -> usize {
        3
    }

    fn output_dim(&self) -> usize {
        match self.root_sign {
            RootSign::Both => 4,
            _ => 2,
        }
    }
}

/// Synthetic quadratic-root task: `a ~ U(0.01, 1)`, `b, c ~ U(-1, 1)`, four
/// targets `(Re x1, Im x1, Re x2, Im x2)`.
pub fn gen_quadratic(n: usize, seed: u64) -> Dataset {
    assert!(n >= 1, "gen_quadratic needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Array2::zeros((n, 3));
    for mut row in x.rows_mut() {
        row[0] = rng.random_range(0.01..=1.0);
        row[1] = rng.random_range(-1.0..=1.0);
        row[2] = rng.random_range(-1.0..=1.0);
    }
    let y = QuadraticOracle::default()
        .predict(x.view())
        .expect("generated a is never zero");
    Dataset::new(
        x,
        y,
        ["a", "b", "c"].map(String::from).to_vec(),
        ["re_x1", "im_x1", "re_x2", "im_x2"].map(String::from).to_vec(),
    )
    .expect("generated data is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{empirical_loss, LossKind};
    use ndarray::array;

    #[test]
    fn real_roots_of_x_squared_minus_one() {
        let out = QuadraticOracle::default().predict(array![[1.0, 0.0, -1.0]].view()).unwrap();
        assert_eq!(out, array![[1.0, 0.0, -1.0, 0.0]]);
    }

    #[test]
    fn complex_roots_of_x_squared_plus_one() {
        let out = QuadraticOracle::default().predict(array![[1.0, 0.0, 1.0]].view()).unwrap();
        assert_eq!(out, array![[0.0, 1.0, 0.0, -1.0]]);
        let plus = QuadraticOracle::new(RootSign::Plus).predict(array![[1.0, 0.0, 1.0]].view()).unwrap();
        assert_eq!(plus, array![[0.0, 1.0]]);
        let minus = QuadraticOracle::new(RootSign::Minus).predict(array![[1.0, 0.0, 1.0]].view()).unwrap();
        assert_eq!(minus, array![[0.0, -1.0]]);
    }

    #[test]
    fn zero_leading_coefficient_is_an_error() {
        let err = QuadraticOracle::default().predict(array![[0.0, 1.0, 1.0]].view());
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn generator_ranges_and_determinism() {
        let d = gen_quadratic(2000, 11);
        for row in d.x().outer_iter() {
            assert!((0.01..=1.0).contains(&row[0]));
            assert!((-1.0..=1.0).contains(&row[1]));
            assert!((-1.0..=1.0).contains(&row[2]));
        }
        assert_eq!(d, gen_quadratic(2000, 11));
        assert_ne!(d.x(), gen_quadratic(2000, 12).x());
    }

    #[test]
    fn real_discriminant_rows_have_zero_imaginary_targets() {
        let d = gen_quadratic(2000, 12);
        for (x, y) in d.x().outer_iter().zip(d.y().outer_iter()) {
            if x[1] * x[1] - 4.0 * x[0] * x[2] >= 0.0 {
                assert_eq!((y[1], y[3]), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn targets_are_roots_in_complex_arithmetic() {
        let d = gen_quadratic(100, 13);
        for (x, y) in d.x().outer_iter().zip(d.y().outer_iter()) {
            let (a, b, c) = (x[0], x[1], x[2]);
            for (re, im) in [(y[0], y[1]), (y[2], y[3])] {
                // (re + i im)^2 = re^2 - im^2 + 2 i re im
                let real = a * (re * re - im * im) + b * re + c;
                let imag = a * 2.0 * re * im + b * im;
                let size = a.abs() * (re * re + im * im) + b.abs() * re.hypot(im) + c.abs();
                assert!(real.hypot(imag) <= 1e-9 * size.max(1.0), "a={a} b={b} c={c}");
            }
        }
    }

    #[test]
    fn oracle_has_zero_loss_on_its_own_targets() {
        let d = gen_quadratic(500, 14);
        let pred = QuadraticOracle::default().predict(d.x()).unwrap();
        assert_eq!(empirical_loss(pred.view(), d.y(), LossKind::MeanSquaredError).unwrap(), 0.0);
    }
}
