//! JSON weight bundles.
//!
//! ```json
//! {"format": "rashomon-model", "version": 1, "kind": "mlp",
//!  "dims": [3, 128, 4], "activations": ["relu", "identity"],
//!  "param_count": 1028, "params": [...], "metadata": {...}}
//! ```
//!
//! `params` holds each layer's weights (row-major, in x out) followed by its
//! bias. Linear models use `dims = [p, m]`; the quadratic oracle has no
//! parameters and stores its root selection in the metadata.

use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::{Activation, LinearModel, MlpModel, Model, Predictor, QuadraticOracle, RootSign};
use crate::data::LossKind;
use crate::error::{BundleError, Error, Result};

pub const BUNDLE_FORMAT: &str = "rashomon-model";
pub const BUNDLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_sign: Option<RootSign>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub feature_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format: String,
    pub version: u32,
    pub kind: String,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub activations: Vec<Activation>,
    pub param_count: usize,
    pub params: Vec<f64>,
    #[serde(default)]
    pub metadata: BundleMetadata,
}

impl ModelBundle {
    pub fn from_model(model: &Model, mut metadata: BundleMetadata) -> Self {
        let (dims, activations, params) = match model {
            Model::Linear(m) => {
                let mut params: Vec<f64> = m.weights().iter().copied().collect();
                params.extend(m.bias().iter());
                (vec![m.weights().nrows(), m.weights().ncols()], Vec::new(), params)
            }
            Model::Mlp(m) => (m.sizes(), m.activations(), m.params()),
            Model::Quadratic(q) => {
                metadata.root_sign = Some(q.root_sign);
                (vec![3, q.output_dim()], Vec::new(), Vec::new())
            }
        };
        Self {
            format: BUNDLE_FORMAT.to_string(),
            version: BUNDLE_VERSION,
            kind: model.kind().to_string(),
            dims,
            activations,
            param_count: params.len(),
            params,
            metadata,
        }
    }

    pub fn to_model(&self) -> Result<Model> {
        if self.format != BUNDLE_FORMAT {
            return Err(BundleError::Corrupt(format!("format tag '{}'", self.format)).into());
        }
        if self.version != BUNDLE_VERSION {
            return Err(BundleError::Version {
                found: self.version,
                expected: BUNDLE_VERSION,
            }
            .into());
        }
        if !matches!(self.kind.as_str(), "linear" | "mlp" | "quadratic") {
            return Err(BundleError::UnsupportedKind(self.kind.clone()).into());
        }
        if self.params.len() != self.param_count {
            return Err(BundleError::Corrupt(format!(
                "declares {} parameters but holds {}",
                self.param_count,
                self.params.len()
            ))
            .into());
        }
        let corrupt = |e: Error| -> Error { BundleError::Corrupt(e.to_string()).into() };
        match self.kind.as_str() {
            "linear" => {
                let &[p, m] = self.dims.as_slice() else {
                    return Err(BundleError::Corrupt(format!("linear dims {:?}", self.dims)).into());
                };
                if self.params.len() != p * m + m {
                    return Err(BundleError::Corrupt(format!(
                        "linear {p}x{m} needs {} parameters, has {}",
                        p * m + m,
                        self.params.len()
                    ))
                    .into());
                }
                let weights = Array2::from_shape_vec((p, m), self.params[..p * m].to_vec())
                    .map_err(|e| BundleError::Corrupt(e.to_string()))?;
                let bias = Array1::from(self.params[p * m..].to_vec());
                LinearModel::new(weights, bias).map(Model::Linear).map_err(corrupt)
            }
            "mlp" => MlpModel::from_parts(&self.dims, &self.activations, &self.params)
                .map(Model::Mlp)
                .map_err(corrupt),
            _ => {
                let sign = self.metadata.root_sign.unwrap_or(RootSign::Both);
                let oracle = QuadraticOracle::new(sign);
                if self.dims != [3, oracle.output_dim()] || !self.params.is_empty() {
                    return Err(BundleError::Corrupt(format!("quadratic dims {:?}", self.dims)).into());
                }
                Ok(Model::Quadratic(oracle))
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parses a bundle, checking the version before anything else so that a
    /// newer file is reported as such rather than as corrupt.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| BundleError::Corrupt(e.to_string()))?;
        let version = value
            .get("version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| BundleError::Corrupt("missing version field".into()))?;
        if version != u64::from(BUNDLE_VERSION) {
            return Err(BundleError::Version {
                found: u32::try_from(version).unwrap_or(u32::MAX),
                expected: BUNDLE_VERSION,
            }
            .into());
        }
        if let Some(kind) = value.get("kind").and_then(serde_json::Value::as_str) {
            if !matches!(kind, "linear" | "mlp" | "quadratic") {
                return Err(BundleError::UnsupportedKind(kind.to_string()).into());
            }
        }
        serde_json::from_value(value).map_err(|e| BundleError::Corrupt(e.to_string()).into())
    }
}

pub fn save_bundle(model: &Model, metadata: BundleMetadata, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = ModelBundle::from_model(model, metadata).to_json()?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<(Model, BundleMetadata)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bundle = ModelBundle::from_json(&text)?;
    Ok((bundle.to_model()?, bundle.metadata))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rows(n: usize, p: usize) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        Array2::from_shape_simple_fn((n, p), || rng.random_range(-3.0..3.0))
    }

    #[test]
    fn mlp_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let model = Model::Mlp(MlpModel::init(&[3, 16, 16, 4], Activation::Identity, 3).unwrap());
        let meta = BundleMetadata {
            loss: Some(LossKind::MeanSquaredError),
            seed: Some(3),
            final_loss: Some(0.125),
            ..BundleMetadata::default()
        };
        save_bundle(&model, meta.clone(), &path).unwrap();
        let (loaded, loaded_meta) = load_bundle(&path).unwrap();
        assert_eq!(loaded, model);
        assert_eq!(loaded_meta, meta);
        let x = random_rows(10, 3);
        assert_eq!(loaded.predict(x.view()).unwrap(), model.predict(x.view()).unwrap());
    }

    #[test]
    fn linear_and_oracle_round_trip() {
        let linear = Model::Linear(LinearModel::new(array![[0.1, 0.2], [1.0 / 3.0, -4.0]], array![0.5, -0.25]).unwrap());
        let oracle = Model::Quadratic(QuadraticOracle::new(RootSign::Minus));
        for model in [linear, oracle] {
            let bundle = ModelBundle::from_model(&model, BundleMetadata::default());
            let back = ModelBundle::from_json(&bundle.to_json().unwrap()).unwrap();
            assert_eq!(back.to_model().unwrap(), model);
        }
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let model = Model::Mlp(MlpModel::init(&[3, 4, 2], Activation::Identity, 1).unwrap());
        save_bundle(&model, BundleMetadata::default(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(load_bundle(&path), Err(Error::Bundle(BundleError::Corrupt(_)))));
    }

    #[test]
    fn parameter_count_mismatch_is_corrupt() {
        let model = Model::Mlp(MlpModel::init(&[3, 4, 2], Activation::Identity, 1).unwrap());
        let mut bundle = ModelBundle::from_model(&model, BundleMetadata::default());
        bundle.params.pop();
        let back = ModelBundle::from_json(&bundle.to_json().unwrap()).unwrap();
        assert!(matches!(back.to_model(), Err(Error::Bundle(BundleError::Corrupt(_)))));
    }

    #[test]
    fn unknown_kind_and_version_are_explicit() {
        let model = Model::Quadratic(QuadraticOracle::default());
        let mut bundle = ModelBundle::from_model(&model, BundleMetadata::default());
        bundle.kind = "forest".into();
        let err = ModelBundle::from_json(&bundle.to_json().unwrap()).unwrap_err();
        assert!(matches!(err, Error::Bundle(BundleError::UnsupportedKind(k)) if k == "forest"));

        let mut bundle = ModelBundle::from_model(&model, BundleMetadata::default());
        bundle.version = 7;
        let err = ModelBundle::from_json(&bundle.to_json().unwrap()).unwrap_err();
        assert!(matches!(err, Error::Bundle(BundleError::Version { found: 7, expected: 1 })));
    }
}
