//! Sampling generalized Rashomon sets around a black-box reference model and
//! measuring how much feature attributions vary across the set.

pub mod attribution;
pub mod config;
pub mod data;
pub mod error;
pub mod metrics;
pub mod models;
pub mod pipeline;
pub mod rashomon;
pub mod sampler;

pub use error::{BundleError, Error, Result};
